"""Pointwise membership tests for theta-null type loci and multiplicities of
the theta divisor at given points.

A jet entry counts as zero when ``|entry| < abs_eps * max(1, |jet|_inf)``,
where the sup norm runs over every computed order.  Multiplicities are only
resolved up to a cap; beyond it :data:`ABOVE_CAP` is returned.
"""

from dataclasses import dataclass, field

from .characteristics import Characteristic, enumerate_chars, two_torsion_point
from .core import DEFAULT_TOL
from .errors import ValidationError
from .theta import MAX_ORDER, RADIUS_CAP, theta_jet
from .theta import DEFAULT_TOL as ENGINE_TOL


class _AboveCap:
    def __repr__(self):
        return "ABOVE_CAP"

    def __reduce__(self):
        return "ABOVE_CAP"


#: Multiplicity exceeds the requested maximal order.
ABOVE_CAP = _AboveCap()


@dataclass(frozen=True)
class Witness:
    char: Characteristic
    mult: object  # int or ABOVE_CAP
    residual: float

    def to_json(self):
        mult = "above_cap" if self.mult is ABOVE_CAP else self.mult
        return {"char": self.char.to_json(), "mult": mult, "residual": self.residual}


@dataclass(frozen=True)
class LocusReport:
    locus: str
    witnesses: tuple
    tol: object = DEFAULT_TOL
    above_cap: tuple = field(default=())

    def __bool__(self):
        return bool(self.witnesses)

    @property
    def chars(self):
        return [w.char for w in self.witnesses]

    def to_json(self):
        return {
            "locus": self.locus,
            "witnesses": [w.to_json() for w in self.witnesses],
            "above_cap": [c.to_json() for c in self.above_cap],
            "tol": self.tol.to_json(),
        }


def jet_scale(jet):
    return max(1.0, jet.sup_norm())


def scaled_residual(jet, orders):
    """Largest entry over ``orders`` divided by the jet scale."""
    scale = jet_scale(jet)
    return max(jet.max_abs(h) for h in orders) / scale


def first_nonvanishing_order(jet, tol=DEFAULT_TOL):
    scale = jet_scale(jet)
    for h in range(jet.order + 1):
        if jet.max_abs(h) > tol.abs_eps * scale:
            return h
    return ABOVE_CAP


def _check_order(max_order):
    if not 0 <= max_order <= MAX_ORDER:
        raise ValidationError(f"max_order must be in [0, {MAX_ORDER}]")


def multiplicity_at(tau, z, max_order=MAX_ORDER, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL,
                    radius_cap=RADIUS_CAP):
    """Multiplicity of the theta divisor of ``tau`` at ``z``.

    Returns the smallest order whose derivative tensor of theta[0,0] at
    ``z`` is not numerically zero, or :data:`ABOVE_CAP` if every order up
    to ``max_order`` vanishes.
    """
    _check_order(max_order)
    jet = theta_jet(Characteristic.zero(tau.g), tau, z, max_order, engine_tol, radius_cap)
    return first_nonvanishing_order(jet, tol)


def char_multiplicity(tau, char, max_order=MAX_ORDER, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL,
                      radius_cap=RADIUS_CAP):
    """Multiplicity at the 2-torsion point of ``char``."""
    z = two_torsion_point(tau, char)
    return multiplicity_at(tau, z, max_order, tol, engine_tol, radius_cap)


def _scan(tau, chars, scale_order, orders, tol, engine_tol, radius_cap, mult_order):
    """Characteristics whose jet vanishes in ``orders`` at z = 0."""
    out = []
    for c in chars:
        jet = theta_jet(c, tau, None, scale_order, engine_tol, radius_cap)
        r = scaled_residual(jet, orders)
        if r < tol.abs_eps:
            m = char_multiplicity(tau, c, mult_order, tol, engine_tol, radius_cap)
            out.append(Witness(c, m, float(r)))
    return tuple(out)


def theta_null_witnesses(tau, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL, radius_cap=RADIUS_CAP):
    """Even characteristics whose theta constant vanishes at ``tau``."""
    w = _scan(tau, enumerate_chars(tau.g, "even"), 2, (0,), tol, engine_tol, radius_cap,
              MAX_ORDER)
    return LocusReport("theta_null", w, tol)


def d_theta_null_witnesses(tau, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL, radius_cap=RADIUS_CAP):
    """Odd characteristics whose gradient at z = 0 vanishes."""
    w = _scan(tau, enumerate_chars(tau.g, "odd"), 3, (1,), tol, engine_tol, radius_cap,
              MAX_ORDER)
    return LocusReport("d_theta_null", w, tol)


def d2_theta_null_witnesses(tau, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL, radius_cap=RADIUS_CAP):
    """Even characteristics with vanishing theta constant and vanishing
    tau-gradient (equivalently, by the heat equation, vanishing z-Hessian)."""
    w = _scan(tau, enumerate_chars(tau.g, "even"), 4, (0, 2), tol, engine_tol, radius_cap,
              MAX_ORDER)
    return LocusReport("d2_theta_null", w, tol)


def in_A_k(tau, char, k, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL, radius_cap=RADIUS_CAP):
    """Whether every z-derivative of theta[char] of order <= k vanishes at 0."""
    if k < 0 or k + 2 > MAX_ORDER:
        raise ValidationError(f"need 0 <= k <= {MAX_ORDER - 2}")
    jet = theta_jet(char, tau, None, k + 2, engine_tol, radius_cap)
    return scaled_residual(jet, range(k + 1)) < tol.abs_eps


def dk_theta_null_witnesses(tau, k, max_order=MAX_ORDER, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL,
                            radius_cap=RADIUS_CAP):
    """2-torsion points of multiplicity ``m`` with ``m - k`` a positive even
    integer, ``m <= max_order``.  Points whose multiplicity exceeds the cap
    are listed in ``above_cap``."""
    if k < 0 or not k + 2 <= max_order <= MAX_ORDER:
        raise ValidationError(f"need k + 2 <= max_order <= {MAX_ORDER}")
    witnesses, above = [], []
    for c in enumerate_chars(tau.g, "all"):
        z = two_torsion_point(tau, c)
        jet = theta_jet(Characteristic.zero(tau.g), tau, z, max_order, engine_tol, radius_cap)
        m = first_nonvanishing_order(jet, tol)
        if m is ABOVE_CAP:
            above.append(c)
            continue
        if m - k >= 2 and (m - k) % 2 == 0:
            r = scaled_residual(jet, range(m)) if m > 0 else 0.0
            witnesses.append(Witness(c, m, float(r)))
    return LocusReport(f"dk_theta_null({k})", tuple(witnesses), tol, tuple(above))
