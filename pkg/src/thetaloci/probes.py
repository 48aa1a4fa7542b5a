"""Jacobian-rank probes at explicit sample points and Fourier-Jacobi
leading-term ratios.

Every tau-direction derivative is analytic: a derivative in ``tau_ab`` is
the z-derivative ``d_a d_b`` divided by :func:`~thetaloci.theta.heat_factor`.
Probes attach the rank they expect but never assert it.
"""

from dataclasses import dataclass, field

import numpy as np

from .characteristics import Characteristic
from .constructors import decomposable_singular_sample, fj_family, thetanull_times_elliptics
from .core import DEFAULT_TOL, numerical_rank, singular_values, validate_siegel
from .errors import DimensionMismatch, NotOnTsing, NotOnY, ValidationError
from .loci import in_A_k, jet_scale
from .theta import (
    DEFAULT_TOL as ENGINE_TOL,
    MAX_ORDER,
    RADIUS_CAP,
    heat_factor,
    multi_indices,
    pair_indices,
    theta_jet,
    theta_jet_slices,
)


@dataclass(frozen=True)
class RankProbeResult:
    shape: tuple
    singular_values: tuple
    rank: int
    expected: object = None  # int or None
    anchor: str = ""
    matrix: np.ndarray = field(default=None, compare=False, repr=False)
    extra: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        out = {
            "shape": list(self.shape),
            "singular_values": list(self.singular_values),
            "rank": self.rank,
            "expected": self.expected,
            "anchor": self.anchor,
        }
        if self.extra:
            out["extra"] = self.extra
        return out


def _result(M, tol, expected, anchor, extra=None):
    M = np.array(M, dtype=complex)
    M.setflags(write=False)
    sv = tuple(float(s) for s in singular_values(M))
    return RankProbeResult(M.shape, sv, numerical_rank(M, tol), expected, anchor, M,
                           dict(extra or {}))


def _check_k(k):
    if k < 0 or k + 2 > MAX_ORDER:
        raise ValidationError(f"need 0 <= k <= {MAX_ORDER - 2}")


def _tau_block(jet, rows, pairs):
    """Entries ``d_R d_a d_b theta / heat(a, b)`` for row multi-indices R and
    column pairs (a, b)."""
    return np.array([[jet.entry(*r, a, b) / heat_factor(a, b) for a, b in pairs] for r in rows])


def irred_jacobian(sample, k, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL, radius_cap=RADIUS_CAP):
    """Jacobian in the coordinates ``tau_ab`` of the equations
    ``d_I theta[char](tau, 0) = 0``, ``|I| <= k``, at a product sample.

    Rows are the pairs ``a <= b``, columns the multi-indices ``I`` grouped by
    length.  Columns with ``|I| <= k - 2`` vanish at such a sample and are
    kept for shape.  Expected rank ``g k + 1 - k(k+1)/2``.
    """
    _check_k(k)
    if sample.char is None:
        raise ValidationError("sample carries no characteristic")
    tau, g = sample.tau, sample.tau.g
    jet = theta_jet(sample.char, tau, None, k + 2, engine_tol, radius_cap)
    cols = [I for h in range(k + 1) for I in multi_indices(g, h)]
    M = _tau_block(jet, cols, pair_indices(g)).T
    return _result(M, tol, g * k + 1 - k * (k + 1) // 2, "component_codimension",
                   {"g": g, "k": k, "char": sample.char.to_json()})


def tsing_jacobian(tau, z, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL, radius_cap=RADIUS_CAP):
    """Jacobian of ``theta = d_i theta = d_i d_j theta = 0`` in ``(z, tau)``.

    Shape ``(1 + g + N) x (g + N)`` with ``N = g(g+1)/2``; z-columns first,
    then ``tau_ab`` in pair order.  Raises :class:`NotOnTsing` if the
    scaled residuals of the equations exceed ``tol.abs_eps``.
    """
    g = tau.g
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (g,):
        raise DimensionMismatch(f"z must have length {g}")
    jet = theta_jet(Characteristic.zero(g), tau, z, 4, engine_tol, radius_cap)
    scale = jet_scale(jet)
    resid = max(jet.max_abs(h) for h in range(3)) / scale
    if resid >= tol.abs_eps:
        raise NotOnTsing(f"scaled residual {resid:.3e} of value, gradient and Hessian")
    rows = [I for h in range(3) for I in multi_indices(g, h)]
    zcols = np.array([[jet.entry(*r, l) for l in range(g)] for r in rows])
    M = np.hstack([zcols, _tau_block(jet, rows, pair_indices(g))])
    cubic = np.array([[jet.entry(i, a, b) for a, b in pair_indices(g)] for i in range(g)])
    return _result(M, tol, 2 * g, "tsing_rank",
                   {"residual": float(resid),
                    "hessian_rank": _scaled_rank(jet.hessian(), scale, tol),
                    "cubic_rank": _scaled_rank(cubic, scale, tol)})


def _scaled_rank(M, scale, tol):
    """Rank counting singular values above ``rank_rel_eps * scale``; unlike a
    relative rank it reports 0 for a tensor that vanishes at the jet's scale."""
    return int(np.sum(singular_values(M) > tol.rank_rel_eps * scale))


def codg_L_matrix(tau, char, k, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL, radius_cap=RADIUS_CAP):
    """``L[a, I] = d_a d_I theta[char](tau, 0)`` with ``|I| = k + 1``; a
    ``g x C(g+k, k+1)`` matrix whose rank is compared with ``g``."""
    _check_k(k)
    if not in_A_k(tau, char, k, tol, engine_tol, radius_cap):
        raise ValidationError(f"derivatives of theta[{char}] up to order {k} do not all vanish")
    g = tau.g
    jet = theta_jet(char, tau, None, k + 2, engine_tol, radius_cap)
    L = np.array([[jet.entry(a, *I) for I in multi_indices(g, k + 1)] for a in range(g)])
    return _result(L, tol, g, "codg_L", {"k": k, "char": char.to_json()})


def codg_J_matrix(tau, char, k, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL, radius_cap=RADIUS_CAP):
    """``J[(a, b), I] = d theta_I / d tau_ab`` for ``|I| = k``: the
    tau-Jacobian of the order-k equations, pairs as rows."""
    _check_k(k)
    g = tau.g
    jet = theta_jet(char, tau, None, k + 2, engine_tol, radius_cap)
    J = _tau_block(jet, multi_indices(g, k), pair_indices(g)).T
    return _result(J, tol, None, "codg_J", {"k": k, "char": char.to_json()})


def y_locus_jacobian(tau, char, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL, radius_cap=RADIUS_CAP):
    """Jacobian of ``tau -> grad_z theta[char](tau, 0)`` in the ``tau_ab``.

    A ``g x N`` matrix of third derivatives divided by heat factors;
    expected rank ``g``.  Raises :class:`NotOnY` unless the gradient
    vanishes.
    """
    if not char.is_odd:
        raise ValidationError(f"characteristic {char} is even")
    g = tau.g
    jet = theta_jet(char, tau, None, 3, engine_tol, radius_cap)
    resid = jet.max_abs(1) / jet_scale(jet)
    if resid >= tol.abs_eps:
        raise NotOnY(f"gradient residual {resid:.3e}")
    M = _tau_block(jet, [(i,) for i in range(g)], pair_indices(g))
    return _result(M, tol, g, "y_locus", {"residual": float(resid), "char": char.to_json()})


# Fourier-Jacobi leading terms ------------------------------------------------


class _Excluded:
    def __repr__(self):
        return "EXCLUDED"

    def __reduce__(self):
        return "EXCLUDED"


#: Marker for a ratio whose denominator is numerically zero.
EXCLUDED = _Excluded()

#: Series are truncated at FJ_RELATIVE * abs_eps times the exponential factor,
#: so every defined ratio is accurate far beyond the FJ correction itself.
FJ_RELATIVE = 1e-8


@dataclass(frozen=True)
class FJRatios:
    ratios: tuple  # complex or EXCLUDED, length g + 1
    max_deviation: float  # max |ratio - 1| over defined ratios (nan if none)
    tail: float  # max |non-leading slices / denominator| over defined ratios
    t: float

    @property
    def defined(self):
        return [r for r in self.ratios if r is not EXCLUDED]

    def to_json(self):
        return {
            "t": self.t,
            "ratios": ["excluded" if r is EXCLUDED else [r.real, r.imag] for r in self.ratios],
            "max_deviation": self.max_deviation,
            "tail": self.tail,
        }


def fj_leading_ratio(char, tau, z, t, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL,
                     radius_cap=RADIUS_CAP):
    """Ratios of ``d_i theta[char](Z, 0)`` to their leading Fourier-Jacobi
    terms, ``Z = [[tau, z], [z^T, i t]]``.

    Last eps entry 1: the leading terms are
    ``kappa exp(pi i w/4) d_i theta[alpha, beta](tau, z/2)`` for ``i <= g``
    and ``pi i kappa exp(pi i w/4) theta[alpha, beta](tau, z/2)`` for the
    last coordinate, with ``kappa = s - (-1)^p / s``, ``s = exp(pi i delta_last/2)``
    and ``p`` the parity of ``[alpha, beta]``.  Last eps entry 0: ``d_i
    theta[alpha, beta](tau, 0)`` and
    ``2 pi i (-1)^delta_last (1 - (-1)^p) exp(pi i w) theta[alpha, beta](tau, z)``.

    A ratio is :data:`EXCLUDED` when its denominator, without the
    exponential factor, is below ``tol.abs_eps``.  ``tail`` measures the
    non-leading lattice slices directly, free of cancellation.

    The leading terms are exponentially small in ``t``, so the series are
    truncated relative to them rather than at ``engine_tol``.
    """
    if not t > 0:
        raise ValidationError("t must be positive")
    g = tau.g
    if char.g != g + 1:
        raise DimensionMismatch(f"characteristic must have g + 1 = {g + 1} entries")
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (g,):
        raise DimensionMismatch(f"z must have length {g}")
    Z = fj_family(tau, z, t)
    head = Characteristic(char.eps[:g], char.delta[:g])
    sign_p = -1 if head.is_odd else 1
    w = 1j * t
    head_tol = min(engine_tol, FJ_RELATIVE * tol.abs_eps)
    if char.eps[-1] == 1:
        s = np.exp(0.5j * np.pi * char.delta[-1])
        kappa = s - sign_p / s
        hj = theta_jet(head, tau, z / 2, 1, head_tol, radius_cap)
        base = [kappa * hj.gradient[i] for i in range(g)] + [1j * np.pi * kappa * hj.value]
        factors = [np.exp(0.25j * np.pi * w)] * (g + 1)
        leading = [(0, -1)] * (g + 1)
    else:
        h0 = theta_jet(head, tau, None, 1, head_tol, radius_cap)
        hz = theta_jet(head, tau, z, 0, head_tol, radius_cap).value
        last = 2j * np.pi * (-1) ** char.delta[-1] * (1 - sign_p) * hz
        base = [h0.gradient[i] for i in range(g)] + [last]
        factors = [1.0] * g + [np.exp(1j * np.pi * w)]
        leading = [(0,)] * g + [(1, -1)]
    slice_tol = head_tol * min(abs(f) for f in factors)
    if not slice_tol > 0:
        raise ValidationError(f"t = {t} is too large: leading terms underflow")
    slices = theta_jet_slices(char, Z, None, 1, slice_tol, radius_cap)
    ratios, devs, tails = [], [], []
    for i in range(g + 1):
        if abs(base[i]) < tol.abs_eps:
            ratios.append(EXCLUDED)
            continue
        denom = base[i] * factors[i]
        num = sum(sl.gradient[i] for sl in slices.values())
        rest = sum(sl.gradient[i] for n, sl in slices.items() if n not in leading[i])
        r = complex(num / denom)
        ratios.append(r)
        devs.append(abs(r - 1))
        tails.append(float(abs(rest / denom)))
    return FJRatios(tuple(ratios), max(devs) if devs else float("nan"),
                    max(tails) if tails else float("nan"), float(t))


# Default samples -------------------------------------------------------------


def default_probe(kind, g, k=None, lambdas=None, tol=DEFAULT_TOL, engine_tol=ENGINE_TOL,
                  radius_cap=RADIUS_CAP):
    """Run a probe on its standard sample.

    ``irred``: thetanull_times_elliptics(g, k).  ``tsing``: the decomposable
    singular sample.  ``tsing_product``: the all-odd point of diag(i, 2i, ...),
    of multiplicity g, where no expected rank applies for g >= 4.  ``codg``: the all-odd point of diag(i, 2i, ...) (or of
    the given ``lambdas``), ``k`` defaulting to g - 2.  ``y_locus``: the same
    diagonal point with the all-odd characteristic.
    """
    kw = dict(tol=tol, engine_tol=engine_tol, radius_cap=radius_cap)
    if kind == "irred":
        if k is None:
            raise ValidationError("irred needs k")
        return irred_jacobian(thetanull_times_elliptics(g, k, lambdas), k, **kw)
    if kind == "tsing":
        sample = decomposable_singular_sample(g, lambdas)
        return tsing_jacobian(sample.tau, sample.z, **kw)
    lam = [(a + 1) * 1j for a in range(g)] if lambdas is None else list(lambdas)
    if len(lam) != g:
        raise DimensionMismatch(f"need {g} diagonal entries")
    tau = validate_siegel(np.diag(lam))
    if kind == "tsing_product":
        res = tsing_jacobian(tau, (tau.tau @ np.ones(g) + 1) / 2, **kw)
        return res if g == 3 else RankProbeResult(res.shape, res.singular_values, res.rank, None,
                                                  res.anchor, res.matrix, res.extra)
    if kind == "codg":
        if k is None:
            k = g - 2
        return codg_L_matrix(tau, Characteristic.ones(g), k, **kw)
    if kind == "y_locus":
        return y_locus_jacobian(tau, Characteristic.ones(g), **kw)
    raise ValidationError(f"unknown probe kind {kind!r}")
