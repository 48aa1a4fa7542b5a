"""Explicit sample points: products of elliptic curves, points on theta
divisors, theta-null bases times elliptic factors, and bordered
(Fourier-Jacobi) period matrices.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .characteristics import Characteristic, two_torsion_point
from .core import DEFAULT_TOL, validate_siegel
from .errors import BaseNotThetaNull, DimensionMismatch, NoRootFound, NumericalError, ValidationError
from .theta import DEFAULT_TOL as ENGINE_TOL
from .theta import RADIUS_CAP, pair_indices, tau_derivative_from_jet, theta, theta_jet

ELLIPTIC_RESIDUAL = 1e-10
TWO_TORSION_DIST = 1e-8


@dataclass(frozen=True)
class SamplePoint:
    tau: object
    z: np.ndarray = None
    char: Characteristic = None
    expected_mult: int = None
    provenance: str = ""
    notes: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        out = {"tau": self.tau.to_json(), "provenance": self.provenance}
        if self.z is not None:
            out["z"] = [[float(x.real), float(x.imag)] for x in self.z]
        if self.char is not None:
            out["char"] = self.char.to_json()
        if self.expected_mult is not None:
            out["expected_mult"] = self.expected_mult
        if self.notes:
            out["notes"] = self.notes
        return out


@dataclass(frozen=True)
class DivisorPoint:
    z: np.ndarray
    t: complex
    residual: float
    two_torsion: bool
    nearest_char: Characteristic
    torsion_distance: float


def block_diagonal(parts):
    """Direct sum of period matrices."""
    parts = list(parts)
    if not parts:
        raise ValidationError("block_diagonal needs at least one part")
    return validate_siegel(block_diag(*[p.tau for p in parts]))


def elliptic_theta_zero(lam):
    """The zero ``(1 + lam)/2`` of theta(lam, .) in the fundamental cell."""
    lam = complex(lam)
    if not lam.imag > 0:
        raise ValidationError("need Im(lam) > 0")
    z = (1 + lam) / 2
    tau = validate_siegel([[lam]])
    r = abs(theta(Characteristic.zero(1), tau, [z]))
    if r >= ELLIPTIC_RESIDUAL:
        raise NumericalError(f"elliptic theta residual {r:.3e} at (1 + lam)/2")
    return z


def nearest_two_torsion(tau, z):
    """Closest point of the form ``(tau e + d)/2`` (e, d integer vectors) and
    its distance to ``z``; the characteristic is ``(e, d) mod 2``."""
    z = np.asarray(z, dtype=complex)
    a = np.linalg.solve(tau.imag, z.imag)
    b = z.real - tau.tau.real @ a
    e = np.round(2 * a)
    d = np.round(2 * b)
    p = (tau.tau @ e + d) / 2
    char = Characteristic(tuple(int(x) for x in e), tuple(int(x) for x in d))
    return char, float(np.linalg.norm(z - p))


def _winding(f, corners, n=32, max_n=256):
    """Winding number of ``f`` around the polygon ``corners`` (argument
    principle), or None when a zero sits too close to the contour to resolve."""
    while True:
        pts = []
        for p, q in zip(corners, corners[1:] + corners[:1]):
            pts.extend(p + (q - p) * np.arange(n) / n)
        vals = np.array([f(t) for t in pts])
        ph = np.angle(np.append(vals, vals[0]))
        dph = np.diff(ph)
        dph = (dph + np.pi) % (2 * np.pi) - np.pi
        if np.max(np.abs(dph)) < np.pi / 4:
            return int(round(dph.sum() / (2 * np.pi)))
        if n >= max_n:
            return None
        n *= 2


def theta_divisor_point(tau, start=None, direction=None, tol=ENGINE_TOL, half_width=1.0,
                        max_iter=50, radius_cap=RADIUS_CAP):
    """Find ``z = start + t * direction`` with ``theta(tau, z) = 0``.

    The complex ``t`` is searched in the square ``|Re t|, |Im t| <= half_width``:
    a zero is bracketed by argument-principle bisection, seeded from a
    coarse 8 x 8 grid, and polished by Newton's method with the analytic
    derivative.  Raises :class:`NoRootFound` when the iteration budget runs
    out.
    """
    g = tau.g
    start = np.zeros(g, dtype=complex) if start is None else np.asarray(start, dtype=complex)
    direction = np.ones(g, dtype=complex) if direction is None else np.asarray(direction, dtype=complex)
    if start.shape != (g,) or direction.shape != (g,):
        raise DimensionMismatch(f"start and direction must have length {g}")
    if not np.linalg.norm(direction) > 0:
        raise ValidationError("direction must be nonzero")
    zero = Characteristic.zero(g)

    def f(t):
        return theta(zero, tau, start + t * direction, ENGINE_TOL, radius_cap)

    def jet(t):
        j = theta_jet(zero, tau, start + t * direction, 1, ENGINE_TOL, radius_cap)
        return j.value, complex(j.gradient @ direction)

    h = half_width
    grid = np.linspace(-h, h, 8)
    cand = [complex(x, y) for y in grid for x in grid]
    cand.sort(key=lambda t: abs(f(t)))

    # argument-principle bisection toward a cell containing a zero
    lo, hi = complex(-h, -h), complex(h, h)
    bracketed = None
    for _ in range(5):
        mid = (lo + hi) / 2
        found = False
        cells = [(lo, mid), (complex(mid.real, lo.imag), complex(hi.real, mid.imag)),
                 (complex(lo.real, mid.imag), complex(mid.real, hi.imag)), (mid, hi)]
        for a, b in cells:
            corners = [a, complex(b.real, a.imag), b, complex(a.real, b.imag)]
            w = _winding(f, corners)
            if w is None:
                break
            if w:
                lo, hi, found = a, b, True
                bracketed = (a + b) / 2
                break
        if not found:
            break
    if bracketed is not None:
        cand.insert(0, bracketed)

    budget = max_iter
    for t in cand:
        while budget > 0:
            budget -= 1
            val, der = jet(t)
            if abs(val) < tol:
                return _divisor_point(tau, start + t * direction, t, abs(val))
            if der == 0:
                break
            step = val / der
            if abs(step) > 2 * h:
                break
            t = t - step
        if budget <= 0:
            break
    raise NoRootFound(f"no zero of theta on the slice within {max_iter} Newton iterations")


def _divisor_point(tau, z, t, residual):
    char, dist = nearest_two_torsion(tau, z)
    return DivisorPoint(z, complex(t), float(residual), dist < TWO_TORSION_DIST, char, dist)


def theta_null_point(char, start, tol=ENGINE_TOL, max_iter=50, radius_cap=RADIUS_CAP):
    """Newton projection of ``start`` onto the divisor ``theta[char](tau, 0) = 0``.

    Uses the minimum-norm Newton step in the ``g(g+1)/2`` coordinates
    ``tau_ij`` (i <= j); tau-derivatives come from the heat equation.
    """
    if not char.is_even:
        raise ValidationError("theta constants of odd characteristics vanish identically")
    tau = start
    pairs = pair_indices(tau.g)
    for _ in range(max_iter):
        jet = theta_jet(char, tau, None, 2, tol, radius_cap)
        val = jet.value
        if abs(val) < tol:
            return tau
        grad = np.array([tau_derivative_from_jet(jet, i, j) for i, j in pairs])
        delta = -val * np.conj(grad) / np.vdot(grad, grad).real
        step = 1.0
        while True:
            m = tau.tau.copy()
            for (i, j), dv in zip(pairs, delta):
                m[i, j] += step * dv
                if i != j:
                    m[j, i] += step * dv
            try:
                tau = validate_siegel(m)
                break
            except ValidationError:
                step /= 2
                if step < 1e-6:
                    raise NoRootFound("theta-null projection left the Siegel space")
    raise NoRootFound(f"theta-null projection did not converge in {max_iter} steps")


def default_indecomposable(m):
    """A fixed indecomposable period matrix of size ``m``."""
    tau = np.diag([(1 + 0.2 * a) * 1j for a in range(m)])
    for a in range(m):
        for b in range(a + 1, m):
            tau[a, b] = tau[b, a] = 0.3 - 0.1 * (b - a) + 0.1j
    return validate_siegel(tau)


def default_thetanull_base(m):
    """A point of theta_null in genus ``m >= 2`` and its vanishing even characteristic.

    For ``m = 2`` this is diag(i, 2i) with [11, 11] (every point of the
    genus-2 theta-null locus is a product).  For ``m >= 3`` a matrix with
    coupled entries is projected onto the zero set of
    theta[(1,1,1,0..), (1,1,0,0..)]; all off-diagonal entries stay well away
    from zero, so the point is indecomposable.
    """
    if m < 2:
        raise ValidationError("the theta-null divisor is empty in genus 1")
    if m == 2:
        return validate_siegel(np.diag([1j, 2j])), Characteristic((1, 1), (1, 1))
    char = Characteristic((1, 1, 1) + (0,) * (m - 3), (1, 1) + (0,) * (m - 2))
    start = np.diag([(0.8 + 0.15 * a) * 1j for a in range(m)])
    for a in range(m):
        for b in range(a + 1, m):
            start[a, b] = start[b, a] = 0.3 - 0.05 * (a + b - 1) + 0.1j
    return theta_null_point(char, validate_siegel(start)), char


def thetanull_times_elliptics(g, k, lambdas=None, base=None, base_char=None, tol=DEFAULT_TOL):
    """``base x E_1 x ... x E_k`` with the characteristic ``(alpha, 1..1), (beta, 1..1)``.

    ``base`` must lie on the theta-null divisor for ``base_char``; its
    2-torsion point then has multiplicity ``k + 2``.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    if base is None:
        base, base_char = default_thetanull_base(g - k)
    if base_char is None:
        raise ValidationError("base_char is required with an explicit base")
    if base.g != g - k or base_char.g != g - k:
        raise DimensionMismatch(f"base must have dimension g - k = {g - k}")
    if not base_char.is_even:
        raise BaseNotThetaNull(f"base characteristic {base_char} is odd")
    jet = theta_jet(base_char, base, None, 2)
    resid = abs(jet.value) / max(1.0, jet.sup_norm())
    if resid >= tol.abs_eps:
        raise BaseNotThetaNull(f"theta[{base_char}](base, 0) residual {resid:.3e}")
    if lambdas is None:
        lambdas = [(g - k + 1 + i) * 1j for i in range(k)]
    if len(lambdas) != k:
        raise DimensionMismatch(f"need {k} elliptic parameters")
    tau = block_diagonal([base] + [validate_siegel([[lam]]) for lam in lambdas])
    char = base_char.concat(Characteristic.ones(k))
    return SamplePoint(tau, two_torsion_point(tau, char), char, k + 2,
                       f"thetanull_times_elliptics(g={g}, k={k})")


def decomposable_singular_sample(g, lambdas=None, middle=None, direction=None):
    """A point of multiplicity 3 on the theta divisor of a product.

    g = 3: diag(l1, l2, l3) at its all-odd 2-torsion point (elliptic zeros
    in every coordinate).  g >= 4: diag(l1, middle, l2) with a
    non-2-torsion theta-divisor point of ``middle`` in the middle block.
    """
    if g < 3:
        raise ValidationError("need g >= 3")
    if g == 3:
        lambdas = [1j, 2j, 3j] if lambdas is None else list(lambdas)
        if len(lambdas) != 3:
            raise DimensionMismatch("need 3 elliptic parameters")
        tau = validate_siegel(np.diag(lambdas))
        z = np.array([elliptic_theta_zero(lam) for lam in lambdas])
        return SamplePoint(tau, z, Characteristic.ones(3), 3, "decomposable_singular(g=3)")
    lambdas = [1j, g * 1j] if lambdas is None else list(lambdas)
    if len(lambdas) != 2:
        raise DimensionMismatch("need 2 elliptic parameters for g >= 4")
    middle = default_indecomposable(g - 2) if middle is None else middle
    if middle.g != g - 2:
        raise DimensionMismatch(f"middle block must have dimension {g - 2}")
    if direction is None:
        direction = np.array([1.0] + [0.37 * (a + 1) for a in range(g - 3)], dtype=complex)
    p = theta_divisor_point(middle, None, direction)
    tau = block_diagonal([validate_siegel([[lambdas[0]]]), middle, validate_siegel([[lambdas[1]]])])
    z = np.concatenate([[elliptic_theta_zero(lambdas[0])], p.z, [elliptic_theta_zero(lambdas[1])]])
    return SamplePoint(tau, z, None, 3, f"decomposable_singular(g={g})",
                       {"middle_point_two_torsion": p.two_torsion})


def fj_family(tau, z, t):
    """Bordered period matrix ``[[tau, z], [z^T, i t]]`` of dimension g + 1."""
    if not t > 0:
        raise ValidationError("t must be positive")
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (tau.g,):
        raise DimensionMismatch(f"z must have length {tau.g}")
    Z = np.block([[tau.tau, z[:, None]], [z[None, :], np.array([[1j * t]])]])
    return validate_siegel(Z)
