"""Riemann theta functions with characteristics and their z-derivative jets.

    theta[eps, delta](tau, z) = sum_{m in Z^g} exp(pi i [ v^T tau v + 2 v^T (z + delta/2) ]),
    v = m + eps/2.

The series is summed over a fixed box of lattice points whose size comes
from a proven bound on the omitted tail (:func:`truncation_radius`).
Derivatives in z are taken term by term: each term picks up a factor
``2 pi i v_k = pi i (2 m_k + eps_k)`` per differentiation.  Derivatives in
tau are read off the z-jet through the heat equation.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .characteristics import Characteristic
from .errors import DimensionMismatch, ToleranceUnreachable, ValidationError

DEFAULT_TOL = 1e-12
RADIUS_CAP = 200
MAX_ORDER = 6


@lru_cache(maxsize=None)
def multi_indices(g, h):
    """Non-decreasing index tuples of length ``h`` over ``range(g)``, in
    lexicographic order.  There are ``C(g + h - 1, h)`` of them."""
    return tuple(combinations_with_replacement(range(g), h))


@lru_cache(maxsize=None)
def _index_map(g, h):
    return {t: k for k, t in enumerate(multi_indices(g, h))}


def pair_indices(g):
    """The ``(i, j)`` with ``i <= j``, in the order (0,0), (0,1), ..., (g-1,g-1)."""
    return multi_indices(g, 2)


@dataclass(frozen=True)
class TruncationPlan:
    radius: int
    tail_bound: float
    center: tuple  # real lattice-space center -Im(tau)^{-1} Im(z)


@dataclass(frozen=True)
class ThetaJet:
    """Value and symmetric z-derivative tensors up to ``order``.

    ``tensors[h][k]`` holds the derivative along ``multi_indices(g, h)[k]``.
    """

    g: int
    order: int
    tensors: tuple

    @property
    def value(self):
        return complex(self.tensors[0][0])

    @property
    def gradient(self):
        return np.asarray(self.tensors[1])

    def entry(self, *idx):
        key = tuple(sorted(idx))
        return complex(self.tensors[len(key)][_index_map(self.g, len(key))[key]])

    def tensor(self, h):
        """Dense symmetric ``g x ... x g`` array of the order-``h`` derivatives."""
        out = np.empty((self.g,) * h, dtype=complex)
        if h == 0:
            out[()] = self.tensors[0][0]
            return out
        imap = _index_map(self.g, h)
        for idx in np.ndindex(*out.shape):
            out[idx] = self.tensors[h][imap[tuple(sorted(idx))]]
        return out

    def hessian(self):
        return self.tensor(2)

    def max_abs(self, h):
        return float(np.max(np.abs(self.tensors[h])))

    def sup_norm(self):
        return max(self.max_abs(h) for h in range(self.order + 1))


def _check_inputs(char, tau, z):
    g = tau.g
    if char is not None and char.g != g:
        raise DimensionMismatch(f"characteristic has g={char.g}, tau has g={g}")
    if z is None:
        return np.zeros(g, dtype=complex)
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (g,):
        raise DimensionMismatch(f"z has length {z.shape[0]}, expected {g}")
    if not np.all(np.isfinite(z)):
        raise ValidationError("z has non-finite entries")
    return z


def _log_tail(R, g, lam, log_e, cmax, order):
    """log of an upper bound for the sum of |term| * (2 pi |v|_inf)^order over
    lattice points whose box offset |u|_inf exceeds R.

    Shell s collects points with |u|_inf in (s, s+1]: at most
    2g (2s+3)^(g-1) of them, each bounded by
    exp(log_e - pi lam s^2) (2 pi (s + 1 + cmax))^order.
    The log of the shell bound is concave in s, so once consecutive shells
    shrink by a ratio r < 1 the remainder is at most a geometric series.
    """

    def log_shell(s):
        return (math.log(2 * g) + (g - 1) * math.log(2 * s + 3) + log_e
                - math.pi * lam * s * s + order * math.log(2 * math.pi * (s + 1 + cmax)))

    total = -math.inf
    s = R
    while True:
        cur, nxt = log_shell(s), log_shell(s + 1)
        total = _logaddexp(total, cur)
        log_r = nxt - cur
        if log_r < -math.log(2) and cur - total < -40:
            return _logaddexp(total, nxt - math.log1p(-math.exp(log_r)))
        s += 1


def _logaddexp(a, b):
    if a < b:
        a, b = b, a
    if b == -math.inf:
        return a
    return a + math.log1p(math.exp(b - a))


def truncation_radius(tau, z=None, order=0, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    """Smallest box radius ``R >= 1`` whose omitted tail is provably <= ``tol``.

    The bound uses the smallest eigenvalue of Im(tau), the shift of the
    Gaussian center caused by Im(z), and the polynomial factor from
    ``order`` derivatives.
    """
    if not tol > 0:
        raise ValidationError("tol must be positive")
    if not 0 <= order <= MAX_ORDER:
        raise ValidationError(f"order must be in [0, {MAX_ORDER}]")
    z = _check_inputs(None, tau, z)
    Y = tau.imag
    c = -np.linalg.solve(Y, z.imag)
    log_e = math.pi * float(c @ Y @ c)
    cmax = float(np.max(np.abs(c))) + 0.5
    lam = tau.min_eig
    log_tol = math.log(tol)
    # no radius below the point where the leading Gaussian factor alone exceeds tol
    R = max(1, int(math.sqrt(max(0.0, (log_e - log_tol) / (math.pi * lam)))) - 1)
    while True:
        lt = _log_tail(R, tau.g, lam, log_e, cmax, order)
        if lt <= log_tol:
            return TruncationPlan(R, math.exp(lt), tuple(float(x) for x in c))
        if R >= radius_cap:
            raise ToleranceUnreachable(radius_cap, math.exp(lt))
        R += 1


def _lattice(char, plan):
    """Shifted lattice points ``v = m + eps/2`` with |v - center|_inf <= R,
    in lexicographic order of ``m``."""
    half = np.array(char.eps, dtype=float) / 2
    axes = []
    for ck, ak in zip(plan.center, half):
        lo = math.ceil(ck - ak - plan.radius)
        hi = math.floor(ck - ak + plan.radius)
        axes.append(np.arange(lo, hi + 1))
    grid = np.meshgrid(*axes, indexing="ij")
    m = np.stack([x.ravel() for x in grid], axis=1)
    return m, m + half


def _terms(char, tau, z, v):
    shift = z + np.array(char.delta, dtype=float) / 2
    quad = np.einsum("ni,ij,nj->n", v, tau.tau, v)
    return np.exp(1j * np.pi * (quad + 2 * (v @ shift)))


def _weights(v, order):
    """Per-point derivative factors for every multi-index up to ``order``,
    stacked into an ``(npoints, ntuples)`` array."""
    g = v.shape[1]
    fac = 2j * np.pi * v
    cols = [np.ones(v.shape[0], dtype=complex)]
    prev = {(): cols[0]}
    for h in range(1, order + 1):
        cur = {}
        for t in multi_indices(g, h):
            cur[t] = prev[t[:-1]] * fac[:, t[-1]]
            cols.append(cur[t])
        prev = cur
    return np.stack(cols, axis=1)


def _split(flat, g, order):
    out, k = [], 0
    for h in range(order + 1):
        n = len(multi_indices(g, h))
        part = np.array(flat[k:k + n])
        part.setflags(write=False)
        out.append(part)
        k += n
    return tuple(out)


def _reduce(weighted, compensated):
    if not compensated:
        return weighted.sum(axis=0)
    return np.array([complex(math.fsum(col.real), math.fsum(col.imag)) for col in weighted.T])


def theta_jet(char, tau, z=None, order=0, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP,
              compensated=False):
    """Value and z-derivatives of ``theta[char](tau, .)`` at ``z`` up to ``order``.

    Every returned entry is within ``tol`` of the exact derivative.  The
    lattice is traversed in a fixed order, so identical inputs give
    bit-identical results.
    """
    z = _check_inputs(char, tau, z)
    plan = truncation_radius(tau, z, order, tol, radius_cap)
    _, v = _lattice(char, plan)
    weighted = _terms(char, tau, z, v)[:, None] * _weights(v, order)
    return ThetaJet(tau.g, order, _split(_reduce(weighted, compensated), tau.g, order))


def theta_jet_slices(char, tau, z=None, order=0, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    """Same series as :func:`theta_jet`, partial sums grouped by the last
    lattice coordinate ``m_g``.

    Returns a dict ``m_g -> ThetaJet`` of the contributions of each slice;
    used to isolate leading Fourier-Jacobi terms without cancellation.
    """
    z = _check_inputs(char, tau, z)
    plan = truncation_radius(tau, z, order, tol, radius_cap)
    m, v = _lattice(char, plan)
    weighted = _terms(char, tau, z, v)[:, None] * _weights(v, order)
    out = {}
    for n in np.unique(m[:, -1]):
        part = weighted[m[:, -1] == n].sum(axis=0)
        out[int(n)] = ThetaJet(tau.g, order, _split(part, tau.g, order))
    return out


def theta(char, tau, z=None, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    """``theta[char](tau, z)`` to absolute accuracy ``tol``."""
    return theta_jet(char, tau, z, 0, tol, radius_cap).value


def heat_factor(i, j):
    """``2 pi i (1 + delta_ij)``: d^2/dz_i dz_j = heat_factor * d/dtau_ij."""
    return 2j * np.pi * (2 if i == j else 1)


def tau_derivative_from_jet(jet, i, j):
    return jet.entry(i, j) / heat_factor(i, j)


def theta_tau_derivative(char, tau, i, j, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    """``d theta[char](tau, 0) / d tau_ij`` (0-based, tau_ij = tau_ji treated as
    one coordinate), from the heat equation."""
    g = tau.g
    if not (0 <= i < g and 0 <= j < g):
        raise ValidationError(f"indices ({i}, {j}) out of range for g={g}")
    jet = theta_jet(char, tau, None, 2, tol, radius_cap)
    return tau_derivative_from_jet(jet, i, j)


def halfperiod_factor(char, tau, z):
    """Factor e with theta[0,0](tau, z + tau eps/2 + delta/2) = e * theta[eps, delta](tau, z)."""
    eps = np.array(char.eps, dtype=float)
    delta = np.array(char.delta, dtype=float)
    z = _check_inputs(char, tau, z)
    return np.exp(1j * np.pi * (-(eps @ tau.tau @ eps) / 4 - eps @ (z + delta / 2)))


def translate_by_halfperiod(char, tau, z=None, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    """Both sides of the half-period translation identity.

    Returns ``(theta[0,0](tau, z + (tau eps + delta)/2), e * theta[eps,delta](tau, z))``.
    """
    z = _check_inputs(char, tau, z)
    eps = np.array(char.eps, dtype=float)
    delta = np.array(char.delta, dtype=float)
    shifted = z + (tau.tau @ eps + delta) / 2
    lhs = theta(Characteristic.zero(tau.g), tau, shifted, tol, radius_cap)
    rhs = halfperiod_factor(char, tau, z) * theta(char, tau, z, tol, radius_cap)
    return complex(lhs), complex(rhs)
