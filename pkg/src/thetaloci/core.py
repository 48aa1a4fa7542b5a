"""Numeric foundation: Siegel points, integer symplectic matrices, rank and
determinant helpers, and the JSON encodings of matrices.

Complex matrices are plain ``numpy`` arrays of dtype ``complex128``; the
containers below freeze them (``writeable = False``) so that every public
object is immutable after construction.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    NotSquare,
    NotSymmetric,
    NotSymplectic,
    SingularFactor,
    ValidationError,
)

#: Largest tolerated asymmetry |tau_ij - tau_ji| (relative to max(1, |tau|)).
SYMMETRY_EPS = 1e-14
#: Smallest singular value of (c tau + d), relative to |c| |tau| + |d|, below
#: which the action is refused.
SINGULAR_RCOND = 1e-13
_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class Tolerance:
    """Thresholds used by membership predicates and rank decisions.

    abs_eps is compared against scale-normalized residuals, rank_rel_eps
    against singular values divided by the largest one.
    """

    abs_eps: float = 1e-10
    rank_rel_eps: float = 1e-8

    def __post_init__(self):
        if not (self.abs_eps >= 0 and self.rank_rel_eps >= 0):
            raise ValidationError("tolerances must be non-negative")

    def to_json(self):
        return {"abs_eps": self.abs_eps, "rank_rel_eps": self.rank_rel_eps}


DEFAULT_TOL = Tolerance()


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def as_complex_matrix(m):
    """Coerce ``m`` to a finite 2-d complex array (a copy)."""
    a = np.array(m, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise ValidationError(f"expected a matrix, got array of shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


@dataclass(frozen=True)
class SiegelPoint:
    """A period matrix in the Siegel upper half-space.

    Build through :func:`validate_siegel` (or :meth:`from_matrix`), which
    enforces exact symmetry and a positive-definite imaginary part.
    """

    tau: np.ndarray
    min_eig: float = field(compare=False)

    @property
    def g(self):
        return self.tau.shape[0]

    @property
    def imag(self):
        return self.tau.imag

    @classmethod
    def from_matrix(cls, tau):
        return validate_siegel(tau)

    @classmethod
    def diagonal(cls, entries):
        return validate_siegel(np.diag(np.asarray(entries, dtype=complex)))

    def __eq__(self, other):
        return isinstance(other, SiegelPoint) and np.array_equal(self.tau, other.tau)

    def __hash__(self):
        return hash(self.tau.tobytes())

    def __repr__(self):
        return f"SiegelPoint(g={self.g}, tau={self.tau.tolist()!r})"

    def to_json(self):
        return matrix_to_json(self.tau)


def validate_siegel(tau):
    """Return a :class:`SiegelPoint` for ``tau`` or raise.

    Raises
    ------
    NotSquare, NotSymmetric, NotPositiveDefinite
    """
    a = as_complex_matrix(tau)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"tau must be square, got shape {a.shape}")
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > SYMMETRY_EPS * max(1.0, float(np.max(np.abs(a)))):
        raise NotSymmetric(asym)
    a = 0.5 * (a + a.T)
    min_eig = float(np.linalg.eigvalsh(a.imag)[0])
    if not min_eig > 0:
        raise NotPositiveDefinite(min_eig)
    return SiegelPoint(_frozen(a, complex), min_eig)


@dataclass(frozen=True)
class SymplecticMatrix:
    """Integer symplectic matrix in ``g x g`` block form ``[[a, b], [c, d]]``."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.a).shape[0]
        for name in "abcd":
            blk = np.asarray(getattr(self, name))
            if blk.shape != (g, g):
                raise DimensionMismatch(f"block {name} has shape {blk.shape}, expected {(g, g)}")
            object.__setattr__(self, name, _frozen(_check_int(blk), np.int64))
        if not is_symplectic(self.full):
            raise NotSymplectic("matrix does not satisfy sigma^T J sigma = J")

    @property
    def g(self):
        return self.a.shape[0]

    @property
    def full(self):
        return np.block([[self.a, self.b], [self.c, self.d]])

    @classmethod
    def from_full(cls, m):
        m = np.asarray(m)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise DimensionMismatch(f"expected an even square matrix, got shape {m.shape}")
        g = m.shape[0] // 2
        return cls(m[:g, :g], m[:g, g:], m[g:, :g], m[g:, g:])

    @classmethod
    def identity(cls, g):
        eye, zero = np.eye(g, dtype=np.int64), np.zeros((g, g), dtype=np.int64)
        return cls(eye, zero, zero, eye)

    def __matmul__(self, other):
        return SymplecticMatrix.from_full(_int_matmul(self.full, other.full))

    def __eq__(self, other):
        return isinstance(other, SymplecticMatrix) and np.array_equal(self.full, other.full)

    def __hash__(self):
        return hash(self.full.tobytes())

    def to_json(self):
        return {k: getattr(self, k).tolist() for k in "abcd"}


def _check_int(blk):
    arr = np.asarray(blk)
    if arr.dtype.kind == "f":
        if not np.all(arr == np.round(arr)):
            raise ValidationError("symplectic matrix entries must be integers")
    elif arr.dtype.kind not in "iu" and arr.dtype != object:
        raise ValidationError("symplectic matrix entries must be integers")
    ints = [int(x) for x in arr.ravel()]
    if any(abs(x) > _INT64_MAX for x in ints):
        raise ValidationError("symplectic matrix entry exceeds 64-bit range")
    return np.array(ints, dtype=np.int64).reshape(arr.shape)


def _int_matmul(x, y):
    """Exact integer product; raises if the result leaves the int64 range."""
    xo = np.asarray(x).astype(object)
    yo = np.asarray(y).astype(object)
    out = xo.dot(yo)
    if any(abs(int(v)) > _INT64_MAX for v in out.ravel()):
        raise ValidationError("integer overflow in symplectic product")
    return out.astype(np.int64)


def standard_J(g):
    eye, zero = np.eye(g, dtype=np.int64), np.zeros((g, g), dtype=np.int64)
    return np.block([[zero, eye], [-eye, zero]])


def is_symplectic(sigma):
    """Exact check of ``sigma^T J sigma == J`` for an even square integer matrix."""
    s = np.asarray(sigma)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
        return False
    if s.dtype.kind == "f" and not np.all(s == np.round(s)):
        return False
    so = s.astype(object)
    J = standard_J(s.shape[0] // 2).astype(object)
    return bool(np.all(so.T.dot(J).dot(so) == J))


def symplectic_action(sigma, tau):
    """``(a tau + b)(c tau + d)^{-1}`` as a new :class:`SiegelPoint`."""
    if sigma.g != tau.g:
        raise DimensionMismatch(f"sigma has g={sigma.g}, tau has g={tau.g}")
    t = tau.tau
    num = sigma.a @ t + sigma.b
    den = sigma.c @ t + sigma.d
    scale = np.linalg.norm(sigma.c, 2) * np.linalg.norm(t, 2) + np.linalg.norm(sigma.d, 2)
    if np.linalg.svd(den, compute_uv=False)[-1] < SINGULAR_RCOND * scale:
        raise SingularFactor("c tau + d is numerically singular")
    out = np.linalg.solve(den.T, num.T).T
    return validate_siegel(0.5 * (out + out.T))


def symplectic_generators(g):
    """A generating set of Sp(g, Z): J, elementary translations and
    elementary unimodular changes of basis ``diag(A, A^{-T})``."""
    eye = np.eye(g, dtype=np.int64)
    zero = np.zeros((g, g), dtype=np.int64)
    gens = [SymplecticMatrix(zero, eye, -eye, zero)]
    for i in range(g):
        for j in range(i, g):
            B = zero.copy()
            B[i, j] = B[j, i] = 1
            gens.append(SymplecticMatrix(eye, B, zero, eye))
    for i, j in product(range(g), repeat=2):
        if i != j:
            A = eye.copy()
            A[i, j] = 1
            Ainv_T = eye.copy()
            Ainv_T[j, i] = -1
            gens.append(SymplecticMatrix(A, zero, zero, Ainv_T))
    return gens


def singular_values(m):
    a = as_complex_matrix(m)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def numerical_rank(m, tol=DEFAULT_TOL):
    """Number of singular values exceeding ``tol.rank_rel_eps * sigma_max``."""
    s = singular_values(m)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol.rank_rel_eps * s[0]))


def determinant(m):
    """Determinant via LU with partial pivoting."""
    a = as_complex_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"determinant needs a square matrix, got {a.shape}")
    return complex(np.linalg.det(a))


def random_siegel(rng, g, min_imag=0.5, spread=1.0):
    """Random point with ``Im tau - min_imag * I`` positive semidefinite.

    The real part is uniform in [-1/2, 1/2] entrywise (symmetric).
    """
    x = rng.uniform(-0.5, 0.5, size=(g, g))
    x = np.triu(x) + np.triu(x, 1).T
    a = rng.normal(scale=spread / np.sqrt(g), size=(g, g))
    y = min_imag * np.eye(g) + a @ a.T
    return validate_siegel(x + 1j * y)


def matrix_to_json(m):
    a = np.asarray(m, dtype=complex)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(obj):
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != im.shape:
        raise ValidationError(f"re/im shapes differ: {re.shape} vs {im.shape}")
    return as_complex_matrix(re + 1j * im)


def symplectic_from_json(obj):
    return SymplecticMatrix(*(np.asarray(obj[k]) for k in "abcd"))
