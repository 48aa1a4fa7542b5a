"""Gradient and even-jet matrices of theta constants and the determinant
forms built from them.

Row order for tau-derivatives is (0,0), (0,1), ..., (0,g-1), (1,1), ...,
(g-1,g-1); determinant signs depend on it.
"""

from dataclasses import dataclass

import numpy as np

from .characteristics import enumerate_chars
from .core import determinant
from .errors import BadArity, DimensionMismatch, NotEven, NotOdd
from .theta import DEFAULT_TOL, RADIUS_CAP, pair_indices, tau_derivative_from_jet, theta_jet


@dataclass(frozen=True)
class GradientMatrix:
    g: int
    chars: tuple
    M: np.ndarray  # g x len(chars), column = grad_z theta[char](tau, 0)


@dataclass(frozen=True)
class EvenJetMatrix:
    g: int
    chars: tuple
    M: np.ndarray  # (N+1) x len(chars): theta, then d theta / d tau_ij

    @property
    def N(self):
        return self.g * (self.g + 1) // 2


def _check_dims(chars, tau):
    for c in chars:
        if c.g != tau.g:
            raise DimensionMismatch(f"characteristic {c} has g={c.g}, tau has g={tau.g}")


def gradient_column(char, tau, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    return theta_jet(char, tau, None, 1, tol, radius_cap).gradient


def even_jet_column(char, tau, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    """``(theta, d theta/d tau_00, d theta/d tau_01, ...)`` at z = 0."""
    jet = theta_jet(char, tau, None, 2, tol, radius_cap)
    rows = [jet.value] + [tau_derivative_from_jet(jet, i, j) for i, j in pair_indices(tau.g)]
    return np.array(rows, dtype=complex)


def gradient_matrix(tau, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    chars = tuple(enumerate_chars(tau.g, "odd"))
    M = np.column_stack([gradient_column(c, tau, tol, radius_cap) for c in chars])
    M.setflags(write=False)
    return GradientMatrix(tau.g, chars, M)


def even_jet_matrix(tau, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    chars = tuple(enumerate_chars(tau.g, "even"))
    M = np.column_stack([even_jet_column(c, tau, tol, radius_cap) for c in chars])
    M.setflags(write=False)
    return EvenJetMatrix(tau.g, chars, M)


def D_form(chars, tau, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    """Determinant of the ``g x g`` matrix of gradients of ``g`` odd theta
    constants, columns in the given order."""
    chars = list(chars)
    if len(chars) != tau.g:
        raise BadArity(tau.g, len(chars))
    _check_dims(chars, tau)
    for c in chars:
        if not c.is_odd:
            raise NotOdd(f"characteristic {c} is even")
    M = np.column_stack([gradient_column(c, tau, tol, radius_cap) for c in chars])
    return determinant(M)


def D2_form(chars, tau, tol=DEFAULT_TOL, radius_cap=RADIUS_CAP):
    """Determinant of the ``(N+1) x (N+1)`` matrix with columns
    ``(theta, d theta/d tau_ij ...)`` for ``N + 1`` even characteristics,
    ``N = g(g+1)/2``.

    The first characteristic is the distinguished one, the remaining ``N``
    fill the other columns.
    """
    chars = list(chars)
    n = tau.g * (tau.g + 1) // 2 + 1
    if len(chars) != n:
        raise BadArity(n, len(chars))
    _check_dims(chars, tau)
    for c in chars:
        if not c.is_even:
            raise NotEven(f"characteristic {c} is odd")
    M = np.column_stack([even_jet_column(c, tau, tol, radius_cap) for c in chars])
    return determinant(M)
