import numpy as np
import pytest

from oracles import jacobi_derivative_g1
from thetaloci.characteristics import Characteristic, enumerate_chars
from thetaloci.core import numerical_rank, random_siegel, validate_siegel
from thetaloci.errors import BadArity, DimensionMismatch, NotEven, NotOdd
from thetaloci.modforms import (
    D2_form,
    D_form,
    even_jet_column,
    even_jet_matrix,
    gradient_column,
    gradient_matrix,
)
from thetaloci.theta import theta, theta_tau_derivative


def test_matrix_shapes(rng):
    tau = random_siegel(rng, 2)
    G = gradient_matrix(tau)
    E = even_jet_matrix(tau)
    assert G.M.shape == (2, 6) and G.chars == tuple(enumerate_chars(2, "odd"))
    assert E.M.shape == (4, 10) and E.N == 3
    assert not G.M.flags.writeable


def test_even_column_layout(rng):
    tau = random_siegel(rng, 2)
    c = Characteristic((0, 1), (0, 0))
    col = even_jet_column(c, tau)
    assert col[0] == pytest.approx(theta(c, tau))
    assert col[2] == pytest.approx(theta_tau_derivative(c, tau, 0, 1))
    assert col[3] == pytest.approx(theta_tau_derivative(c, tau, 1, 1))


def test_D_form_genus_one_is_jacobi_derivative():
    tau = validate_siegel([[0.2 + 1.1j]])
    assert D_form([Characteristic.ones(1)], tau) == pytest.approx(
        jacobi_derivative_g1(0.2 + 1.1j), abs=1e-12)


def test_D_form_is_alternating(rng):
    tau = random_siegel(rng, 2)
    a, b = enumerate_chars(2, "odd")[:2]
    assert D_form([a, b], tau) == pytest.approx(-D_form([b, a], tau), abs=1e-13)
    assert abs(D_form([a, a], tau)) < 1e-13


def test_D_form_matches_column_determinant(rng):
    tau = random_siegel(rng, 3)
    chars = enumerate_chars(3, "odd")[:3]
    M = np.column_stack([gradient_column(c, tau) for c in chars])
    assert D_form(chars, tau) == pytest.approx(np.linalg.det(M))


def test_D2_form_arity_and_sign(rng):
    tau = random_siegel(rng, 1)
    e = enumerate_chars(1, "even")
    d = D2_form(e[:2], tau)
    assert d == pytest.approx(-D2_form([e[1], e[0]], tau))
    assert abs(d) > 1e-6
    with pytest.raises(BadArity) as info:
        D2_form(e, tau)
    assert info.value.details() == {"expected": 2, "got": 3}


def test_form_errors(rng):
    tau = random_siegel(rng, 2)
    odd, even = enumerate_chars(2, "odd"), enumerate_chars(2, "even")
    with pytest.raises(BadArity):
        D_form(odd[:1], tau)
    with pytest.raises(NotOdd):
        D_form([odd[0], even[0]], tau)
    with pytest.raises(NotEven):
        D2_form(even[:3] + odd[:1], tau)
    with pytest.raises(DimensionMismatch):
        D_form([Characteristic.ones(1), Characteristic.ones(1)], tau)


def test_ranks_at_random_points(rng):
    for g in (1, 2):
        tau = random_siegel(rng, g)
        assert numerical_rank(gradient_matrix(tau).M) == g
        assert numerical_rank(even_jet_matrix(tau).M) == g * (g + 1) // 2 + 1


def test_ranks_at_a_theta_null_product():
    tau = validate_siegel(np.diag([1j, 2j]))
    E = even_jet_matrix(tau)
    col = E.M[:, E.chars.index(Characteristic.ones(2))]
    # theta[11,11] vanishes; only its tau_01 derivative survives
    assert np.count_nonzero(np.abs(col) > 1e-12) == 1 and abs(col[2]) > 1e-3
    assert numerical_rank(gradient_matrix(tau).M) == 2
    assert numerical_rank(E.M) == 4
