import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetaloci.characteristics import (
    Characteristic,
    act,
    enumerate_chars,
    in_congruence_subgroup,
    parity,
    two_torsion_point,
)
from thetaloci.core import SymplecticMatrix, symplectic_generators, validate_siegel
from thetaloci.errors import DimensionMismatch, ValidationError


def test_reduction_mod_two_and_parity():
    c = Characteristic((3, 2), (1, -1))
    assert c.eps == (1, 0) and c.delta == (1, 1)
    assert parity(c) == "odd"
    assert Characteristic.zero(3).is_even
    assert Characteristic.ones(2).is_even
    assert Characteristic.ones(3).is_odd


def test_length_mismatch():
    with pytest.raises(DimensionMismatch):
        Characteristic((1, 0), (1,))


def test_json_roundtrip_and_bit_validation():
    c = Characteristic((1, 0, 1), (0, 1, 1))
    assert Characteristic.from_json(c.to_json()) == c
    with pytest.raises(ValidationError):
        Characteristic.from_json({"eps": [2], "delta": [0]})


def test_str():
    assert str(Characteristic((1, 1, 0), (1, 0, 0))) == "[110,100]"


def test_concat_and_split():
    a, b = Characteristic((1,), (0,)), Characteristic((0, 1), (1, 1))
    ab = a.concat(b)
    assert ab.split([1, 2]) == [a, b]
    with pytest.raises(DimensionMismatch):
        ab.split([1, 1])


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_enumeration_is_sorted_and_complete(g):
    chars = enumerate_chars(g)
    assert chars == sorted(chars)
    assert len(set(chars)) == 4 ** g
    assert sorted(enumerate_chars(g, "odd") + enumerate_chars(g, "even")) == chars


def test_enumerate_bad_arguments():
    with pytest.raises(ValidationError):
        enumerate_chars(0)
    with pytest.raises(ValidationError):
        enumerate_chars(2, "both")


def _word(g, word):
    gens = symplectic_generators(g)
    s = SymplecticMatrix.identity(g)
    for w in word:
        s = s @ gens[w % len(gens)]
    return s


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.lists(st.integers(0, 1000), max_size=5))
def test_action_preserves_parity_and_permutes(g, word):
    s = _word(g, word)
    chars = enumerate_chars(g)
    images = [act(s, c) for c in chars]
    assert sorted(images) == chars
    assert all(c.parity == i.parity for c, i in zip(chars, images))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.lists(st.integers(0, 1000), max_size=4),
       st.lists(st.integers(0, 1000), max_size=4))
def test_action_composes(g, w1, w2):
    s1, s2 = _word(g, w1), _word(g, w2)
    for c in enumerate_chars(g):
        assert act(s1 @ s2, c) == act(s1, act(s2, c))


def test_identity_fixes_everything():
    for c in enumerate_chars(2):
        assert act(SymplecticMatrix.identity(2), c) == c


def test_J_swaps_eps_and_delta_in_genus_one():
    J = symplectic_generators(1)[0]
    assert act(J, Characteristic((1,), (0,))) == Characteristic((0,), (1,))
    assert act(J, Characteristic((1,), (1,))) == Characteristic((1,), (1,))


def test_congruence_subgroups():
    eye, zero = np.eye(2, dtype=int), np.zeros((2, 2), dtype=int)
    b2 = np.array([[2, 0], [0, 0]])
    b4 = np.array([[4, 2], [2, 0]])
    t2 = SymplecticMatrix(eye, b2, zero, eye)
    t4 = SymplecticMatrix(eye, b4, zero, eye)
    assert in_congruence_subgroup(t2, 2)
    assert not in_congruence_subgroup(t2, 2, igusa=True)
    assert in_congruence_subgroup(t4, 2, igusa=True)
    assert not in_congruence_subgroup(SymplecticMatrix(eye, eye, zero, eye), 2)
    with pytest.raises(ValidationError):
        in_congruence_subgroup(t2, 0)


def test_level_two_four_fixes_all_characteristics():
    eye, zero = np.eye(2, dtype=int), np.zeros((2, 2), dtype=int)
    s = SymplecticMatrix(eye, np.array([[4, 2], [2, 0]]), zero, eye)
    s = s @ SymplecticMatrix(eye, zero, np.array([[0, 2], [2, 4]]), eye)
    assert in_congruence_subgroup(s, 2, igusa=True)
    for c in enumerate_chars(2):
        assert act(s, c) == c


def test_two_torsion_point():
    tau = validate_siegel([[1j, 0.5], [0.5, 2j]])
    z = two_torsion_point(tau, Characteristic((1, 0), (0, 1)))
    np.testing.assert_allclose(z, [0.5j, 0.25 + 0.5])
