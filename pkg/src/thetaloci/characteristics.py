"""Theta characteristics: parity, enumeration, the affine Sp(g, Z) action,
level subgroups and 2-torsion points.  Everything here is exact integer
arithmetic except :func:`two_torsion_point`.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DimensionMismatch, ValidationError

EVEN = "even"
ODD = "odd"


@dataclass(frozen=True, order=True)
class Characteristic:
    """A pair ``[eps, delta]`` of bit vectors, reduced mod 2 on construction.

    Instances order lexicographically by ``(eps, delta)``.
    """

    eps: tuple
    delta: tuple
    parity: str = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        eps = tuple(int(x) % 2 for x in self.eps)
        delta = tuple(int(x) % 2 for x in self.delta)
        if len(eps) != len(delta):
            raise DimensionMismatch(f"eps has length {len(eps)}, delta has length {len(delta)}")
        if not eps:
            raise ValidationError("characteristic must have g >= 1")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "delta", delta)
        dot = sum(e * d for e, d in zip(eps, delta))
        object.__setattr__(self, "parity", ODD if dot % 2 else EVEN)

    @property
    def g(self):
        return len(self.eps)

    @property
    def is_odd(self):
        return self.parity == ODD

    @property
    def is_even(self):
        return self.parity == EVEN

    @classmethod
    def zero(cls, g):
        return cls((0,) * g, (0,) * g)

    @classmethod
    def ones(cls, g):
        return cls((1,) * g, (1,) * g)

    def concat(self, other):
        """Characteristic of the direct sum (block-diagonal period matrix)."""
        return Characteristic(self.eps + other.eps, self.delta + other.delta)

    def split(self, sizes):
        out, start = [], 0
        for n in sizes:
            out.append(Characteristic(self.eps[start:start + n], self.delta[start:start + n]))
            start += n
        if start != self.g:
            raise DimensionMismatch(f"sizes {sizes} do not add up to g={self.g}")
        return out

    def __str__(self):
        e = "".join(map(str, self.eps))
        d = "".join(map(str, self.delta))
        return f"[{e},{d}]"

    def to_json(self):
        return {"eps": list(self.eps), "delta": list(self.delta)}

    @classmethod
    def from_json(cls, obj):
        for key in ("eps", "delta"):
            if any(x not in (0, 1) for x in obj[key]):
                raise ValidationError(f"{key} entries must be 0 or 1")
        return cls(tuple(obj["eps"]), tuple(obj["delta"]))


def parity(char):
    return char.parity


def enumerate_chars(g, which="all"):
    """All characteristics of genus ``g`` in lexicographic order.

    ``which`` is ``"even"``, ``"odd"`` or ``"all"``.  There are
    ``2**(g-1) * (2**g - 1)`` odd and ``2**(g-1) * (2**g + 1)`` even ones.
    """
    if g < 1:
        raise ValidationError("g must be >= 1")
    if which not in ("even", "odd", "all"):
        raise ValidationError(f"which must be even, odd or all, got {which!r}")
    bits = list(product((0, 1), repeat=g))
    chars = [Characteristic(e, d) for e in bits for d in bits]
    if which == "all":
        return chars
    return [c for c in chars if c.parity == which]


def act(sigma, char):
    """Affine action ``(eps; delta) -> (d, -c; -b, a)(eps; delta) + (diag(c d^T); diag(a b^T))``
    reduced mod 2."""
    if sigma.g != char.g:
        raise DimensionMismatch(f"sigma has g={sigma.g}, characteristic has g={char.g}")
    a, b, c, d = (np.asarray(m).astype(object) for m in (sigma.a, sigma.b, sigma.c, sigma.d))
    e = np.array(char.eps, dtype=object)
    de = np.array(char.delta, dtype=object)
    new_e = d.dot(e) - c.dot(de) + np.diag(c.dot(d.T))
    new_d = -b.dot(e) + a.dot(de) + np.diag(a.dot(b.T))
    return Characteristic(tuple(int(x) % 2 for x in new_e), tuple(int(x) % 2 for x in new_d))


def in_congruence_subgroup(sigma, n, igusa=False):
    """Membership in the level subgroup Gamma_g(n), or in Igusa's
    Gamma_g(n, 2n) when ``igusa`` is set."""
    if n < 1:
        raise ValidationError("modulus must be >= 1")
    full = np.asarray(sigma.full).astype(object)
    eye = np.eye(full.shape[0], dtype=np.int64).astype(object)
    if any(int(x) % n for x in (full - eye).ravel()):
        return False
    if igusa:
        a, b, c, d = (np.asarray(m).astype(object) for m in (sigma.a, sigma.b, sigma.c, sigma.d))
        diags = list(np.diag(a.dot(b.T))) + list(np.diag(c.dot(d.T)))
        if any(int(x) % (2 * n) for x in diags):
            return False
    return True


def two_torsion_point(tau, char):
    """The point ``(tau eps + delta) / 2``."""
    if tau.g != char.g:
        raise DimensionMismatch(f"tau has g={tau.g}, characteristic has g={char.g}")
    return (tau.tau @ np.array(char.eps, dtype=float) + np.array(char.delta, dtype=float)) / 2
