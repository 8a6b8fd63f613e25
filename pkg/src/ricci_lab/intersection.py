"""Intersection theory on blowups of P^2 and the twisted slope threshold.

A class ``d H + sum m_i E_i`` is stored as ``(d; m_1, ..., m_k)``; the
intersection form is ``diag(1, -1, ..., -1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polytope import as_rational


@dataclass(frozen=True)
class PicardClass:
    d: Fraction
    m: tuple

    def __post_init__(self):
        object.__setattr__(self, "d", as_rational(self.d))
        object.__setattr__(self, "m", tuple(as_rational(x) for x in self.m))

    @property
    def k(self) -> int:
        return len(self.m)

    def __add__(self, other: "PicardClass") -> "PicardClass":
        _same_k(self, other)
        return PicardClass(self.d + other.d, [a + b for a, b in zip(self.m, other.m)])

    def __sub__(self, other: "PicardClass") -> "PicardClass":
        return self + (-1) * other

    def __rmul__(self, c) -> "PicardClass":
        c = as_rational(c)
        return PicardClass(c * self.d, [c * a for a in self.m])

    def __str__(self):
        return f"({self.d}; {', '.join(str(a) for a in self.m)})"


def hyperplane(k: int) -> PicardClass:
    return PicardClass(1, [0] * k)


def exceptional(i: int, k: int) -> PicardClass:
    """``E_i`` for ``i`` in ``1..k``."""
    if not 1 <= i <= k:
        raise ValueError(f"no exceptional curve E_{i} on a blowup in {k} points")
    return PicardClass(0, [1 if j == i - 1 else 0 for j in range(k)])


def anticanonical(k: int) -> PicardClass:
    return PicardClass(3, [-1] * k)


def _same_k(A: PicardClass, B: PicardClass):
    if A.k != B.k:
        raise ValueError(f"classes live on different surfaces (k={A.k} vs k={B.k})")


def intersect(A: PicardClass, B: PicardClass) -> Fraction:
    _same_k(A, B)
    return A.d * B.d - sum(a * b for a, b in zip(A.m, B.m))


@dataclass(frozen=True)
class DelPezzoDescriptor:
    """P^2 blown up in ``k`` general points, with its Mori cone generators as data."""

    k: int
    mori_generators: tuple

    def __post_init__(self):
        if not 1 <= self.k <= 8:
            raise ValueError("k must lie in 1..8")
        if not self.mori_generators:
            raise ValueError("no Mori cone generators given")
        for g in self.mori_generators:
            _same_k(g, self.anticanonical)
            if intersect(self.anticanonical, g) <= 0:
                raise ValueError(f"-K . {g} <= 0: not a Fano surface")

    @property
    def anticanonical(self) -> PicardClass:
        return anticanonical(self.k)

    @classmethod
    def blowup(cls, k: int) -> "DelPezzoDescriptor":
        """Built-in generators for ``k = 1, 2``."""
        E = [exceptional(i, k) for i in range(1, k + 1)]
        H = hyperplane(k)
        if k == 1:
            gens = (E[0], H - E[0])
        elif k == 2:
            gens = (E[0], E[1], H - E[0] - E[1])
        else:
            raise ValueError("only k = 1, 2 ship with Mori generators; load others from a file")
        return cls(k, gens)

    @classmethod
    def from_json(cls, data: dict) -> "DelPezzoDescriptor":
        """``{"k": 1, "mori": [[0, [1]], [1, [-1]]]}`` lists ``E`` and ``H - E``."""
        k = int(data["k"])
        return cls(k, tuple(PicardClass(d, m) for d, m in data["mori"]))


def is_nef(L: PicardClass, M: DelPezzoDescriptor) -> bool:
    return all(intersect(L, g) >= 0 for g in M.mori_generators)


def seshadri(L: PicardClass, E: PicardClass, M: DelPezzoDescriptor) -> Fraction:
    """``sup {eps >= 0 : L - eps E nef}`` as a minimum over binding generators."""
    ratios = [intersect(L, g) / intersect(E, g) for g in M.mori_generators if intersect(E, g) > 0]
    if not ratios:
        raise ValueError("no Mori generator meets E positively: Seshadri constant unbounded")
    return min(ratios)


@dataclass(frozen=True)
class SlopeThreshold:
    # each side as (constant, coefficient of t)
    left: tuple
    right: tuple
    threshold: Fraction


def _affine_in_t(fn) -> tuple:
    a0, a1 = fn(Fraction(0)), fn(Fraction(1))
    return a0, a1 - a0


def stoppa_threshold_m1() -> SlopeThreshold:
    """Twisted slope inequality for ``E`` on P^2 blown up in one point.

    Left side ``(3/2)(2 c1.E - 2[(-c1 + (1-t) c1).E + E^2]) / (2(3 c1.E - 2E^2))``,
    right side ``-(-c1 + (1-t) c1).c1 / c1^2``; both are affine in ``t`` and
    the obstruction holds for ``t`` up to where they meet.
    """
    k = 1
    c1, E = anticanonical(k), exceptional(1, k)

    def twist(t):
        return (-1) * c1 + (1 - t) * c1

    def left(t):
        num = 2 * intersect(c1, E) - 2 * (intersect(twist(t), E) + intersect(E, E))
        return Fraction(3, 2) * num / (2 * (3 * intersect(c1, E) - 2 * intersect(E, E)))

    def right(t):
        return -intersect(twist(t), c1) / intersect(c1, c1)

    L, R = _affine_in_t(left), _affine_in_t(right)
    if L[1] == R[1]:
        raise ArithmeticError("sides are parallel in t")
    return SlopeThreshold(L, R, (R[0] - L[0]) / (L[1] - R[1]))


def gram_matrix(k: int) -> list:
    basis = [hyperplane(k)] + [exceptional(i, k) for i in range(1, k + 1)]
    return [[intersect(a, b) for b in basis] for a in basis]
