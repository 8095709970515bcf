"""Formal Chern calculus and Hirzebruch-Riemann-Roch on the twistor threefold."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .ring import CohomologyClass, PresentationMismatch, integrate, pairing
from .twistor import TwistorPresentation


def binom(a: int, b: int) -> int:
    """Binomial coefficient that is 0 whenever a < b (including a < 0)."""
    if b < 0 or a < b:
        return 0
    return comb(a, b)


@dataclass(frozen=True)
class FormalBundle:
    rank: int
    c1: CohomologyClass
    c2: CohomologyClass
    c3: CohomologyClass

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank must be positive, got {self.rank}")
        for i, c in ((1, self.c1), (2, self.c2), (3, self.c3)):
            if not c.is_homogeneous(i):
                raise ValueError(f"c{i} must be homogeneous of degree {2 * i}, got {c}")
        if not (self.c1.ring == self.c2.ring == self.c3.ring):
            raise PresentationMismatch("Chern classes come from different rings")

    @property
    def ring(self):
        return self.c1.ring

    @classmethod
    def trivial(cls, p: TwistorPresentation, rank: int = 1) -> "FormalBundle":
        z = CohomologyClass.zero(p.ring)
        return cls(rank, z, z, z)

    @classmethod
    def line(cls, L: CohomologyClass) -> "FormalBundle":
        z = CohomologyClass.zero(L.ring)
        return cls(1, L, z, z)

    def total_chern(self) -> CohomologyClass:
        return 1 + self.c1 + self.c2 + self.c3


@dataclass(frozen=True)
class ChernCharacterTodd:
    ch: tuple[CohomologyClass, CohomologyClass, CohomologyClass, CohomologyClass]
    td: tuple[CohomologyClass, CohomologyClass, CohomologyClass, CohomologyClass]


def dual(V: FormalBundle) -> FormalBundle:
    return FormalBundle(V.rank, -V.c1, V.c2, -V.c3)


def twist(V: FormalBundle, L: CohomologyClass) -> FormalBundle:
    """Chern classes of ``V (x) O(L)`` for a degree-2 class L."""
    if not L.is_homogeneous(1):
        raise ValueError(f"twisting class must be homogeneous of degree 2, got {L}")
    r = V.rank
    L2 = L * L
    c1 = V.c1 + r * L
    c2 = V.c2 + (r - 1) * (V.c1 * L) + binom(r, 2) * L2
    c3 = (V.c3 + (r - 2) * (V.c2 * L) + binom(r - 1, 2) * (V.c1 * L2)
          + binom(r, 3) * (L2 * L))
    return FormalBundle(r, c1, c2, c3)


def end_bundle(V: FormalBundle) -> FormalBundle:
    """End V = V (x) V^dual: rank r^2, c1 = c3 = 0, c2 = 2r c2 + (1 - r) c1^2."""
    r = V.rank
    z = CohomologyClass.zero(V.ring)
    return FormalBundle(r * r, z, 2 * r * V.c2 + (1 - r) * (V.c1 * V.c1), z)


def chern_character(V: FormalBundle) -> tuple[CohomologyClass, ...]:
    c1, c2, c3 = V.c1, V.c2, V.c3
    c1sq = c1 * c1
    return (
        CohomologyClass.scalar(V.ring, V.rank),
        c1,
        (c1sq - 2 * c2) / 2,
        (c1sq * c1 - 3 * (c1 * c2) + 3 * c3) / 6,
    )


@lru_cache(maxsize=256)
def todd(p: TwistorPresentation) -> tuple[CohomologyClass, ...]:
    c1, c2 = p.c1P, p.c2P
    return (
        CohomologyClass.scalar(p.ring, 1),
        c1 / 2,
        (c1 * c1 + c2) / 12,
        (c1 * c2) / 24,
    )


def chern_character_todd(V: FormalBundle, p: TwistorPresentation) -> ChernCharacterTodd:
    return ChernCharacterTodd(tuple(chern_character(V)), tuple(todd(p)))


def hrr(ch: tuple[CohomologyClass, ...], p: TwistorPresentation) -> Fraction:
    """Integral of ch * td over P for an arbitrary (possibly virtual) ch."""
    td = todd(p)
    if ch[0].ring != p.ring:
        raise PresentationMismatch("bundle and space use different rings")
    return sum((pairing(ch[i], td[3 - i]) for i in range(4)), Fraction(0))


def euler_characteristic(V: FormalBundle, p: TwistorPresentation) -> Fraction:
    """chi(P, V) by Hirzebruch-Riemann-Roch.

    Formal Chern data need not come from a real bundle, so the result may be
    a non-integral rational; callers check ``result.denominator == 1``.
    """
    if not (V.c1.is_integral and V.c2.is_integral and V.c3.is_integral):
        return hrr(chern_character(V), p)
    # 24*td has integer components, so everything below stays in int
    T1, T2, T3 = _scaled_todd(p)
    if V.ring != p.ring:
        raise PresentationMismatch("bundle and space use different rings")
    c1, c2, c3 = V.c1, V.c2, V.c3
    c1sq = c1 * c1
    total = (V.rank * integrate(T3) + 2 * pairing(c1, T2) + 6 * pairing(c1sq - 2 * c2, T1)
             + 4 * integrate(c1sq * c1 - 3 * (c1 * c2) + 3 * c3))
    return Fraction(total, 24)


@lru_cache(maxsize=256)
def _scaled_todd(p: TwistorPresentation) -> tuple[CohomologyClass, ...]:
    return p.c1P, p.c1P * p.c1P + p.c2P, p.c1P * p.c2P


def is_integral(x: Fraction) -> bool:
    return x.denominator == 1
