"""Ring presentation and geometric classes of the twistor space P over #n(-CP^2)."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

from .ring import CohomologyClass, RingPresentation

C2Mode = Literal["paper", "normalized"]
C2_MODES: tuple[str, ...] = ("paper", "normalized")


def euler_and_signature(n: int) -> tuple[int, int]:
    """Euler number and signature of the connected sum of n copies of -CP^2."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return 2 + n, -n


@dataclass(frozen=True)
class TwistorPresentation:
    n: int
    a: tuple[int, ...]
    c2_mode: str
    e: int
    sgn: int
    ring: RingPresentation = field(repr=False)
    omega: CohomologyClass = field(repr=False)
    etas: tuple[CohomologyClass, ...] = field(repr=False)
    eta: CohomologyClass = field(repr=False)
    F: CohomologyClass = field(repr=False)
    sigma: CohomologyClass = field(repr=False)
    sigma_bar: CohomologyClass = field(repr=False)
    S: CohomologyClass = field(repr=False)
    Sbar: CohomologyClass = field(repr=False)
    c1P: CohomologyClass = field(repr=False)
    c2P: CohomologyClass = field(repr=False)
    overridden: bool = False

    @property
    def A(self) -> int:
        return sum(self.a)

    def divisor(self, which: str) -> CohomologyClass:
        if which == "S":
            return self.S
        if which == "Sbar":
            return self.Sbar
        raise ValueError(f"divisor must be 'S' or 'Sbar', got {which!r}")

    def sigma_of(self, which: str) -> CohomologyClass:
        return self.sigma if which == "S" else self.sigma_bar

    def serialize(self) -> dict:
        doc = {
            "n": self.n,
            "a": list(self.a),
            "c2_mode": self.c2_mode,
            "derived": {"A": self.A, "e": self.e, "sgn": self.sgn},
        }
        if self.overridden or self.ring.corrupted:
            doc["overrides"] = {"e": self.e, "sgn": self.sgn,
                                "omega_sq_eta": self.ring.omega_sq_eta}
        return doc


def build_presentation(
    n: int,
    a: Sequence[int] | None = None,
    c2_mode: str = "paper",
    *,
    euler: int | None = None,
    signature: int | None = None,
    omega_sq_eta: int = 1,
) -> TwistorPresentation:
    """Build P for M = #n(-CP^2).

    ``a`` selects ``[S] = w + sum a_i e_i``; it defaults to all ones.
    ``euler``/``signature`` override the topological values used by the
    ``paper`` c2 mode and are meant for experiments only.
    """
    if a is None:
        a = (1,) * n
    a = tuple(int(x) for x in a)
    if len(a) != n:
        raise ValueError(f"a-vector has length {len(a)}, expected n={n}")
    if any(x not in (0, 1) for x in a):
        raise ValueError(f"a-vector entries must be 0 or 1, got {list(a)}")
    if c2_mode not in C2_MODES:
        raise ValueError(f"c2 mode must be one of {C2_MODES}, got {c2_mode!r}")

    e, sgn = euler_and_signature(n)
    overridden = euler is not None or signature is not None
    if euler is not None:
        e = euler
    if signature is not None:
        sgn = signature

    ring = RingPresentation(n, omega_sq_eta)
    w = CohomologyClass.omega(ring)
    etas = tuple(CohomologyClass.eta(ring, i) for i in range(1, n + 1))
    zero = CohomologyClass.zero(ring)
    eta = sum(etas, zero)
    sigma = sum((x for x, ai in zip(etas, a) if ai), zero)
    sigma_bar = sum((x for x, ai in zip(etas, a) if not ai), zero)
    F = w * w + w * eta
    c2_factor = 3 * (e - sgn) if c2_mode == "paper" else 6
    return TwistorPresentation(
        n=n, a=a, c2_mode=c2_mode, e=e, sgn=sgn, ring=ring,
        omega=w, etas=etas, eta=eta, F=F,
        sigma=sigma, sigma_bar=sigma_bar, S=w + sigma, Sbar=w + sigma_bar,
        c1P=4 * w + 2 * eta, c2P=c2_factor * F, overridden=overridden,
    )


def with_c2_mode(p: TwistorPresentation, c2_mode: str) -> TwistorPresentation:
    return build_presentation(p.n, p.a, c2_mode, euler=p.e if p.overridden else None,
                              signature=p.sgn if p.overridden else None,
                              omega_sq_eta=p.ring.omega_sq_eta)


def canonical_class_check(p: TwistorPresentation) -> bool:
    """Whether c1(P) = 2[S] + 2[Sbar], i.e. K_P = O(-2S - 2Sbar)."""
    return 2 * p.S + 2 * p.Sbar == p.c1P


def tampered(p: TwistorPresentation, **classes: CohomologyClass) -> TwistorPresentation:
    """Copy of ``p`` with some cached classes replaced (negative controls)."""
    return replace(p, **classes)
