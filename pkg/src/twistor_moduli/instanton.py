"""Framed instanton moduli dimensions and the S / Sbar Euler characteristic symmetry."""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .bundles import (FormalBundle, binom, end_bundle, euler_characteristic, is_integral,
                      twist)
from .ring import CohomologyClass, integrate, pairing
from .twistor import TwistorPresentation, build_presentation

ROUTES = ("standard", "paper")
DIVISORS = ("S", "Sbar")


class FormalDataError(ValueError):
    """The Chern data give a non-integral Euler characteristic."""

    def __init__(self, chi: Fraction):
        super().__init__(f"chi = {fraction_text(chi)} is not an integer; "
                         "the Chern data cannot come from an actual bundle")
        self.chi = chi


def fraction_text(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def json_number(x: Fraction) -> int | str:
    """Integers as JSON numbers, everything else as a lossless "p/q" string."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class InstantonData:
    """Rank r bundle with c1 = sum b_i e_i, c2 = k F, c3 = 0 (pulled back from M)."""

    r: int
    b: tuple[int, ...]
    k: int
    presentation: TwistorPresentation

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if len(self.b) != self.presentation.n:
            raise ValueError(f"b-vector has length {len(self.b)}, "
                             f"expected n={self.presentation.n}")
        if self.r < 1:
            raise ValueError(f"rank must be positive, got {self.r}")

    def params(self) -> dict:
        p = self.presentation
        return {"n": p.n, "a": list(p.a), "c2_mode": p.c2_mode,
                "r": self.r, "b": list(self.b), "k": self.k}


def pullback_bundle(d: InstantonData) -> FormalBundle:
    p = d.presentation
    zero = CohomologyClass.zero(p.ring)
    c1 = sum((bi * e for bi, e in zip(d.b, p.etas)), zero)
    return FormalBundle(d.r, c1, d.k * p.F, zero)


def end_twisted(d: InstantonData, divisor: str = "S") -> FormalBundle:
    """End(V)(-D) by the standard twist calculus."""
    return twist(end_bundle(pullback_bundle(d)), -d.presentation.divisor(divisor))


def chi_standard_route(d: InstantonData, divisor: str = "S") -> Fraction:
    return euler_characteristic(end_twisted(d, divisor), d.presentation)


def paper_chern_list(d: InstantonData, divisor: str = "S") -> FormalBundle:
    """Rank r Chern data that the expansion route assigns to End(V)(-D).

    c1 = r(w + s), c2 = c2(End V) + C(r,2)(w + s)^2,
    c3 = (r - 2) c2(End V)(w + s) + C(r,3)(w + s)^3, with s = sigma or sigma_bar.
    """
    p = d.presentation
    r = d.r
    D = p.omega + p.sigma_of(divisor)
    c2E = end_bundle(pullback_bundle(d)).c2
    D2 = D * D
    return FormalBundle(
        r,
        r * D,
        c2E + binom(r, 2) * D2,
        (r - 2) * (c2E * D) + binom(r, 3) * (D2 * D),
    )


@lru_cache(maxsize=1024)
def _display_classes(p: TwistorPresentation, divisor: str):
    w, s, eta = p.omega, p.sigma_of(divisor), p.eta
    return {
        "S": w + s,
        "sq": w * w + s * s + 2 * (w * s),  # (w + s)^2
        "cube": w * w * w + 3 * (w * w * s) + 3 * (w * s * s),  # (w + s)^3 less s^3 = 0
        "td2x12": 16 * (w * w) + 4 * (eta * eta) + 16 * (w * eta) + p.c2P,
        "td1x2": 2 * w + eta,
        "c1c2P": p.c1P * p.c2P,
    }


def chi_paper_route(d: InstantonData, divisor: str = "S", *, printed: bool = False) -> Fraction:
    """Term-by-term HRR expansion of chi(End(V)(-D)) on :func:`paper_chern_list` data.

    HRR with ch3 = (c1^3 - 3 c1 c2 + 3 c3)/6 puts (r-2)/2 and
    (r^3-3r^2+2r)/12 on the two c3 terms, which is the default.
    ``printed=True`` uses (r-2)/6 and (r^3-3r^2+2r)/36 instead.
    """
    p = d.presentation
    r = d.r
    c = _display_classes(p, divisor)
    D, sq, cube = c["S"], c["sq"], c["cube"]
    c2E = end_bundle(pullback_bundle(d)).c2
    c3_scale = Fraction(1, 6) if printed else Fraction(1, 2)

    # rational factors are pulled out of the pairings so the classes stay integral
    terms = [
        Fraction(r, 24) * integrate(c["c1c2P"]),
        Fraction(r, 12) * pairing(D, c["td2x12"]),
        Fraction(1, 2) * pairing(c["td1x2"], r * r * sq - 2 * c2E - (r * r - r) * sq),
        Fraction(r ** 3, 6) * integrate(cube),
        -Fraction(r, 2) * (pairing(D, c2E) + Fraction(r * r - r, 2) * pairing(D, sq)),
        (r - 2) * c3_scale * pairing(c2E, D),
        Fraction(r ** 3 - 3 * r * r + 2 * r, 6) * c3_scale * integrate(cube),
    ]
    return sum(terms, Fraction(0))


def chi_end_twisted(d: InstantonData, divisor: str = "S", route: str = "standard") -> Fraction:
    if route == "standard":
        return chi_standard_route(d, divisor)
    if route == "paper":
        return chi_paper_route(d, divisor)
    raise ValueError(f"route must be one of {ROUTES}, got {route!r}")


def lemma25_difference(d: InstantonData, route: str = "standard") -> Fraction:
    """chi(End(V)(-S)) - chi(End(V)(-Sbar)); zero for every input."""
    return chi_end_twisted(d, "S", route) - chi_end_twisted(d, "Sbar", route)


def difference_polynomial(r: int, n: int, A: int) -> Fraction:
    """The closing expression of the difference after inserting
    w(s^2 - sb^2) = n - 2A, w^2(s - sb) = 2A - n and w*eta(s - sb) = n - 2A."""
    if not 0 <= A <= n:
        raise ValueError(f"need 0 <= A <= n, got A={A}, n={n}")
    r = Fraction(r)
    cubic = r * r / 2 - r ** 3 / 6
    return ((n - 2 * A) * (Fraction(7, 6) * r + cubic)
            + (2 * A - n) * (Fraction(13, 6) * r + cubic)
            + (n - 2 * A) * r)


@dataclass(frozen=True)
class DimensionResult:
    dimension: int
    chi: Fraction
    integral: bool
    real_dimension: int
    advisory: str | None = None

    def as_dict(self) -> dict:
        out = {"dim": self.dimension, "chi": json_number(self.chi),
               "integral": self.integral, "real_dim": self.real_dimension}
        if self.advisory:
            out["advisory"] = self.advisory
        return out


NONPOSITIVE_ADVISORY = ("dimension <= 0: reading it as a smooth moduli dimension "
                        "requires the vanishing hypotheses on H^0, H^2, H^3")


def framed_dimension(V: FormalBundle, p: TwistorPresentation) -> DimensionResult:
    """-chi(End(V)(-S)) for an arbitrary formal bundle V."""
    chi = euler_characteristic(twist(end_bundle(V), -p.S), p)
    return _dimension_result(chi)


def moduli_dimension(d: InstantonData) -> DimensionResult:
    """Complex dimension -chi(End(V)(-S)) of the framed moduli at V."""
    return _dimension_result(chi_standard_route(d, "S"))


def _dimension_result(chi: Fraction) -> DimensionResult:
    if not is_integral(chi):
        raise FormalDataError(chi)
    dim = -int(chi)
    return DimensionResult(dim, chi, True, 2 * dim,
                           NONPOSITIVE_ADVISORY if dim <= 0 else None)


# -- verification reports -----------------------------------------------------

@dataclass
class VerificationReport:
    config: dict
    cases: list[dict] = field(default_factory=list)
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def record(self, case: dict, ok: bool) -> None:
        case["ok"] = ok
        self.cases.append(case)
        if not ok:
            self.counterexamples.append(case)

    def merge(self, other: "VerificationReport") -> None:
        self.cases.extend(other.cases)
        self.counterexamples.extend(other.counterexamples)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "config": self.config,
            "cases": self.cases,
            "pass": self.passed,
            "counterexamples": self.counterexamples,
        }


def identity_values(p: TwistorPresentation, c2_end: CohomologyClass | None = None) -> list[tuple[str, Fraction | CohomologyClass, Fraction | CohomologyClass]]:
    """(name, expected, actual) for every identity behind the S/Sbar symmetry."""
    w, s, sb, eta, F = p.omega, p.sigma, p.sigma_bar, p.eta, p.F
    if c2_end is None:
        c2_end = F
    n, A = p.n, p.A
    ds = s - sb
    dsq = s * s - sb * sb
    zero = Fraction(0)
    return [
        ("w(s^2-sb^2) = n-2A", Fraction(n - 2 * A), pairing(w, dsq)),
        ("w^2(s-sb) = 2A-n", Fraction(2 * A - n), pairing(w * w, ds)),
        ("w*eta(s-sb) = n-2A", Fraction(n - 2 * A), pairing(w * eta, ds)),
        ("(s-sb)eta^2 = 0", zero, pairing(ds, eta * eta)),
        ("(s^2-sb^2)eta = 0", zero, pairing(dsq, eta)),
        ("(s-sb)F = 0", zero, pairing(ds, F)),
        ("(s-sb)c2(End V) = 0", zero, pairing(ds, c2_end)),
        ("(s-sb)(w^2+w*eta) = 0", zero, pairing(ds, w * w + w * eta)),
        ("eta*s = s^2", s * s, eta * s),
        ("eta*sb = sb^2", sb * sb, eta * sb),
    ]


def _value_text(v) -> int | str:
    return json_number(v) if isinstance(v, Fraction) else str(v)


def verify_identities(p: TwistorPresentation, c2_end: CohomologyClass | None = None) -> VerificationReport:
    report = VerificationReport({"check": "identities", "space": p.serialize()})
    for name, expected, actual in identity_values(p, c2_end):
        report.record({"space": p.serialize(), "identity": name,
                       "expected": _value_text(expected), "actual": _value_text(actual)},
                      expected == actual)
    return report


def all_a_vectors(n: int) -> list[tuple[int, ...]]:
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=n)]


@lru_cache(maxsize=1024)
def _cached_presentation(n, a, mode, omega_sq_eta) -> TwistorPresentation:
    return build_presentation(n, a, mode, omega_sq_eta=omega_sq_eta)


def _sweep_point(args) -> list[tuple[dict, bool]]:
    n, a, mode, r, b, k, routes, omega_sq_eta = args
    p = _cached_presentation(n, a, mode, omega_sq_eta)
    d = InstantonData(r, b, k, p)
    chis = {route: (chi_end_twisted(d, "S", route), chi_end_twisted(d, "Sbar", route))
            for route in routes}
    chi_std = chis["standard"][0] if "standard" in chis else chi_standard_route(d, "S")
    if is_integral(chi_std):
        dim = -int(chi_std)
        dim_fields = {"dim": dim, "integral": True}
    else:
        dim = None
        dim_fields = {"dim": None, "integral": False, "chi_standard": json_number(chi_std)}
    out = []
    for route in routes:
        chi_S, chi_Sbar = chis[route]
        diff = chi_S - chi_Sbar
        case = {"params": d.params(), "route": route, "space": p.serialize(),
                "chi_S": json_number(chi_S), "chi_Sbar": json_number(chi_Sbar),
                "diff": json_number(diff), **dim_fields}
        ok = diff == 0
        if n == 0 and not any(b) and dim is not None and route == "standard":
            case["expected_dim"] = 2 * r * k
            ok = ok and dim == 2 * r * k
        out.append((case, ok))
    return out


def sweep(
    n_values: Iterable[int] = range(0, 6),
    r_values: Iterable[int] = range(1, 4),
    k_values: Iterable[int] = range(0, 7),
    *,
    b_values: Iterable[int] = (0,),
    b_samples: int | None = None,
    a_vectors: Sequence[Sequence[int]] | None = None,
    routes: Sequence[str] = ROUTES,
    modes: Sequence[str] = ("paper",),
    identities: bool = True,
    omega_sq_eta: int = 1,
    seed: int = 0,
    jobs: int = 1,
) -> VerificationReport:
    """Check the S / Sbar symmetry, the supporting identities and the n=0
    dimension formula over a parameter grid.

    b-vectors range over ``b_values^n``; with ``b_samples`` set, that many are
    drawn per (n, a) with a seeded RNG instead of taking the full product.
    Cases come out in grid order whatever ``jobs`` is.
    """
    n_values, r_values, k_values = list(n_values), list(r_values), list(k_values)
    b_values, routes, modes = list(b_values), list(routes), list(modes)
    for name, values in (("n", n_values), ("r", r_values), ("k", k_values),
                         ("b", b_values), ("route", routes), ("c2_mode", modes)):
        if not values:
            raise ValueError(f"empty range for {name}")
    for route in routes:
        if route not in ROUTES:
            raise ValueError(f"unknown route {route!r}")

    config = {"check": "sweep", "n": n_values, "r": r_values, "k": k_values,
              "b_values": b_values, "b_samples": b_samples, "routes": routes,
              "c2_modes": modes, "seed": seed}
    if omega_sq_eta != 1:
        config["omega_sq_eta"] = omega_sq_eta
    report = VerificationReport(config)
    rng = random.Random(seed)

    points = []
    for n in n_values:
        avecs = [tuple(a) for a in a_vectors if len(a) == n] if a_vectors else all_a_vectors(n)
        for a in avecs:
            if b_samples is None:
                bvecs = list(itertools.product(b_values, repeat=n))
            else:
                bvecs = [tuple(rng.choice(b_values) for _ in range(n)) for _ in range(b_samples)]
            if identities:
                for mode in modes:
                    p = _cached_presentation(n, a, mode, omega_sq_eta)
                    report.merge(verify_identities(p))
            for mode, r, b, k in itertools.product(modes, r_values, bvecs, k_values):
                points.append((n, a, mode, r, b, k, routes, omega_sq_eta))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_point, points, chunksize=64))
    else:
        results = [_sweep_point(pt) for pt in points]
    for cases in results:
        for case, ok in cases:
            report.record(case, ok)
    return report
