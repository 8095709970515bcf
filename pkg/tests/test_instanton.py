import itertools
import json
import random
from fractions import Fraction

import pytest
import sympy

from twistor_moduli.bundles import FormalBundle, euler_characteristic
from twistor_moduli.instanton import (FormalDataError, InstantonData, chi_paper_route,
                                      chi_standard_route, difference_polynomial,
                                      framed_dimension, lemma25_difference,
                                      moduli_dimension, paper_chern_list, pullback_bundle,
                                      sweep, verify_identities)
from twistor_moduli.ring import CohomologyClass, integrate
from twistor_moduli.twistor import build_presentation


def data(n, r, k, b=None, a=None, mode="paper"):
    p = build_presentation(n, a, mode)
    return InstantonData(r, b if b is not None else (0,) * n, k, p)


def test_pullback_examples():
    V = pullback_bundle(data(0, 2, 1))
    p = build_presentation(0)
    assert (V.rank, V.c1, V.c2, V.c3) == (2, 0, p.omega * p.omega, 0)
    d = data(2, 3, 0, b=(1, -2))
    V = pullback_bundle(d)
    e1, e2 = d.presentation.etas
    assert (V.rank, V.c1, V.c2, V.c3) == (3, e1 - 2 * e2, 0, 0)
    # rank 1 with c2 != 0 is accepted as formal data
    V = pullback_bundle(data(1, 1, 5, b=(0,)))
    assert V.c2 == 5 * build_presentation(1).F


def test_length_mismatch():
    with pytest.raises(ValueError):
        data(2, 2, 1, b=(1,))


H = sympy.Symbol("H")
TD_CP3 = sympy.series((H / (1 - sympy.exp(-H))) ** 4, H, 0, 4).removeO()
EXP_MINUS_H = sympy.series(sympy.exp(-H), H, 0, 4).removeO()


def framed_plane_oracle(r, k):
    """-chi(End V(-1)) on CP^3 for c1 = 0, c2 = k H^2, computed in sympy from
    ch(End V) = ch(V) ch(V^dual) and ch(O(-1)) = exp(-H)."""
    ch_V = r - k * H ** 2
    ch_dual = r - k * H ** 2
    total = sympy.expand(ch_V * ch_dual * EXP_MINUS_H * TD_CP3)
    return -int(total.coeff(H, 3))


def test_dimension_examples():
    for k in range(6):
        assert moduli_dimension(data(0, 2, k)).dimension == 4 * k
    res = moduli_dimension(data(0, 2, 0))
    assert res.dimension == 0 and res.advisory is not None


@pytest.mark.parametrize("r", range(1, 6))
def test_dimension_n0_2rk(r):
    for k in range(0, 11):
        res = moduli_dimension(data(0, r, k))
        assert res.dimension == 2 * r * k == framed_plane_oracle(r, k)
        assert res.real_dimension == 4 * r * k
        assert res.chi == -2 * r * k


def test_dimension_non_integral_raises():
    # paper mode c2(P) = 12F at n = 1 gives half-integral chi for odd rank
    with pytest.raises(FormalDataError) as exc:
        moduli_dimension(data(1, 1, 0, mode="paper"))
    assert exc.value.chi == Fraction(1, 2)
    assert "1/2" in str(exc.value)


def test_framed_dimension_matches():
    d = data(3, 2, 4, b=(1, 0, -1), mode="normalized")
    assert framed_dimension(pullback_bundle(d), d.presentation) == moduli_dimension(d)


def test_paper_route_example():
    d = data(0, 2, 1)
    assert -chi_paper_route(d, "S") == 4
    assert -euler_characteristic(paper_chern_list(d, "S"), d.presentation) == 4


def test_paper_route_n0_symmetric():
    for r, k in itertools.product(range(1, 4), range(-2, 4)):
        d = data(0, r, k)
        assert chi_paper_route(d, "S") == chi_paper_route(d, "Sbar")


def test_paper_chern_list_values():
    d = data(2, 3, 1, b=(1, 0), a=(1, 0))
    p = d.presentation
    c = paper_chern_list(d, "Sbar")
    D = p.omega + p.sigma_bar
    c2E = 2 * 3 * p.F + (1 - 3) * (p.etas[0] * p.etas[0])
    assert c.c1 == 3 * D
    assert c.c2 == c2E + 3 * (D * D)
    assert c.c3 == c2E * D + D * D * D


def test_transcription_equivalence():
    rng = random.Random(3)
    for n in range(0, 5):
        for a in itertools.product((0, 1), repeat=n):
            for mode in ("paper", "normalized"):
                for r in range(1, 5):
                    b = tuple(rng.choice((-1, 0, 1)) for _ in range(n))
                    d = data(n, r, rng.randint(-3, 6), b=b, a=a, mode=mode)
                    for D in ("S", "Sbar"):
                        assert chi_paper_route(d, D) == euler_characteristic(
                            paper_chern_list(d, D), d.presentation)


def test_printed_c3_coefficients_are_off_by_a_third_of_c3():
    # printed=True weights c3 by 1/6 instead of 3/6
    for n, r, k in itertools.product(range(0, 4), range(1, 5), range(0, 3)):
        d = data(n, r, k, a=(1,) * n)
        for D in ("S", "Sbar"):
            gap = chi_paper_route(d, D) - chi_paper_route(d, D, printed=True)
            assert gap == integrate(paper_chern_list(d, D).c3) / 3
    # the printed version still satisfies the symmetry
    d = data(3, 3, 2, b=(1, 0, -1), a=(1, 0, 0))
    assert chi_paper_route(d, "S", printed=True) == chi_paper_route(d, "Sbar", printed=True)


@pytest.mark.parametrize("route", ["standard", "paper"])
def test_lemma25_difference_zero(route):
    rng = random.Random(7)
    for n in range(0, 7):
        avecs = list(itertools.product((0, 1), repeat=n))
        for a in rng.sample(avecs, min(len(avecs), 6)):
            for r in range(1, 5):
                k = rng.randint(-3, 10)
                b = tuple(rng.randint(-2, 2) for _ in range(n))
                assert lemma25_difference(data(n, r, k, b=b, a=a), route) == 0


def test_difference_independent_of_k_and_mode():
    # the S and Sbar values themselves move with k and the c2 mode; their difference does not
    for r in (1, 2, 3):
        values = set()
        for k, mode in itertools.product((0, 3, 7), ("paper", "normalized")):
            d = data(3, r, k, b=(1, 1, 0), a=(1, 0, 0), mode=mode)
            values.add((chi_standard_route(d, "S"), mode, k))
            assert lemma25_difference(d) == 0
        assert len(values) == 6


def test_dimension_invariant_under_b_negation():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 5)
        b = tuple(rng.randint(-3, 3) for _ in range(n))
        d1 = data(n, rng.randint(1, 4), rng.randint(0, 6), b=b, mode="normalized")
        d2 = InstantonData(d1.r, tuple(-x for x in b), d1.k, d1.presentation)
        assert chi_standard_route(d1) == chi_standard_route(d2)


def test_difference_polynomial():
    assert difference_polynomial(1, 0, 0) == 0
    assert Fraction(7, 6) - Fraction(13, 6) + 1 == 0
    for r, n in itertools.product(range(1, 21), range(0, 21)):
        for A in range(n + 1):
            assert difference_polynomial(r, n, A) == 0
    with pytest.raises(ValueError):
        difference_polynomial(2, 3, 4)


def _identity(report, name):
    (case,) = [c for c in report.cases if c["identity"] == name]
    return case


def test_identity_examples():
    rep = verify_identities(build_presentation(4, (1, 1, 0, 0)))
    assert _identity(rep, "w(s^2-sb^2) = n-2A")["actual"] == 0
    rep = verify_identities(build_presentation(3, (1, 1, 1)))
    assert _identity(rep, "w^2(s-sb) = 2A-n")["actual"] == 3
    for n in range(9):
        for a in itertools.product((0, 1), repeat=n):
            rep = verify_identities(build_presentation(n, a))
            assert rep.passed, rep.counterexamples
            assert _identity(rep, "(s-sb)F = 0")["actual"] == 0


def test_identities_fail_on_corrupted_ring():
    rep = verify_identities(build_presentation(2, (1, 1), omega_sq_eta=2))
    assert not rep.passed


def test_default_sweep():
    rep = sweep(range(0, 6), range(1, 4), range(0, 7))
    assert rep.passed and not rep.counterexamples
    dims = [c for c in rep.cases if "expected_dim" in c]
    assert dims and all(c["dim"] == c["expected_dim"] for c in dims)
    json.dumps(rep.to_json())


def test_sweep_corrupted_relation_fails():
    rep = sweep(range(0, 3), range(1, 3), range(0, 3), omega_sq_eta=2)
    assert not rep.passed
    assert rep.counterexamples[0]["ok"] is False


def test_sweep_empty_range():
    with pytest.raises(ValueError):
        sweep([], range(1, 3), range(0, 3))
    with pytest.raises(ValueError):
        sweep(range(2), range(1, 3), range(0, 3), routes=[])


def test_sweep_deterministic_and_parallel():
    kwargs = dict(b_values=(-1, 0, 1), b_samples=2, modes=("paper", "normalized"))
    serial = sweep(range(0, 3), range(1, 3), range(-1, 2), **kwargs).to_json()
    again = sweep(range(0, 3), range(1, 3), range(-1, 2), **kwargs).to_json()
    parallel = sweep(range(0, 3), range(1, 3), range(-1, 2), jobs=2, **kwargs).to_json()
    assert serial == again == parallel
