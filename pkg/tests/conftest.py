import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from twistor_moduli.ring import CohomologyClass, RingPresentation
from twistor_moduli.twistor import build_presentation


def random_class(ring, rng, lo=-9, hi=9, degrees=(0, 1, 2, 3)):
    terms = {}
    for d in degrees:
        for key in ring.basis(d):
            terms[key] = rng.randint(lo, hi)
    return CohomologyClass(ring, terms)


@st.composite
def classes(draw, ring, degrees=(0, 1, 2, 3)):
    terms = {}
    for d in degrees:
        for key in ring.basis(d):
            terms[key] = draw(st.integers(-9, 9))
    return CohomologyClass(ring, terms)


@st.composite
def ring_and_classes(draw, count=3, max_n=6):
    n = draw(st.integers(0, max_n))
    ring = RingPresentation(n)
    return (ring, *[draw(classes(ring)) for _ in range(count)])


@pytest.fixture
def rng():
    return random.Random(20261017)
