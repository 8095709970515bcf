"""Exact intersection theory and framed instanton dimensions on twistor spaces
over connected sums of reversed-orientation projective planes."""

from .bundles import FormalBundle, dual, end_bundle, euler_characteristic, twist
from .instanton import (InstantonData, lemma25_difference, moduli_dimension, sweep,
                        verify_identities)
from .ring import CohomologyClass, RingPresentation, integrate, normalize, parse_class, render
from .twistor import build_presentation, canonical_class_check

__all__ = [
    "CohomologyClass", "FormalBundle", "InstantonData", "RingPresentation",
    "build_presentation", "canonical_class_check", "dual", "end_bundle",
    "euler_characteristic", "integrate", "lemma25_difference", "moduli_dimension",
    "normalize", "parse_class", "render", "sweep", "twist", "verify_identities",
]
