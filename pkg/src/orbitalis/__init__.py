"""Exact orbitals, towers and left orders for groups acting on the line."""

from .models import bs12, bs12_fixed_point_law, bump, load_model, translations
from .plmap import NEG_INF, POS_INF, FixedSet, NoOrbitalsError, PLMap, SignedInterval, format_point
from .realization import IntegerOracle, WreathOracle, build_realization, estimate_F, verify_strict_tower
from .towers import (
    SignedOrbital,
    build_pool,
    find_crossed_pair,
    free_semigroup_certificate,
    is_tower,
    maximal_inner_orbitals,
    quasi_orbital_witnesses,
    shares_end,
    signature_less,
    tower_search,
)
from .words import Assignment, Word, commutator_probe, enumerate_words, evaluate_word, parse_word
from .wreath import Dyadic, Vec, WreathElement, WreathGroup, vec_compare

__all__ = [
    "NEG_INF",
    "POS_INF",
    "Assignment",
    "Dyadic",
    "FixedSet",
    "IntegerOracle",
    "NoOrbitalsError",
    "PLMap",
    "SignedInterval",
    "SignedOrbital",
    "Vec",
    "Word",
    "WreathElement",
    "WreathGroup",
    "WreathOracle",
    "bs12",
    "bs12_fixed_point_law",
    "build_pool",
    "build_realization",
    "bump",
    "commutator_probe",
    "enumerate_words",
    "estimate_F",
    "evaluate_word",
    "find_crossed_pair",
    "format_point",
    "free_semigroup_certificate",
    "is_tower",
    "load_model",
    "maximal_inner_orbitals",
    "parse_word",
    "quasi_orbital_witnesses",
    "shares_end",
    "signature_less",
    "tower_search",
    "translations",
    "vec_compare",
    "verify_strict_tower",
]
