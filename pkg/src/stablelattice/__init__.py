"""Stable matchings under path-independent choice functions, built on the rotation poset."""

from .algorithms import (
    BreakMarriageResult,
    break_marriage,
    deferred_acceptance,
    immediate_descendant,
    maximal_chain,
    rotation_lambdas,
    rotation_poset,
)
from .core import (
    Instance,
    MCChoice,
    ParseError,
    Property,
    ResponsiveChoice,
    TableChoice,
    choose,
    parse_instance,
    verify_property,
)
from .matching import Matching, closure, dominates, is_individually_rational, is_stable, join, meet, p_set
from .optimize import max_weight_closure, max_weight_stable_matching
from .oracle import enumerate_stable_bruteforce, max_weight_bruteforce, verify_lattice
from .polytope import extended_formulation, order_polytope_facets
from .represent import Rotation, RotationPoset, affine_map, enumerate_stable, is_upper_set, realize, stable_pairs

__all__ = [
    "BreakMarriageResult",
    "Instance",
    "MCChoice",
    "Matching",
    "ParseError",
    "Property",
    "ResponsiveChoice",
    "Rotation",
    "RotationPoset",
    "TableChoice",
    "affine_map",
    "break_marriage",
    "choose",
    "closure",
    "deferred_acceptance",
    "dominates",
    "enumerate_stable",
    "enumerate_stable_bruteforce",
    "extended_formulation",
    "immediate_descendant",
    "is_individually_rational",
    "is_stable",
    "is_upper_set",
    "join",
    "max_weight_bruteforce",
    "max_weight_closure",
    "max_weight_stable_matching",
    "maximal_chain",
    "meet",
    "order_polytope_facets",
    "p_set",
    "parse_instance",
    "realize",
    "rotation_lambdas",
    "rotation_poset",
    "stable_pairs",
    "verify_lattice",
    "verify_property",
]
