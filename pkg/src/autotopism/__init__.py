"""Autotopisms of Latin squares: membership decisions, witness constructions and counts."""

from .perm import (
    CycleStructure,
    Isotopism,
    ParseError,
    Permutation,
    StructureTriple,
    canonical_permutation,
    cycle_structure,
    normalize_triple,
    parse_permutation,
)
from .latin import LatinSquare, NotLatinError, apply_isotopism, is_autotopism, validate

__version__ = "0.1.0"
