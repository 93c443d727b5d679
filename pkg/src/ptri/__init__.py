"""Exact tools for Z^n-periodic lattice triangulations."""

from .enumeration import find_flips, flip_closure, local_enumerate
from .io import parse, serialize
from .predicates import delaunay_test, freudenthal_seed, nonregularity_test, refine
from .symmetry import isomorphic, stabilizer
from .tricore import PeriodicTriangulation, canonical_simplex, pairwise_compatible, validate

__all__ = [
    "PeriodicTriangulation",
    "canonical_simplex",
    "delaunay_test",
    "find_flips",
    "flip_closure",
    "freudenthal_seed",
    "isomorphic",
    "local_enumerate",
    "nonregularity_test",
    "pairwise_compatible",
    "parse",
    "refine",
    "serialize",
    "stabilizer",
    "validate",
]
