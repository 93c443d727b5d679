"""Canonical classes, compatibility and validation."""

import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from ptri.exact import barycentric, det
from ptri.polyhedra import HPolyhedron, dual_description
from ptri.predicates import freudenthal_seed
from ptri.tricore import (
    DegenerateSimplexError,
    PeriodicTriangulation,
    canonical_simplex,
    canonicalize,
    is_centrally_symmetric,
    pairwise_compatible,
    translate,
    validate,
    validate_structure,
    volume,
    volume_bounds_hold,
)


def simplices(n, lo=-2, hi=2):
    pt = st.tuples(*[st.integers(lo, hi)] * n)
    return st.lists(pt, min_size=n + 1, max_size=n + 1, unique=True).filter(
        lambda s: det([[1] + list(v) for v in s]) != 0
    )


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(simplices(n), st.tuples(*[st.integers(-9, 9)] * n))))
def test_canonicalization_is_translation_invariant(data):
    s, v = data
    c = canonicalize(s)
    assert canonicalize(translate(s, v)) == c
    assert canonicalize(list(reversed(s))) == c
    assert c[0] == (0,) * len(v)
    assert list(c) == sorted(c)


def test_canonical_simplex_rejects_degenerate():
    with pytest.raises(DegenerateSimplexError):
        canonical_simplex([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(DegenerateSimplexError):
        canonical_simplex([(0, 0), (1, 0)])


def proper_intersection_oracle(s1, s2):
    """Translations v in a wide box where s1 and s2 + v meet in more than a common face.

    Uses vertex enumeration of the intersection polytope: the intersection is
    a common face exactly when every one of its vertices has zero barycentric
    weight (in s1) on the vertices not shared with s2 + v.
    """
    n = len(s1[0])
    P1 = HPolyhedron.simplex(s1)
    span = [max(abs(a[k] - b[k]) for a in s1 for b in s2) + 1 for k in range(n)]
    bad = []
    for v in itertools.product(*(range(-r, r + 1) for r in span)):
        t2 = translate(s2, v)
        common = set(s1) & set(t2)
        P = P1.intersect(HPolyhedron.simplex(t2))
        verts = dual_description(P).vertices
        for x in verts:
            b = barycentric(s1, x)
            if any(bi != 0 for bi, w in zip(b, s1) if w not in common):
                bad.append(v)
                break
    return bad


@settings(max_examples=25)
@given(st.integers(2, 3).flatmap(lambda n: st.tuples(simplices(n, 0, 2), simplices(n, 0, 2))))
def test_compatibility_against_vertex_enumeration(pair):
    s1, s2 = (canonicalize(s) for s in pair)
    ok, v = pairwise_compatible(s1, s2, use_cache=False)
    bad = proper_intersection_oracle(s1, s2)
    assert ok == (not bad)
    if not ok:
        assert v in bad


def test_compatibility_examples():
    std = ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0))
    assert pairwise_compatible(std, std)[0]
    other = ((0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 1))
    ok, v = pairwise_compatible(std, other)
    assert not ok and v is not None


def test_cached_and_uncached_agree():
    n = 3
    cells = freudenthal_seed(n).classes
    std = ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0))
    for c in cells:
        assert pairwise_compatible(std, c)[0] == pairwise_compatible(std, c, use_cache=False)[0]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_freudenthal_seeds_are_valid(n):
    t = freudenthal_seed(n)
    assert len(t) == math.factorial(n)
    assert validate(t)
    assert is_centrally_symmetric(t)
    assert volume_bounds_hold(t)


def test_mirrored_class_is_rejected():
    t = freudenthal_seed(3)
    c = t.classes[0]
    mirrored = canonicalize(tuple((-v[0],) + v[1:] for v in c))
    assert mirrored not in t.class_set
    bad = PeriodicTriangulation(3, tuple(t.classes[1:]) + (mirrored,))
    rep = validate(bad)
    assert not rep and rep.reason


def test_volume_sum_is_checked():
    t = freudenthal_seed(3)
    short = PeriodicTriangulation(3, t.classes[1:])
    rep = validate_structure(short)
    assert not rep and "volume" in rep.reason


def test_square_with_both_diagonals_overlaps():
    a = ((0, 0), (0, 1), (1, 1))
    b = ((0, 0), (1, 0), (1, 1))
    c = ((0, 0), (0, 1), (1, 0))
    assert validate(PeriodicTriangulation(2, (a, b)))
    assert not pairwise_compatible(a, c)[0]
    # same volume sum, but the facet pairing fails
    assert not validate(PeriodicTriangulation(2, (a, c)))


def test_volume_bound_violation_detected():
    n = 3
    big = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 5))  # volume 5 > the centrally symmetric bound
    t = PeriodicTriangulation(n, (big, canonicalize(tuple(tuple(-x for x in v) for v in big))))
    assert volume(big) == 5
    assert is_centrally_symmetric(t)
    assert not volume_bounds_hold(t)
