"""Neighbour candidates, local enumeration, flips and closure."""

import random

import pytest

from ptri.enumeration import (
    apply_flip,
    canonical_pair,
    find_flips,
    flip_closure,
    hardcoded_candidates,
    local_enumerate,
    search_candidates,
    standard_simplex,
    neighbor_family_harness,
)
from ptri.predicates import delaunay_test, freudenthal_seed
from ptri.symmetry import isomorphic
from ptri.tricore import is_centrally_symmetric, validate


def test_dim3_search_matches_hardcoded():
    s = standard_simplex(3)
    for i in range(4):
        found = sorted(c.apex for c in search_candidates(s, i, 3))
        assert found == sorted(c.apex for c in hardcoded_candidates(s, i))


def test_dim3_enumeration():
    res = local_enumerate(3)
    assert len(res.triangulations) == 1
    t = res.triangulations[0]
    assert len(t) == 6 and set(t.volumes) == {1}
    assert delaunay_test(t).is_delaunay
    assert isomorphic(t, freudenthal_seed(3)) is not None
    assert res.dead_ends == 0
    assert res.raw_candidates >= res.surviving_candidates


def test_dim4_enumeration_details(dim4_enumeration):
    ts = dim4_enumeration.triangulations
    assert [len(t) for t in ts] == [24] * 4
    for t in ts:
        assert validate(t)
    odd = [t for t in ts if not delaunay_test(t).is_delaunay]
    assert len(odd) == 1 and not is_centrally_symmetric(odd[0])


def test_canonical_pair():
    assert canonical_pair((1, -1, 0, 1), 1) == ((-1, 0, 1, 1), 0)
    assert canonical_pair((1, -1, 0, 1), 3) == ((-1, 0, 1, 1), 2)


def _inverse_flip(u, f):
    for g in find_flips(u):
        if g.removed == f.inserted and g.inserted == f.removed:
            return g
    return None


def test_flip_involution_on_100_random_flips():
    rng = random.Random(11)
    plan = {2: 20, 3: 25, 4: 30, 5: 25}
    done = 0
    for n, count in plan.items():
        t = freudenthal_seed(n)
        for _ in range(count):
            flips = find_flips(t)
            assert flips, f"dimension {n}: no flips"
            f = rng.choice(flips)
            u = apply_flip(t, f)
            assert validate(u, pairs=(n <= 3))
            g = _inverse_flip(u, f)
            assert g is not None
            assert apply_flip(u, g).classes == t.classes
            done += 1
            t = u  # random walk
    assert done == 100


def test_flip_counts_on_seeds():
    assert [len(find_flips(freudenthal_seed(n))) for n in (2, 3, 4)] == [3, 6, 10]


@pytest.mark.parametrize("n,size", [(2, 1), (3, 1), (4, 4)])
def test_small_closures(n, size):
    st = flip_closure(freudenthal_seed(n))
    assert st.complete and len(st.archive) == size


def test_dim4_closure_equals_enumeration(dim4_enumeration):
    st = flip_closure(freudenthal_seed(4))
    for t in st.archive:
        assert sum(isomorphic(t, u) is not None for u in dim4_enumeration.triangulations) == 1


def test_neighbor_family_negative_control():
    rows = neighbor_family_harness(3, apex=lambda k: (1, 1, 1, 2, k + 1), halt=False)
    assert not all(r.compatible and r.shared_facet for r in rows)
    with pytest.raises(AssertionError):
        neighbor_family_harness(3, apex=lambda k: (1, 1, 1, 2, k + 1))


def test_dim2_flips_form_one_orbit():
    from ptri.enumeration import _flip_orbit_representatives

    t = freudenthal_seed(2)
    flips = find_flips(t)
    assert len(flips) == 3
    assert len(_flip_orbit_representatives(t, flips)) == 1
