"""Polyhedral primitives: facets, hulls, lattice points, interior forms."""

import itertools

from hypothesis import given, strategies as st

from ptri.exact import det, is_positive_definite
from ptri.polyhedra import (
    HPolyhedron,
    cone_interior_point,
    convex_hull_facets,
    dual_description,
    integer_points,
    simplex_facets,
)

point3 = st.tuples(*[st.integers(-3, 3)] * 3)


@given(st.lists(point3, min_size=4, max_size=4, unique=True))
def test_simplex_facets_vanish_on_opposite_facet(verts):
    if det([[1] + list(v) for v in verts]) == 0:
        return
    for i, (lin, c) in enumerate(simplex_facets(verts)):
        vals = [sum(a * x for a, x in zip(lin, v)) + c for v in verts]
        assert vals[i] > 0
        assert all(vals[j] == 0 for j in range(4) if j != i)


def test_cube_hull_has_six_facets():
    cube = list(itertools.product((0, 1), repeat=3))
    facets = convex_hull_facets(cube)
    assert len(facets) == 6
    assert all(len(inc) == 4 for _l, _c, inc in facets)


def test_octahedron_vertices_from_inequalities():
    ineqs = [(s, 1) for s in itertools.product((1, -1), repeat=3)]
    v = dual_description(HPolyhedron(3, tuple(ineqs)))
    pts = sorted(tuple(int(x) for x in p) for p in v.vertices)
    assert pts == sorted(p for p in itertools.product((-1, 0, 1), repeat=3) if sum(map(abs, p)) == 1)


@given(st.lists(point3, min_size=4, max_size=4, unique=True))
def test_integer_points_of_simplex_by_brute_force(verts):
    if det([[1] + list(v) for v in verts]) == 0:
        return
    P = HPolyhedron.simplex(verts)
    box = itertools.product(*(range(-3, 4),) * 3)
    assert integer_points(P) == [x for x in box if P.contains(x)]


def test_interior_form_of_the_full_cone_is_positive_definite():
    res = cone_interior_point([], 3)
    assert res.slack > 0
    assert is_positive_definite(res.form)


def test_interior_point_satisfies_every_inequality():
    # a11 - a12 >= 0, a22 - a12 >= 0 in coordinates (a11, a12, a22)
    ineqs = [(1, -1, 0), (0, -1, 1), (0, 1, 0)]
    res = cone_interior_point(ineqs, 2)
    c = res.form.coords()
    assert all(sum(a * x for a, x in zip(g, c)) >= res.slack for g in ineqs)
