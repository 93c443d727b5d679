"""Regulators, Delaunay test, regularity certificates and refinement."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptri.exact import QuadForm, det, is_positive_definite
from ptri.predicates import (
    cube_tiling,
    delaunay_test,
    freudenthal_seed,
    lifted_determinant,
    nonregularity_test,
    prism_extend,
    refine,
    verify_nonregularity,
    voronoi_regulator,
)
from ptri.symmetry import isomorphic
from ptri.tricore import validate


def random_instance(rng, n):
    while True:
        s1 = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(n + 1)]
        if det([[1] + list(v) for v in s1]) == 0:
            continue
        v2 = tuple(rng.randint(-3, 3) for _ in range(n))
        if v2 not in s1:
            return s1, v2


def random_form(rng, n):
    while True:
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        A = QuadForm(M)
        if is_positive_definite(A) or rng.random() < 0.3:
            return A


def circumsphere_sign_oracle(s1, v2, A):
    """Sign of A[v2 - c] - A[s - c] for the A-circumcentre c of s1, via a linear solve."""
    n = len(v2)
    M = A.matrix
    # 2 A (s_i - s_0) . c = A[s_i] - A[s_0]
    rows = []
    rhs = []
    for s in s1[1:]:
        d = [x - y for x, y in zip(s, s1[0])]
        rows.append([2 * sum(M[k][j] * d[k] for k in range(n)) for j in range(n)])
        rhs.append(A(s) - A(s1[0]))
    from ptri.exact import solve

    c = solve(rows, rhs)
    diff = lambda x: tuple(a - b for a, b in zip(x, c))
    val = A(diff(v2)) - A(diff(s1[0]))
    return (val > 0) - (val < 0)


def test_regulator_linearity_and_sphere_sign_on_50_instances():
    rng = random.Random(7)
    for k in range(50):
        n = 2 + k % 3
        s1, v2 = random_instance(rng, n)
        reg = voronoi_regulator(s1, v2)
        A, B = random_form(rng, n), random_form(rng, n)
        a, b = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(1, 3), 2)
        combo = QuadForm.from_coords(n, [a * x + b * y for x, y in zip(A.coords(), B.coords())])
        assert reg(combo) == a * reg(A) + b * reg(B)
        # equals sign(S1) times the lifted determinant
        assert reg(A) == lifted_determinant(s1, v2, A)
        if is_positive_definite(A):
            val = reg(A)
            assert (val > 0) - (val < 0) == circumsphere_sign_oracle(s1, v2, A)


def test_regulator_examples():
    reg = voronoi_regulator([(0, 0), (1, 0), (0, 1)], (1, 1))
    assert reg(QuadForm.identity(2)) == 0  # cocircular
    assert voronoi_regulator([(0,), (1,)], (2,)).coeffs == (2,)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_freudenthal_is_delaunay_with_checked_witness(n):
    res = delaunay_test(freudenthal_seed(n))
    assert res.is_delaunay
    assert is_positive_definite(res.form)
    assert res.slack == Fraction(1, n * n)
    assert all(r(res.form) > 0 for r in res.regulators)


def test_regularity_system_is_feasible_for_freudenthal():
    res = nonregularity_test(freudenthal_seed(3), 1)
    assert res.regular_possible_at_r
    sysm = res.system
    assert len(sysm.simplices) == 48
    h = res.heights
    for coef, rhs in sysm.constraints:
        assert sum(a * h[v] for v, a in coef.items()) >= rhs
    assert not verify_nonregularity(res)


def test_tampered_certificate_is_rejected():
    """A hand-made infeasible system: the checker must accept it, then reject a corrupted copy."""
    res = nonregularity_test(freudenthal_seed(2), 1)
    sysm = res.system
    # append the negation of the first constraint, shifted to clash with it
    coef, rhs = sysm.constraints[0]
    sysm.constraints.append(({v: -a for v, a in coef.items()}, 1))
    from ptri.predicates import NonRegularityResult
    from ptri.lp import LPCertificate

    m = len(sysm.constraints)
    yi = [0] * m
    yi[0] = yi[-1] = 1
    good = NonRegularityResult(False, 1, sysm, LPCertificate("infeasible", farkas=(tuple(yi), (0,) * len(sysm.gauge))))
    assert verify_nonregularity(good)
    yi[-1] = 2
    bad = NonRegularityResult(False, 1, sysm, LPCertificate("infeasible", farkas=(tuple(yi), (0,) * len(sysm.gauge))))
    assert not verify_nonregularity(bad)


def test_refine_square():
    res = refine(cube_tiling(2), QuadForm(((2, 1), (1, 2))))
    assert res.generic
    assert res.triangulation.classes == (((0, 0), (0, 1), (1, 0)), ((0, 0), (1, -1), (1, 0)))
    assert not refine(cube_tiling(2), QuadForm.identity(2)).generic


def test_refine_rejects_indefinite_form():
    with pytest.raises(ValueError):
        refine(cube_tiling(2), QuadForm(((1, 2), (2, 1))))


@settings(max_examples=15)
@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_generic_refinement_of_cube_is_the_unique_dim3_triangulation(off):
    A = QuadForm(((9, off[0], off[1]), (off[0], 11, off[2]), (off[1], off[2], 13)))
    res = refine(cube_tiling(3), A)
    if not res.generic:
        return
    assert validate(res.triangulation)
    assert isomorphic(res.triangulation, freudenthal_seed(3)) is not None


def test_prism_extension_slices_back():
    t = freudenthal_seed(2)
    A = QuadForm(((10, 3, 1), (3, 12, 2), (1, 2, 14)))
    res = prism_extend(t, 3, A)
    assert res.generic
    tt = res.triangulation
    assert validate(tt)
    # cells in the slab 0 <= x_3 <= 1 restrict on x_3 = 0 to the input triangulation
    bottom = set()
    for c in tt.classes:
        for shift in range(-2, 3):
            cell = [v[:2] + (v[2] + shift,) for v in c]
            face = [v[:2] for v in cell if v[2] == 0]
            if len(face) == 3 and all(0 <= v[2] <= 1 for v in cell):
                from ptri.tricore import canonicalize

                bottom.add(canonicalize(face))
    assert bottom == set(t.classes)
