"""Geometric certificates: Delaunay test, non-regularity, refinement, seeds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    QuadForm,
    barycentric,
    det,
    form_coordinate_vector,
    is_positive_definite,
    primitive,
    rank,
)
from .lp import LPCertificate, lp_solve
from .polyhedra import ConeInteriorResult, cone_interior_point, convex_hull_facets
from .tricore import (
    PeriodicTriangulation,
    canonicalize,
    sub,
    translate,
    validate_structure,
)


# ---------------------------------------------------------------- regulators


@dataclass(frozen=True)
class Regulator:
    """Linear functional N_{S1,v2} on quadratic forms (upper-triangular coordinates).

    N(A) = |det D| * (A[v2] - sum_i beta_i A[s_i]) where beta are the
    barycentric coordinates of v2 in S1 and D has rows (1, s_i). This equals
    the lifted in-sphere determinant times the orientation sign of S1, so
    N(A) >= 0 exactly when v2 is on or outside the A-circumsphere of S1.
    """

    s1: tuple
    v2: tuple
    coeffs: tuple

    def __call__(self, A) -> Fraction:
        c = A.coords() if isinstance(A, QuadForm) else tuple(A)
        return sum(a * b for a, b in zip(self.coeffs, c))


def _orientation_matrix(s1) -> list:
    return [[1] + list(v) for v in s1]


def voronoi_regulator(s1: Sequence, v2: Sequence) -> Regulator:
    s1 = tuple(tuple(v) for v in s1)
    v2 = tuple(v2)
    if v2 in s1:
        raise ValueError("v2 must not be a vertex of S1")
    D = abs(det(_orientation_matrix(s1)))
    if D == 0:
        raise ValueError("S1 is degenerate")
    beta = barycentric(s1, v2)
    acc = [Fraction(x) for x in form_coordinate_vector(v2)]
    for b, s in zip(beta, s1):
        for k, x in enumerate(form_coordinate_vector(s)):
            acc[k] -= b * x
    coeffs = tuple(int(D * x) if (D * x).denominator == 1 else D * x for x in acc)
    return Regulator(s1, v2, coeffs)


def lifted_determinant(s1: Sequence, v2: Sequence, A: QuadForm) -> Fraction:
    """sigma_{S1} times the (n+2)x(n+2) determinant with rows (1, x, A[x])."""
    rows = [[1] + list(v) + [A(v)] for v in list(s1) + [v2]]
    sigma = 1 if det(_orientation_matrix(s1)) > 0 else -1
    return sigma * det(rows)


def facet_records(t: PeriodicTriangulation) -> list:
    """(facet, S1, apex of S1, apex of S2) for every facet class in canonical order.

    Both cells are positioned so that they contain the canonical facet.
    """
    out = []
    for key, inc in sorted(t.facets.items()):
        if len(inc) != 2:
            raise ValueError("triangulation has unpaired facets")
        (c1, i1, t1), (c2, i2, t2) = inc
        s1 = translate(t.classes[c1], tuple(-x for x in t1))
        p = s1[i1]
        q = sub(t.classes[c2][i2], t2)
        out.append((key, s1, p, q))
    return out


@dataclass
class DelaunayResult:
    is_delaunay: bool
    form: QuadForm | None
    slack: Fraction
    positive_definite: bool
    regulators: list
    certificate: LPCertificate | None = None

    def __bool__(self) -> bool:
        return self.is_delaunay


def regulators(t: PeriodicTriangulation) -> list:
    """One regulator per facet class, deduplicated after scaling to primitive vectors."""
    seen = {}
    for _key, s1, _p, q in facet_records(t):
        reg = voronoi_regulator(s1, q)
        norm = primitive(reg.coeffs)
        if norm not in seen:
            seen[norm] = reg
    return [seen[k] for k in sorted(seen)]


def delaunay_test(t: PeriodicTriangulation) -> DelaunayResult:
    """Decide whether some positive definite form has t as its Delaunay triangulation."""
    regs = regulators(t)
    res: ConeInteriorResult = cone_interior_point([primitive(r.coeffs) for r in regs], t.dim)
    ok = res.slack > 0 and res.positive_definite
    if ok:
        # re-check the witness against every regulator exactly
        assert all(r(res.form) > 0 for r in regs)
    return DelaunayResult(ok, res.form, res.slack, res.positive_definite, regs, res.certificate)


# ---------------------------------------------------------------- regularity


@dataclass
class RegularitySystem:
    radius: int
    simplices: list
    vertices: list
    constraints: list  # (coefficient dict {vertex: int}, rhs)
    gauge: tuple


@dataclass
class NonRegularityResult:
    regular_possible_at_r: bool
    radius: int
    system: RegularitySystem
    certificate: LPCertificate
    heights: dict | None = None

    @property
    def nonregular(self) -> bool:
        return not self.regular_possible_at_r


def _box_translates(c, r: int):
    n = len(c[0])
    lo = [-r - min(v[k] for v in c) for k in range(n)]
    hi = [r - max(v[k] for v in c) for k in range(n)]
    for v in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        yield translate(c, v)


def regularity_system(t: PeriodicTriangulation, r: int) -> RegularitySystem:
    """Strengthened local convexity system on all cells inside [-r, r]^n."""
    cells = []
    for c in t.classes:
        cells.extend(_box_translates(c, r))
    cells.sort()
    by_facet = {}
    for ci, cell in enumerate(cells):
        for i in range(len(cell)):
            f = tuple(v for k, v in enumerate(cell) if k != i)
            by_facet.setdefault(f, []).append((ci, i))
    verts = sorted({v for c in cells for v in c})
    cons = []
    for f, inc in sorted(by_facet.items()):
        if len(inc) != 2:
            continue
        (c1, i1), (c2, i2) = inc
        s1, q = cells[c1], cells[c2][i2]
        D = abs(det(_orientation_matrix(s1)))
        beta = barycentric(s1, q)
        coef = {q: D}
        for b, s in zip(beta, s1):
            coef[s] = coef.get(s, 0) - int(D * b)
        cons.append((coef, 1))
    gauge = cells[0] if cells else ()
    return RegularitySystem(r, cells, verts, cons, tuple(gauge))


def nonregularity_test(t: PeriodicTriangulation, r: int, max_pivots: int | None = None) -> NonRegularityResult:
    """Try to certify that t is not regular using the cells inside [-r, r]^n.

    A feasible system is inconclusive and comes with witness heights; an
    infeasible one carries a Farkas certificate and proves non-regularity.
    """
    if r < 1:
        raise ValueError("radius must be at least 1")
    system = regularity_system(t, r)
    index = {v: k for k, v in enumerate(system.vertices)}
    N = len(index)
    ineqs = []
    for coef, rhs in system.constraints:
        row = [0] * N
        for v, a in coef.items():
            row[index[v]] += a
        ineqs.append((tuple(row), -rhs))
    eqs = []
    for v in system.gauge:
        row = [0] * N
        row[index[v]] = 1
        eqs.append((tuple(row), 0))
    cert = lp_solve(ineqs, eqs, None, dim=N, max_pivots=max_pivots)
    heights = None
    if cert.feasible:
        heights = {v: cert.witness[index[v]] for v in system.vertices}
    return NonRegularityResult(cert.feasible, r, system, cert, heights)


def verify_nonregularity(result: NonRegularityResult) -> bool:
    """Independent re-check of a Farkas certificate for the regularity system.

    The multipliers y >= 0 on the strengthened inequalities and z on the gauge
    equalities must cancel every height variable while the constants sum to a
    negative number, so the system has no solution.
    """
    if result.regular_possible_at_r:
        return False
    system = result.system
    yi, ye = result.certificate.farkas
    if any(y < 0 for y in yi):
        return False
    total = {}
    const = 0
    for y, (coef, rhs) in zip(yi, system.constraints):
        if y == 0:
            continue
        for v, a in coef.items():
            total[v] = total.get(v, 0) + y * a
        const -= y * rhs
    for z, v in zip(ye, system.gauge):
        total[v] = total.get(v, 0) + z
    return all(x == 0 for x in total.values()) and const < 0


# ---------------------------------------------------------------- refinement


@dataclass
class RefineResult:
    cells: list
    generic: bool
    triangulation: PeriodicTriangulation | None = None
    nonregular: bool = False


def lower_faces(points: Sequence, A: QuadForm) -> list:
    """Lower faces of the lifted point set conv{(x, A[x])}, projected back."""
    lifted = [tuple(p) + (A(p),) for p in points]
    if rank([[x - y for x, y in zip(p, lifted[0])] for p in lifted[1:]]) < len(lifted[0]):
        # all lifted points on one hyperplane: the whole tile is a single face
        return [tuple(sorted(tuple(p) for p in points))]
    faces = []
    for lin, _c, inc in convex_hull_facets(lifted):
        if lin[-1] > 0:
            faces.append(tuple(sorted(tuple(points[i]) for i in inc)))
    return sorted(faces)


def refine(tiles: Sequence, A: QuadForm) -> RefineResult:
    """Subdivide each tile class by the lower hull of its lifted vertices.

    Tiles are translation-class representatives of a periodic face-to-face
    tiling by lattice polytopes. Lifting by a global quadratic form makes the
    subdivisions agree on shared faces.
    """
    if not isinstance(A, QuadForm):
        A = QuadForm(A)
    if not is_positive_definite(A):
        raise ValueError("form is not positive definite")
    n = A.n
    cells = []
    generic = True
    for tile in tiles:
        pts = sorted({tuple(p) for p in tile})
        if any(len(p) != n for p in pts):
            raise ValueError("tile dimension does not match the form")
        for face in lower_faces(pts, A):
            if len(face) != n + 1:
                generic = False
            cells.append(face)
    cells = sorted({canonicalize(c) for c in cells})
    tri = None
    if generic:
        tri = PeriodicTriangulation(n, tuple(cells))
        rep = validate_structure(tri)
        if not rep:
            raise ValueError(f"input tiling is not face-to-face: {rep.reason}")
    return RefineResult(cells, generic, tri)


def cube_tiling(n: int) -> list:
    return [list(itertools.product((0, 1), repeat=n))]


def freudenthal_seed(n: int) -> PeriodicTriangulation:
    """The n! simplices 0 < e_s1 < e_s1 + e_s2 < ... of the unit cube."""
    if n < 1:
        raise ValueError("n must be positive")
    simplices = []
    for perm in itertools.permutations(range(n)):
        v = [0] * n
        s = [tuple(v)]
        for i in perm:
            v[i] += 1
            s.append(tuple(v))
        simplices.append(s)
    return PeriodicTriangulation.from_simplices(simplices, n)


def prism_extend(t: PeriodicTriangulation, n: int, A: QuadForm, input_nonregular: bool = False) -> RefineResult:
    """Refine the tiling by prisms (class of t) x [0,1]^(n-k) with the form A.

    Slicing the result at integer heights in the new coordinates gives back t,
    so a non-regular t yields a non-regular result; ``input_nonregular``
    records that the caller holds such a certificate for t.
    """
    k = t.dim
    if n <= k:
        raise ValueError("target dimension must exceed the input dimension")
    cube = list(itertools.product((0, 1), repeat=n - k))
    tiles = [[tuple(v) + c for v in cls for c in cube] for cls in t.classes]
    res = refine(tiles, A)
    res.nonregular = input_nonregular
    return res
