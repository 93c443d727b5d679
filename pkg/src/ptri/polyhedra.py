"""Exact polyhedral toolkit: H-polyhedra, double description, lattice points."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Sequence

from .exact import QuadForm, inverse, is_positive_definite, primitive
from .lp import LPCertificate, lp_solve


@dataclass(frozen=True)
class HPolyhedron:
    """{x : l(x) + c >= 0 for every inequality, l(x) + c == 0 for every equality}."""

    dim: int
    inequalities: tuple = ()
    equalities: tuple = ()

    def __post_init__(self):
        for name in ("inequalities", "equalities"):
            cons = tuple(
                (tuple(Fraction(a) for a in coeffs), Fraction(c)) for coeffs, c in getattr(self, name)
            )
            for coeffs, _ in cons:
                if len(coeffs) != self.dim:
                    raise ValueError("constraint length does not match dimension")
            object.__setattr__(self, name, cons)

    def contains(self, x: Sequence) -> bool:
        for coeffs, c in self.inequalities:
            if sum(a * b for a, b in zip(coeffs, x)) + c < 0:
                return False
        for coeffs, c in self.equalities:
            if sum(a * b for a, b in zip(coeffs, x)) + c != 0:
                return False
        return True

    def intersect(self, other: "HPolyhedron") -> "HPolyhedron":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return HPolyhedron(
            self.dim, self.inequalities + other.inequalities, self.equalities + other.equalities
        )

    @classmethod
    def box(cls, lows: Sequence, highs: Sequence) -> "HPolyhedron":
        d = len(lows)
        ineqs = []
        for i in range(d):
            e = tuple(int(j == i) for j in range(d))
            ineqs.append((e, -lows[i]))
            ineqs.append((tuple(-x for x in e), highs[i]))
        return cls(d, tuple(ineqs))

    @classmethod
    def simplex(cls, vertices: Sequence[Sequence[int]]) -> "HPolyhedron":
        """H-representation of a full-dimensional simplex from its vertices."""
        return cls(len(vertices[0]), tuple(simplex_facets(vertices)))


def simplex_facets(vertices: Sequence[Sequence[int]]) -> list:
    """Facet inequalities of a simplex; entry i is the facet opposite vertex i.

    Each inequality (l, c) is integral and primitive, with l(v_i) + c > 0.
    Column i of the inverse of the matrix with rows (1, v_j) is the
    barycentric coordinate of vertex i, which is the facet functional up to
    positive scaling.
    """
    n = len(vertices[0])
    if len(vertices) != n + 1:
        raise ValueError("a simplex needs n+1 vertices")
    try:
        inv = inverse([[1] + list(v) for v in vertices])
    except ZeroDivisionError:
        raise ValueError("degenerate simplex") from None
    out = []
    for i in range(n + 1):
        vec = primitive([inv[k][i] for k in range(1, n + 1)] + [inv[0][i]])
        out.append((tuple(vec[:n]), vec[n]))
    return out


def lp_optimize(p: HPolyhedron, objective, sense: str = "max") -> LPCertificate:
    """Solve max/min of an affine objective (coeffs, const) over p."""
    if len(objective) == p.dim:
        objective = (tuple(objective), 0)
    return lp_solve(p.inequalities, p.equalities, objective, sense, dim=p.dim)


class UnboundedPolyhedronError(ValueError):
    def __init__(self, ray):
        super().__init__(f"polyhedron is unbounded along direction {tuple(map(str, ray))}")
        self.ray = ray


def bounding_box(p: HPolyhedron):
    """Exact coordinate-wise min/max by 2*dim LPs; None if p is empty."""
    lows, highs = [], []
    for i in range(p.dim):
        e = tuple(int(j == i) for j in range(p.dim))
        lo = lp_optimize(p, e, "min")
        if lo.status == "infeasible":
            return None
        if lo.status == "unbounded":
            raise UnboundedPolyhedronError(lo.ray)
        hi = lp_optimize(p, e, "max")
        if hi.status == "unbounded":
            raise UnboundedPolyhedronError(hi.ray)
        lows.append(lo.optimum)
        highs.append(hi.optimum)
    return lows, highs


def integer_points(p: HPolyhedron) -> list:
    """All lattice points of a bounded polyhedron, in lexicographic order.

    Raises:
        UnboundedPolyhedronError: carrying a recession direction.
    """
    box = bounding_box(p)
    if box is None:
        return []
    lows, highs = box
    ranges = [range(ceil(lo), floor(hi) + 1) for lo, hi in zip(lows, highs)]
    return [x for x in itertools.product(*ranges) if p.contains(x)]


# ---------------------------------------------------------------- double description


def _normalize_ray(v) -> tuple:
    return primitive(v)


def _cone_generators(rows: list, dim: int):
    """Extreme rays and lineality basis of the cone {y : A y >= 0}.

    Incremental double description; adjacency by the combinatorial test on
    zero sets. Rows and rays are integer vectors.
    """
    lines = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list = []
    processed: list = []
    for a in rows:
        dot = lambda v: sum(x * y for x, y in zip(a, v))  # noqa: E731
        pivot = next((l for l in lines if dot(l) != 0), None)
        if pivot is not None:
            pa = dot(pivot)
            if pa < 0:
                pivot = tuple(-x for x in pivot)
                pa = -pa
            new_lines = []
            for l in lines:
                if l is pivot or l == tuple(-x for x in pivot):
                    continue
                la = dot(l)
                if la == 0:
                    new_lines.append(l)
                else:
                    new_lines.append(_normalize_ray([pa * x - la * y for x, y in zip(l, pivot)]))
            new_rays = []
            for r in rays:
                ra = dot(r)
                if ra == 0:
                    new_rays.append(r)
                else:
                    new_rays.append(_normalize_ray([pa * x - ra * y for x, y in zip(r, pivot)]))
            lines = new_lines
            rays = new_rays + [_normalize_ray(pivot)]
            processed.append(a)
            continue
        processed.append(a)
        pos, neg, zero = [], [], []
        for r in rays:
            v = dot(r)
            (pos if v > 0 else neg if v < 0 else zero).append((r, v))
        if not neg:
            continue
        zsets = {}
        for r in rays:
            zsets[r] = frozenset(
                k for k, b in enumerate(processed[:-1]) if sum(x * y for x, y in zip(b, r)) == 0
            )
        cone_dim = dim - len(lines)
        new = []
        for (rp, vp), (rn, vn) in itertools.product(pos, neg):
            common = zsets[rp] & zsets[rn]
            if len(common) < cone_dim - 2:
                continue
            adjacent = True
            for r in rays:
                if r is rp or r is rn:
                    continue
                if common <= zsets[r]:
                    adjacent = False
                    break
            if adjacent:
                new.append(_normalize_ray([vp * x - vn * y for x, y in zip(rn, rp)]))
        rays = [r for r, _ in pos] + [r for r, _ in zero] + new
        rays = list(dict.fromkeys(rays))
    return rays, lines


@dataclass
class VRepresentation:
    vertices: list = field(default_factory=list)
    rays: list = field(default_factory=list)
    lines: list = field(default_factory=list)


def dual_description(p: HPolyhedron) -> VRepresentation:
    """Minimal vertices, extreme rays and lineality of p (empty p gives no generators)."""
    d = p.dim
    rows = []
    for coeffs, c in p.inequalities:
        rows.append(primitive(list(coeffs) + [c]))
    for coeffs, c in p.equalities:
        v = primitive(list(coeffs) + [c])
        rows.append(v)
        rows.append(tuple(-x for x in v))
    rows.append(tuple([0] * d + [1]))
    rays, lines = _cone_generators(rows, d + 1)
    out = VRepresentation()
    for l in lines:
        if l[d] != 0:
            # a line moving the homogenizing coordinate is impossible once t >= 0 is in
            raise AssertionError("unexpected homogeneous line")
        out.lines.append(tuple(Fraction(x) for x in l[:d]))
    for r in rays:
        if r[d] > 0:
            out.vertices.append(tuple(Fraction(x, r[d]) for x in r[:d]))
        else:
            out.rays.append(tuple(Fraction(x) for x in r[:d]))
    if not out.vertices:
        return VRepresentation()
    out.vertices.sort()
    out.rays.sort()
    return out


def convex_hull_facets(points: Sequence[Sequence]) -> list:
    """Facets (coeffs, const, incident point indices) of conv(points), full-dimensional."""
    d = len(points[0])
    rows = [primitive(list(p) + [1]) if all(isinstance(x, int) for x in p) else primitive(list(map(Fraction, p)) + [1]) for p in points]
    rays, lines = _cone_generators(rows, d + 1)
    if lines:
        raise ValueError("points are not full-dimensional")
    out = []
    for r in rays:
        lin, c = r[:d], r[d]
        inc = tuple(i for i, p in enumerate(points) if sum(a * b for a, b in zip(lin, p)) + c == 0)
        out.append((tuple(lin), c, inc))
    return out


def h_representation(vertices: Sequence[Sequence]) -> HPolyhedron:
    """Facet description of a full-dimensional polytope given by vertices."""
    facets = convex_hull_facets(vertices)
    return HPolyhedron(len(vertices[0]), tuple((lin, c) for lin, c, _ in facets))


# ---------------------------------------------------------------- cones of forms


@dataclass
class ConeInteriorResult:
    form: QuadForm | None
    slack: Fraction
    positive_definite: bool
    certificate: LPCertificate

    @property
    def full_dimensional(self) -> bool:
        return self.slack > 0


def cone_interior_point(inequalities: Sequence[Sequence], n: int) -> ConeInteriorResult:
    """Most interior form of a homogeneous cone in upper-triangular form coordinates.

    Solves max t subject to g(A) >= t for every inequality g, trace(A) = 1 and
    |a_ij| <= 1 (plus t <= 1 when there are no inequalities). Among optimal
    forms a second LP prefers the one with the largest diagonal-dominance
    margin, which makes the witness positive definite whenever the optimal
    face allows a diagonally dominant form.
    """
    N = n * (n + 1) // 2
    diag = [i * n - i * (i - 1) // 2 for i in range(n)]
    trace_row = tuple(1 if k in diag else 0 for k in range(N))
    ineqs = []
    for g in inequalities:
        g = tuple(g)
        if len(g) != N:
            raise ValueError("inequality has wrong length")
        ineqs.append((g + (-1,), 0))
    for k in range(N):
        e = [0] * (N + 1)
        e[k] = 1
        ineqs.append((tuple(e), 1))
        e[k] = -1
        ineqs.append((tuple(e), 1))
    if not inequalities:
        ineqs.append((tuple([0] * N + [-1]), 1))
    eqs = [(trace_row + (0,), -1)]
    obj = (tuple([0] * N + [1]), 0)
    cert = lp_solve(ineqs, eqs, obj, "max", dim=N + 1)
    t = cert.optimum
    x = cert.witness[:N]
    # second stage: maximize margin s with a_ii - sum_j |a_ij| >= s on the optimal face
    index = {}
    k = 0
    for i in range(n):
        for j in range(i, n):
            index[i, j] = index[j, i] = k
            k += 1
    off = [(i, j) for i in range(n) for j in range(i + 1, n)]
    M = len(off)
    D2 = N + M + 1  # a, u (abs bounds), s
    ineq2 = []
    for g in inequalities:
        ineq2.append((tuple(g) + (0,) * (M + 1), -t))
    for k in range(N):
        e = [0] * D2
        e[k] = 1
        ineq2.append((tuple(e), 1))
        e[k] = -1
        ineq2.append((tuple(e), 1))
    for m_, (i, j) in enumerate(off):
        e = [0] * D2
        e[index[i, j]] = 1
        e[N + m_] = 1
        ineq2.append((tuple(e), 0))  # u >= -a
        e = [0] * D2
        e[index[i, j]] = -1
        e[N + m_] = 1
        ineq2.append((tuple(e), 0))  # u >= a
    for i in range(n):
        e = [0] * D2
        e[index[i, i]] = 1
        for m_, (a, b) in enumerate(off):
            if i in (a, b):
                e[N + m_] = -1
        e[D2 - 1] = -1
        ineq2.append((tuple(e), 0))
    e = [0] * D2
    e[D2 - 1] = -1
    ineq2.append((tuple(e), 1))  # s <= 1 keeps the LP bounded
    eq2 = [(trace_row + (0,) * (M + 1), -1)]
    obj2 = (tuple([0] * (D2 - 1) + [1]), 0)
    cert2 = lp_solve(ineq2, eq2, obj2, "max", dim=D2)
    if cert2.status == "optimal" and cert2.optimum > 0:
        x = cert2.witness[:N]
    form = QuadForm.from_coords(n, x)
    return ConeInteriorResult(form, t, is_positive_definite(form), cert)
