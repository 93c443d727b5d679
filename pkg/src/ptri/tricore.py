"""Periodic triangulations stored as finite sets of simplex translation classes.

A simplex is a tuple of integer vertex tuples. Its translation class is
represented canonically: vertices sorted lexicographically, then translated
so that the smallest one sits at the origin. A (partial) periodic
triangulation is a sorted tuple of such canonical classes.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .exact import det, integer_inverse, orientation
from .lp import lp_solve
from .polyhedra import HPolyhedron, simplex_facets


class DegenerateSimplexError(ValueError):
    pass


def sub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def add(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def neg(a) -> tuple:
    return tuple(-x for x in a)


def edge_matrix(simplex) -> list:
    v0 = simplex[0]
    return [sub(v, v0) for v in simplex[1:]]


def volume(simplex) -> int:
    """Relative volume |det(v1 - v0, ..., vn - v0)|."""
    return abs(det(edge_matrix(simplex)))


def canonicalize(simplex) -> tuple:
    """Canonical representative of the translation class of a simplex."""
    s = sorted(simplex)
    m = s[0]
    return tuple(tuple(a - b for a, b in zip(w, m)) for w in s)


def canonical_simplex(simplex) -> tuple:
    """Canonicalize after checking the simplex is full-dimensional."""
    simplex = tuple(tuple(int(x) for x in v) for v in simplex)
    n = len(simplex[0])
    if len(simplex) != n + 1 or any(len(v) != n for v in simplex):
        raise DegenerateSimplexError(f"an {n}-simplex needs {n + 1} vertices of length {n}")
    if volume(simplex) == 0:
        raise DegenerateSimplexError(f"degenerate simplex {simplex}")
    return canonicalize(simplex)


def translate(simplex, t) -> tuple:
    return tuple(add(v, t) for v in simplex)


def facet_class(simplex, i: int):
    """(canonical facet, translation) of the facet opposite vertex i.

    The facet itself equals ``canonical facet + translation``.
    """
    f = sorted(v for k, v in enumerate(simplex) if k != i)
    m = f[0]
    return tuple(tuple(a - b for a, b in zip(w, m)) for w in f), m


# ---------------------------------------------------------------- triangulations


@dataclass(frozen=True)
class PartialTriangulation:
    """A Z^n-periodic packing by simplices, given by its translation classes."""

    dim: int
    classes: tuple

    def __post_init__(self):
        cls = tuple(sorted(set(canonicalize(c) for c in self.classes)))
        if len(cls) != len(self.classes):
            raise ValueError("duplicate translation classes")
        for c in cls:
            if len(c) != self.dim + 1 or any(len(v) != self.dim for v in c):
                raise ValueError(f"class {c} does not live in dimension {self.dim}")
        object.__setattr__(self, "classes", cls)

    @classmethod
    def from_simplices(cls, simplices: Iterable, dim: int | None = None):
        classes = {canonical_simplex(s) for s in simplices}
        if dim is None:
            dim = len(next(iter(classes))[0])
        return cls(dim, tuple(classes))

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, simplex) -> bool:
        return canonicalize(simplex) in self.class_set

    @cached_property
    def class_set(self) -> frozenset:
        return frozenset(self.classes)

    @cached_property
    def volumes(self) -> tuple:
        return tuple(volume(c) for c in self.classes)

    @property
    def total_volume(self) -> int:
        return sum(self.volumes)

    @cached_property
    def facets(self) -> dict:
        """Map facet class -> list of incidences (class index, opposite vertex, translation)."""
        out = defaultdict(list)
        for ci, c in enumerate(self.classes):
            for i in range(self.dim + 1):
                key, t = facet_class(c, i)
                out[key].append((ci, i, t))
        return dict(out)

    @property
    def frontier(self) -> list:
        """Facet classes covered only once, in canonical order."""
        return sorted(k for k, inc in self.facets.items() if len(inc) == 1)

    @property
    def is_complete(self) -> bool:
        return self.total_volume == math.factorial(self.dim) and not self.frontier

    def neighbor(self, ci: int, i: int):
        """The cell across the facet of class ci opposite vertex i.

        Returns (class index, vertex index, positioned cell) with the cell
        translated so it shares that facet with ``classes[ci]`` as stored,
        or None on the frontier.
        """
        key, t = facet_class(self.classes[ci], i)
        for cj, j, tj in self.facets[key]:
            if (cj, j) != (ci, i):
                return cj, j, translate(self.classes[cj], sub(t, tj))
        return None

    def image(self, g) -> "PartialTriangulation":
        """Image under the linear map x -> g x (g an integer matrix)."""
        return type(self)(self.dim, tuple(
            canonicalize(tuple(tuple(sum(a * b for a, b in zip(row, v)) for row in g) for v in c))
            for c in self.classes
        ))

    def with_classes(self, classes) -> "PartialTriangulation":
        return type(self)(self.dim, tuple(classes))


@dataclass(frozen=True)
class PeriodicTriangulation(PartialTriangulation):
    """A complete Z^n-periodic face-to-face triangulation (validated separately)."""


# ---------------------------------------------------------------- compatibility


@dataclass(frozen=True)
class _SimplexData:
    verts: tuple
    facets: tuple  # (lin, const) with positive value at the opposite vertex
    heights: tuple  # value of facet i at vertex i


_data_cache: dict = {}


def _simplex_data(s) -> _SimplexData:
    d = _data_cache.get(s)
    if d is None:
        facets = tuple(simplex_facets(s))
        heights = tuple(sum(a * b for a, b in zip(l, s[i])) + c for i, (l, c) in enumerate(facets))
        d = _SimplexData(s, facets, heights)
        if len(_data_cache) > 200000:
            _data_cache.clear()
        _data_cache[s] = d
    return d


def translation_body(s1, s2) -> HPolyhedron:
    """Translations v for which s2 + v meets every facet half-space of s1."""
    d1 = _simplex_data(tuple(s1))
    ineqs = []
    for lin, c in d1.facets:
        best = max(sum(a * b for a, b in zip(lin, w)) for w in s2)
        ineqs.append((lin, best + c))
    return HPolyhedron(len(s1[0]), tuple(ineqs))


def _intersection_is_common_face(d1: _SimplexData, d2: _SimplexData, v) -> bool:
    """Whether s1 and s2 + v meet in a common face (or not at all)."""
    a = d1.verts
    b = [add(w, v) for w in d2.verts]
    common1 = [i for i, x in enumerate(a) if x in b]
    common_pts = {a[i] for i in common1}
    # values of s1 facet functionals at the vertices of s2 + v
    U = [[sum(p * q for p, q in zip(lin, w)) + c for w in b] for lin, c in d1.facets]
    for row in U:
        if max(row) < 0:
            return True
    W = [[sum(p * q for p, q in zip(lin, w)) + c for w in a] for lin, c in
         ((lin, c - sum(p * q for p, q in zip(lin, v))) for lin, c in d2.facets)]
    for row in W:
        if max(row) < 0:
            return True
    for row in U:
        if max(row) <= 0 and all(b[j] in common_pts for j, u in enumerate(row) if u == 0):
            return True
    for row in W:
        if max(row) <= 0 and all(a[j] in common_pts for j, u in enumerate(row) if u == 0):
            return True
    # general case: maximize the barycentric mass on non-common vertices of s1
    n1 = len(b)
    ineqs = [(tuple(int(k == j) for k in range(n1)), 0) for j in range(n1)]
    for row in U:
        ineqs.append((tuple(row), 0))
    eqs = [(tuple([1] * n1), -1)]
    # objective scaled by lcm of the facet heights to stay integral
    L = math.lcm(*d1.heights)
    obj = [0] * n1
    for i, row in enumerate(U):
        if i in common1:
            continue
        f = L // d1.heights[i]
        for j in range(n1):
            obj[j] += f * row[j]
    cert = lp_solve(ineqs, eqs, (tuple(obj), 0), "max", dim=n1)
    if cert.status == "infeasible":
        return True
    return cert.optimum == 0


def candidate_translations(s1, s2) -> list:
    """Integer v such that s1 and s2 + v might intersect.

    Lattice points of the translation body of (s1, s2), further filtered by
    the body of (s2, s1) and the bounding box of s1 - s2.
    """
    d1 = _simplex_data(tuple(s1))
    d2 = _simplex_data(tuple(s2))
    n = len(s1[0])
    lows = [min(p[k] for p in s1) - max(q[k] for q in s2) for k in range(n)]
    highs = [max(p[k] for p in s1) - min(q[k] for q in s2) for k in range(n)]
    c1 = []
    for lin, c in d1.facets:
        c1.append((lin, max(sum(a * b for a, b in zip(lin, w)) for w in s2) + c))
    c2 = []
    for lin, c in d2.facets:
        # g(a - v) >= 0 for some vertex a of s1: max_a g(a) - lin.v >= 0
        c2.append((lin, max(sum(a * b for a, b in zip(lin, w)) for w in s1) + c))
    out = []
    for v in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
        ok = True
        for lin, c in c1:
            if sum(a * b for a, b in zip(lin, v)) + c < 0:
                ok = False
                break
        if not ok:
            continue
        for lin, c in c2:
            if c - sum(a * b for a, b in zip(lin, v)) < 0:
                ok = False
                break
        if ok:
            out.append(v)
    return out


_compat_cache: dict = {}
_verdict_cache: dict = {}
_std_maps: dict = {}


def _standard_symmetries(n: int) -> np.ndarray:
    """Linear parts of the (n+1)! affine maps permuting the standard simplex."""
    M = _std_maps.get(n)
    if M is None:
        std = [tuple([0] * n)] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
        mats = []
        for perm in itertools.permutations(range(n + 1)):
            o = std[perm[0]]
            cols = [sub(std[perm[k]], o) for k in range(1, n + 1)]
            mats.append([[cols[k][r] for k in range(n)] for r in range(n)])
        M = np.array(mats, dtype=np.int64)
        _std_maps[n] = M
    return M


def _normal_pair(s1, s2):
    """Normal form of the class pair under affine unimodular maps, or None.

    Only unimodular s1 is normalized: it is sent to the standard simplex and
    s2 along with it, minimizing over the symmetries of the standard simplex.
    """
    if volume(s1) != 1:
        return None
    n = len(s1[0])
    E = [[v[k] - s1[0][k] for v in s1[1:]] for k in range(n)]
    L = np.array(integer_inverse(E), dtype=np.int64)
    img = np.array(s2, dtype=np.int64) @ L.T  # rows: L v for v in s2
    images = np.einsum("sij,vj->svi", _standard_symmetries(n), img)
    return min(canonicalize(tuple(map(tuple, c))) for c in images.tolist())


def _compatible_uncached(a, b):
    da, db = _simplex_data(a), _simplex_data(b)
    for v in candidate_translations(a, b):
        if not _intersection_is_common_face(da, db, v):
            return False, v
    return True, None


def pairwise_compatible(s1, s2, use_cache: bool = True):
    """Check that all Z^n translates of two simplices meet face-to-face.

    Returns:
        (True, None) or (False, v) where s1 and s2 + v intersect improperly.
    """
    s1 = canonicalize(s1)
    s2 = canonicalize(s2)
    if not use_cache:
        return _compatible_uncached(s1, s2)
    key = (s1, s2)
    hit = _compat_cache.get(key)
    if hit is not None:
        return hit
    # the verdict is invariant under simultaneous affine unimodular maps
    nk = _normal_pair(s1, s2)
    if nk is not None and _verdict_cache.get(nk) is True:
        result = (True, None)
    else:
        result = _compatible_uncached(s1, s2)
        if nk is not None:
            _verdict_cache[nk] = result[0]
    if len(_compat_cache) > 500000:
        _compat_cache.clear()
    _compat_cache[key] = result
    return result


# ---------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    ok: bool
    reason: str = ""
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def validate_structure(t: PartialTriangulation) -> ValidationReport:
    """Volume identity plus facet pairing with the two cells on opposite sides.

    For full-dimensional integer simplices these two conditions already force
    a face-to-face tiling: crossing any facet keeps the covering multiplicity
    constant, so it equals total volume / n! = 1.
    """
    n = t.dim
    for c, vol in zip(t.classes, t.volumes):
        if vol == 0:
            return ValidationReport(False, "degenerate simplex", c)
    total = t.total_volume
    if total != math.factorial(n):
        return ValidationReport(False, f"volume sum {total} != {math.factorial(n)}", total)
    for key, inc in sorted(t.facets.items()):
        if len(inc) != 2:
            return ValidationReport(False, f"facet class covered {len(inc)} times", key)
        (c1, i1, t1), (c2, i2, t2) = inc
        p = sub(t.classes[c1][i1], t1)
        q = sub(t.classes[c2][i2], t2)
        if orientation(tuple(key) + (p,)) * orientation(tuple(key) + (q,)) >= 0:
            return ValidationReport(False, "cells on the same side of a facet", key)
    return ValidationReport(True)


def validate(t: PartialTriangulation, pairs: bool = True) -> ValidationReport:
    """Full check: volume identity, facet double covering, all-pairs compatibility."""
    rep = validate_structure(t)
    if not rep or not pairs:
        return rep
    cls = t.classes
    for i in range(len(cls)):
        for j in range(i, len(cls)):
            ok, v = pairwise_compatible(cls[i], cls[j])
            if not ok:
                return ValidationReport(False, "translates meet improperly", (cls[i], cls[j], v))
    return ValidationReport(True)


def validate_partial(t: PartialTriangulation) -> ValidationReport:
    """Packing check: volume at most n!, facets covered at most twice, all pairs compatible."""
    if t.total_volume > math.factorial(t.dim):
        return ValidationReport(False, "volume exceeds n!", t.total_volume)
    for key, inc in t.facets.items():
        if len(inc) > 2:
            return ValidationReport(False, "facet covered more than twice", key)
    cls = t.classes
    for i in range(len(cls)):
        for j in range(i, len(cls)):
            ok, v = pairwise_compatible(cls[i], cls[j])
            if not ok:
                return ValidationReport(False, "translates meet improperly", (cls[i], cls[j], v))
    return ValidationReport(True)


def facet_classes(t: PartialTriangulation) -> list:
    """(facet class, incidences) in canonical order; interior facets have two incidences."""
    return sorted(t.facets.items())


def is_centrally_symmetric(t: PartialTriangulation) -> bool:
    """Invariance under x -> -x up to integer translations."""
    return all(canonicalize(tuple(neg(v) for v in c)) in t.class_set for c in t.classes)


def volume_bounds_hold(t: PartialTriangulation) -> bool:
    """max vol <= n!, and <= 2^n n! / C(2n, n) for centrally symmetric t."""
    n = t.dim
    mx = max(t.volumes)
    if mx > math.factorial(n):
        return False
    if is_centrally_symmetric(t):
        return mx * math.comb(2 * n, n) <= 2 ** n * math.factorial(n)
    return True


def stats(t: PeriodicTriangulation, symmetry: bool = True, delaunay: bool = True) -> dict:
    """Summary numbers for a triangulation."""
    out = {
        "dim": t.dim,
        "classes": len(t),
        "volumes": sorted(t.volumes),
        "facet_classes": len(t.facets),
        "centrally_symmetric": is_centrally_symmetric(t),
    }
    if symmetry:
        from .symmetry import stabilizer

        out["point_group_order"] = len(stabilizer(t).point_group)
    if delaunay:
        from .predicates import delaunay_test

        out["delaunay"] = delaunay_test(t).is_delaunay
    return out
