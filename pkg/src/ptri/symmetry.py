"""Equivalence of periodic triangulations under affine unimodular maps.

Every class carries a small matrix that does not depend on where the class
sits: row i holds the barycentric coordinates (with respect to the class)
of the apex of the neighbouring cell across the facet opposite vertex i.
An affine map sending one triangulation onto another permutes these
matrices along with the vertices, so they prune the mapping search and
give cheap invariants.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
import hashlib
from typing import Sequence

import numpy as np

from .exact import det, integer_inverse, inverse, matmul, matvec
from .tricore import PartialTriangulation, _simplex_data, canonicalize, sub


@dataclass(frozen=True)
class AffineMap:
    """x -> A x + b with integer A and b."""

    A: tuple
    b: tuple

    def __call__(self, x) -> tuple:
        return tuple(sum(a * y for a, y in zip(row, x)) + c for row, c in zip(self.A, self.b))

    @property
    def unimodular(self) -> bool:
        return abs(det(self.A)) == 1

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        A = tuple(map(tuple, matmul(self.A, other.A)))
        b = tuple(x + y for x, y in zip(matvec(self.A, other.b), self.b))
        return AffineMap(A, b)

    def inverse(self) -> "AffineMap":
        Ai = integer_inverse(self.A)
        b = tuple(-x for x in matvec(Ai, self.b))
        return AffineMap(tuple(map(tuple, Ai)), b)

    def apply(self, t: PartialTriangulation) -> PartialTriangulation:
        return t.with_classes(canonicalize(tuple(self(v) for v in c)) for c in t.classes)


# ---------------------------------------------------------------- local data


def neighbor_matrix(t: PartialTriangulation, ci: int) -> tuple:
    """Rows i: barycentric coordinates of the apex across facet i (None on the frontier)."""
    c = t.classes[ci]
    d = _simplex_data(c)
    rows = []
    for i in range(t.dim + 1):
        nb = t.neighbor(ci, i)
        if nb is None:
            rows.append(None)
            continue
        _cj, j, cell = nb
        q = cell[j]
        rows.append(tuple(
            Fraction(sum(a * b for a, b in zip(lin, q)) + cst, h)
            for (lin, cst), h in zip(d.facets, d.heights)
        ))
    return tuple(rows)


def _entry(M, i, j):
    row = M[i]
    return None if row is None else row[j]


def _digest(obj) -> int:
    """Process-independent 64-bit digest of a repr-able value."""
    return int.from_bytes(hashlib.blake2b(repr(obj).encode(), digest_size=8).digest(), "big")


def _vertex_labels(M) -> list:
    m = len(M)
    labels = []
    for j in range(m):
        out = tuple(sorted((repr(_entry(M, j, k)) for k in range(m) if k != j)))
        inn = tuple(sorted((repr(_entry(M, k, j)) for k in range(m) if k != j)))
        labels.append((repr(_entry(M, j, j)), out, inn))
    # one refinement round
    refined = []
    for j in range(m):
        ctx = tuple(sorted(
            (repr(_entry(M, j, k)), repr(_entry(M, k, j)), labels[k]) for k in range(m) if k != j
        ))
        refined.append(_digest((labels[j], ctx)))
    return refined


@dataclass
class LocalData:
    matrices: list
    vertex_labels: list
    class_invariants: list


def local_data(t: PartialTriangulation) -> LocalData:
    cached = t.__dict__.get("_local_data")
    if cached is not None:
        return cached
    mats, labs, invs = [], [], []
    for ci, c in enumerate(t.classes):
        M = neighbor_matrix(t, ci)
        L = _vertex_labels(M)
        mats.append(M)
        labs.append(L)
        invs.append(_digest((abs(det([sub(v, c[0]) for v in c[1:]])), tuple(sorted(L)))))
    data = LocalData(mats, labs, invs)
    t.__dict__["_local_data"] = data
    return data


def invariant_key(t: PartialTriangulation) -> tuple:
    """Isomorphism-invariant screen: sizes, volumes and class invariant multiset."""
    data = local_data(t)
    return (t.dim, len(t), tuple(sorted(t.volumes)), tuple(sorted(data.class_invariants)))


# ---------------------------------------------------------------- mapping search


def _edge_inverse(src):
    """(adjugate, det) of the transposed edge matrix of src, as integers."""
    E1t = [[v[k] - src[0][k] for v in src[1:]] for k in range(len(src[0]))]
    d = det(E1t)
    adj = [[int(x * d) for x in row] for row in inverse(E1t)]
    return np.array(adj, dtype=np.int64), d


def _affine_from_vertices(src, dst, inv=None):
    """Unique affine map with src[k] -> dst[k]; None unless integral unimodular."""
    # A E1^T = E2^T, so A = E2^T adj(E1^T) / det(E1^T)
    if inv is None:
        inv = _edge_inverse(src)
    adj, d = inv
    o = dst[0]
    E2t = np.array([[v[k] - o[k] for v in dst[1:]] for k in range(len(o))], dtype=np.int64)
    num = E2t @ adj
    if np.any(num % d):
        return None
    A = num // d
    A = tuple(tuple(int(x) for x in row) for row in A.tolist())
    if abs(det(A)) != 1:
        return None
    b = sub(o, matvec(A, src[0]))
    return AffineMap(A, b)


def _orderings(M1, L1, M2, L2):
    """Vertex bijections p (vertex j of class 1 -> p[j] of class 2) respecting the matrices."""
    m = len(M1)
    p = [None] * m
    used = [False] * m

    def rec(j):
        if j == m:
            yield tuple(p)
            return
        for k in range(m):
            if used[k] or L2[k] != L1[j]:
                continue
            if _entry(M1, j, j) != _entry(M2, k, k):
                continue
            ok = True
            for jj in range(j):
                kk = p[jj]
                if _entry(M1, j, jj) != _entry(M2, k, kk) or _entry(M1, jj, j) != _entry(M2, kk, k):
                    ok = False
                    break
            if not ok:
                continue
            p[j] = k
            used[k] = True
            yield from rec(j + 1)
            used[k] = False
        p[j] = None

    yield from rec(0)


def _vertex_array(t) -> np.ndarray:
    arr = t.__dict__.get("_vertex_array")
    if arr is None:
        arr = np.array(t.classes, dtype=np.int64)
        t.__dict__["_vertex_array"] = arr
    return arr


def _maps_onto(g: AffineMap, t1, t2) -> bool:
    target = t2.class_set
    W = _vertex_array(t1) @ np.array(g.A, dtype=np.int64).T + np.array(g.b, dtype=np.int64)
    for c in W.tolist():
        c.sort()
        m = c[0]
        if tuple(tuple(a - b for a, b in zip(w, m)) for w in c) not in target:
            return False
    return True


def _base_class(t, data) -> int:
    counts = Counter(data.class_invariants)
    return min(range(len(t)), key=lambda i: (counts[data.class_invariants[i]], t.classes[i]))


def _candidate_maps(t1, t2, screen: bool = True):
    d1, d2 = local_data(t1), local_data(t2)
    b = _base_class(t1, d1)
    src = t1.classes[b]
    inv = _edge_inverse(src)
    for c2 in range(len(t2)):
        if screen and d2.class_invariants[c2] != d1.class_invariants[b]:
            continue
        dst_cls = t2.classes[c2]
        if screen:
            perms = _orderings(d1.matrices[b], d1.vertex_labels[b], d2.matrices[c2], d2.vertex_labels[c2])
        else:
            perms = itertools.permutations(range(t1.dim + 1))
        for p in perms:
            g = _affine_from_vertices(src, [dst_cls[k] for k in p], inv)
            if g is not None:
                yield g


def isomorphic(t1: PartialTriangulation, t2: PartialTriangulation, screen: bool = True) -> AffineMap | None:
    """An affine unimodular map sending t1 onto t2, or None.

    With ``screen=False`` the search tries every target class and every
    vertex ordering of the base simplex, without any invariant pruning.
    """
    if t1.dim != t2.dim or len(t1) != len(t2):
        return None
    if sorted(t1.volumes) != sorted(t2.volumes):
        return None
    if screen and invariant_key(t1) != invariant_key(t2):
        return None
    for g in _candidate_maps(t1, t2, screen):
        if _maps_onto(g, t1, t2):
            return g
    return None


# ---------------------------------------------------------------- stabilizer


@dataclass
class Stabilizer:
    maps: list  # one symmetry per point-group element, translation part as found
    point_group: list  # sorted linear parts

    @property
    def order(self) -> int:
        return len(self.point_group)


def stabilizer(t: PartialTriangulation) -> Stabilizer:
    """All symmetries of t modulo lattice translations."""
    cached = t.__dict__.get("_stabilizer")
    if cached is not None:
        return cached
    maps = {}
    for g in _candidate_maps(t, t):
        if g.A not in maps and _maps_onto(g, t, t):
            maps[g.A] = g
    st = Stabilizer([maps[A] for A in sorted(maps)], sorted(maps))
    t.__dict__["_stabilizer"] = st
    return st


def is_group(matrices: Sequence) -> bool:
    """Closure under products and inverses, and presence of the identity."""
    if not matrices:
        return False
    n = len(matrices[0])
    G = np.array(matrices, dtype=np.int64).reshape(len(matrices), n * n)
    # locate products through a hash, then compare entries exactly
    weights = np.random.default_rng(0).integers(1, 2**61, size=n * n, dtype=np.int64)
    keys = G @ weights
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]

    def members(M):
        k = M @ weights
        pos = np.clip(np.searchsorted(sorted_keys, k), 0, len(G) - 1)
        return np.all(G[order[pos]] == M, axis=1)

    if not members(np.eye(n, dtype=np.int64).reshape(1, -1)).all():
        return False
    G3 = G.reshape(-1, n, n)
    for g in G3:
        if not members(np.matmul(g, G3).reshape(len(G), -1)).all():
            return False
    # a finite set closed under products is closed under inverses
    return True


def verify_split(t: PartialTriangulation) -> bool:
    """Check that the symmetries of t form Z^n semidirect the point group.

    For every point-group matrix A the found symmetry x -> A x + b must have
    integral b, the pure linear map x -> A x must itself be a symmetry, and
    these linear maps must form a group.
    """
    st = stabilizer(t)
    for g in st.maps:
        if any(not isinstance(x, int) for x in g.b):
            return False
        if not _maps_onto(AffineMap(g.A, (0,) * t.dim), t, t):
            return False
    return is_group(st.point_group)
