"""Search engines: local enumeration (dims 3, 4), coherent flips, flip closure.

Neighbour candidates are described by barycentric coefficients. If S has
vertices v_0, ..., v_n and the new cell replaces v_i by w, then
w = sum_j b_j v_j with sum b_j = 1 and b_i = -vol(new) / vol(S). These
coefficients do not change under affine unimodular maps, so one table of
coefficient vectors serves every unimodular simplex in standard position.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .exact import affine_dependence, barycentric
from .tricore import (
    PartialTriangulation,
    PeriodicTriangulation,
    add,
    canonicalize,
    pairwise_compatible,
    sub,
    translate,
    validate,
    validate_structure,
    volume,
)
from .symmetry import invariant_key, isomorphic, stabilizer

log = logging.getLogger(__name__)


# ---------------------------------------------------------------- candidates


def _distinct_perms(pattern) -> list:
    return sorted(set(itertools.permutations(pattern)))


#: coefficient patterns on the n kept vertices for a volume-1 neighbour
HARDCODED_PATTERNS = {
    3: _distinct_perms((1, 1, 0)),
    4: _distinct_perms((1, 1, 0, 0)) + _distinct_perms((1, 1, 1, -1)),
}


@dataclass(frozen=True)
class NeighborCandidate:
    simplex: tuple  # positioned base simplex
    facet: int  # index of the replaced vertex
    apex: tuple
    b: tuple  # apex = sum b_j simplex[j]

    @property
    def cell(self) -> tuple:
        return tuple(sorted(v for k, v in enumerate(self.simplex) if k != self.facet) + [self.apex])

    @property
    def encoding(self) -> tuple:
        return self.b, self.facet


def _apex(simplex, b) -> tuple:
    n = len(simplex[0])
    return tuple(sum(bj * v[k] for bj, v in zip(b, simplex)) for k in range(n))


def hardcoded_candidates(simplex: Sequence, facet: int) -> list:
    simplex = tuple(tuple(v) for v in simplex)
    n = len(simplex[0])
    if n not in HARDCODED_PATTERNS:
        raise ValueError("hardcoded neighbour lists exist only in dimensions 3 and 4")
    if volume(simplex) != 1:
        raise ValueError("hardcoded neighbour lists need a unimodular simplex")
    out = []
    for pat in HARDCODED_PATTERNS[n]:
        rest = iter(pat)
        b = tuple(-1 if j == facet else next(rest) for j in range(n + 1))
        out.append(NeighborCandidate(simplex, facet, _apex(simplex, b), b))
    return out


def search_candidates(simplex: Sequence, facet: int, radius: int, volume_ratio: int | None = 1) -> list:
    """Apexes w in the box simplex[0] + [-radius, radius]^n that give admissible neighbours.

    A candidate must lie strictly beyond the facet, have the requested volume
    ratio (None allows any), and the new cell must be compatible with the
    base simplex and with itself.
    """
    simplex = tuple(tuple(v) for v in simplex)
    n = len(simplex[0])
    base = canonicalize(simplex)
    out = []
    center = simplex[0]
    for off in itertools.product(range(-radius, radius + 1), repeat=n):
        w = add(center, off)
        if w in simplex:
            continue
        b = barycentric(simplex, w)
        if b[facet] >= 0:
            continue
        if volume_ratio is not None and b[facet] != -volume_ratio:
            continue
        cand = NeighborCandidate(simplex, facet, w, tuple(b))
        cell = canonicalize(cand.cell)
        if not pairwise_compatible(base, cell)[0] or not pairwise_compatible(cell, cell)[0]:
            continue
        out.append(cand)
    return out


def neighbor_candidates(simplex: Sequence, facet: int, mode: str = "hardcoded", radius: int = 4) -> list:
    if mode == "hardcoded":
        return hardcoded_candidates(simplex, facet)
    if mode == "search":
        return search_candidates(simplex, facet, radius)
    raise ValueError(f"unknown mode {mode!r}")


def standard_simplex(n: int) -> tuple:
    return tuple([tuple([0] * n)] + [tuple(int(i == j) for j in range(n)) for i in range(n)])


# ---------------------------------------------------------------- local search


@dataclass
class EnumerationResult:
    dim: int
    triangulations: list
    dead_ends: int
    states_per_level: list
    raw_candidates: int  # candidates generated over all expansions
    surviving_candidates: int  # those passing compatibility
    expansions: int

    @property
    def audit_ok(self) -> bool:
        return self.dead_ends == 0


class IsoArchive:
    """Objects bucketed by invariant key; membership decided by isomorphism."""

    def __init__(self):
        self.items: list = []
        self.buckets: dict = {}

    def find(self, t) -> int | None:
        for idx in self.buckets.get(invariant_key(t), ()):
            if isomorphic(t, self.items[idx]) is not None:
                return idx
        return None

    def add(self, t) -> tuple[int, bool]:
        idx = self.find(t)
        if idx is not None:
            return idx, False
        self.items.append(t)
        self.buckets.setdefault(invariant_key(t), []).append(len(self.items) - 1)
        return len(self.items) - 1, True

    def __len__(self) -> int:
        return len(self.items)


def _extensions(state: PartialTriangulation, mode: str, radius: int):
    """(raw candidate count, admissible extended states) for the first frontier facet."""
    key = state.frontier[0]
    ci, i, t = state.facets[key][0]
    s = translate(state.classes[ci], tuple(-x for x in t))
    cands = neighbor_candidates(s, i, mode, radius)
    out = []
    limit = math.factorial(state.dim)
    for cand in cands:
        cell = canonicalize(cand.cell)
        if cell in state.class_set:
            continue
        if state.total_volume + volume(cell) > limit:
            continue
        if not pairwise_compatible(cell, cell)[0]:
            continue
        if not all(pairwise_compatible(cell, c)[0] for c in state.classes):
            continue
        new = state.with_classes(state.classes + (cell,))
        if any(len(inc) > 2 for inc in new.facets.values()):
            continue
        out.append(new)
    return len(cands), out


def local_enumerate(n: int, mode: str = "hardcoded", radius: int = 4,
                    progress: Callable | None = None) -> EnumerationResult:
    """All periodic triangulations of Z^n (n = 3, 4) by breadth-first extension.

    Starts from the standard simplex and always fills the canonically first
    frontier facet, keeping one state per isomorphism class at each level.
    """
    if n not in (3, 4):
        raise ValueError("local enumeration is implemented for n = 3 and 4")
    start = PartialTriangulation(n, (standard_simplex(n),))
    level = [start]
    complete = IsoArchive()
    dead = raw = surviving = expansions = 0
    sizes = []
    while level:
        sizes.append(len(level))
        if progress:
            progress(len(sizes), len(level))
        nxt = IsoArchive()
        for state in level:
            if state.is_complete:
                complete.add(PeriodicTriangulation(n, state.classes))
                continue
            expansions += 1
            r, exts = _extensions(state, mode, radius)
            raw += r
            surviving += len(exts)
            if not exts:
                dead += 1
            for new in exts:
                nxt.add(new)
        level = nxt.items
    tris = complete.items
    for t in tris:
        rep = validate(t)
        if not rep:
            raise AssertionError(f"enumerated triangulation failed validation: {rep.reason}")
    tris.sort(key=lambda t: t.classes)
    return EnumerationResult(n, tris, dead, sizes, raw, surviving, expansions)


# ---------------------------------------------------------------- flips


@dataclass(frozen=True)
class Circuit:
    points: tuple
    coeffs: tuple

    @property
    def plus(self) -> tuple:
        return tuple(p for p, a in zip(self.points, self.coeffs) if a > 0)

    @property
    def minus(self) -> tuple:
        return tuple(p for p, a in zip(self.points, self.coeffs) if a < 0)

    @property
    def zero(self) -> tuple:
        return tuple(p for p, a in zip(self.points, self.coeffs) if a == 0)


@dataclass(frozen=True)
class FlipSpec:
    circuit: Circuit
    current: tuple  # support points on the side the triangulation currently uses
    other: tuple
    links: tuple  # sorted tuples of link vertex sets
    removed: tuple  # canonical classes
    inserted: tuple

    @property
    def key(self) -> tuple:
        # distinct circuits can remove the same cells and insert different ones
        return self.removed, self.inserted


@dataclass
class FlipReport:
    flips: list
    overlapping: int = 0  # circuits whose cells meet their own translates
    unfactored: int = 0  # circuits whose links differ
    vertex_removing: int = 0  # other side is a single point


class StarIndex:
    """Locate positioned cells containing a given vertex set via edge vectors."""

    def __init__(self, t: PartialTriangulation):
        self.t = t
        idx = {}
        for ci, c in enumerate(t.classes):
            for j, u in enumerate(c):
                for k, w in enumerate(c):
                    if j != k:
                        idx.setdefault(sub(w, u), []).append((ci, j))
        self.index = idx

    def star(self, verts: Sequence) -> list:
        verts = list(verts)
        v0, v1 = verts[0], verts[1]
        vs = set(verts)
        out = set()
        for ci, j in self.index.get(sub(v1, v0), ()):
            c = self.t.classes[ci]
            cell = translate(c, sub(v0, c[j]))
            if vs.issubset(cell):
                out.add(cell)
        return sorted(out)


def _positioned(s) -> tuple:
    return tuple(sorted(s))


def find_flips(t: PartialTriangulation, report: bool = False):
    """All coherent flips of t, one per set of removed classes, in canonical order."""
    star = StarIndex(t)
    found = {}
    rep = FlipReport([])
    seen_circuits = set()
    for key, inc in sorted(t.facets.items()):
        if len(inc) != 2:
            continue
        (c1, i1, t1), (c2, i2, t2) = inc
        p = sub(t.classes[c1][i1], t1)
        q = sub(t.classes[c2][i2], t2)
        pts = tuple(key) + (p, q)
        dep = affine_dependence(pts)
        sgn = 1 if dep.coeffs[-2] > 0 else -1
        cur = tuple(sorted(x for x, a in zip(pts, dep.coeffs) if a * sgn > 0))
        oth = tuple(sorted(x for x, a in zip(pts, dep.coeffs) if a * sgn < 0))
        support = frozenset(cur + oth)
        # the same circuit is met from several facets; translate to a normal position
        m = min(support)
        ckey = frozenset(sub(x, m) for x in support)
        if ckey in seen_circuits:
            continue
        seen_circuits.add(ckey)
        if len(oth) < 2:
            rep.vertex_removing += 1
            continue
        links = None
        ok = True
        for z in cur:
            rest = [x for x in cur + oth if x != z]
            lk = frozenset(frozenset(cell) - frozenset(rest) for cell in star.star(rest))
            if links is None:
                links = lk
            elif lk != links:
                ok = False
                break
        if not ok or not links:
            rep.unfactored += 1
            continue
        link_list = sorted(tuple(sorted(L)) for L in links)
        removed = [canonicalize(_positioned([x for x in cur + oth if x != z] + list(L)))
                   for z in cur for L in link_list]
        inserted = [canonicalize(_positioned([x for x in cur + oth if x != z] + list(L)))
                    for z in oth for L in link_list]
        if len(set(removed)) != len(removed) or len(set(inserted)) != len(inserted):
            rep.overlapping += 1
            continue
        rem = frozenset(removed)
        if not rem.issubset(t.class_set) or (set(inserted) & (t.class_set - rem)):
            rep.overlapping += 1
            continue
        spec = FlipSpec(
            Circuit(pts, dep.coeffs), cur, oth, tuple(link_list),
            tuple(sorted(removed)), tuple(sorted(inserted)),
        )
        found.setdefault(spec.key, spec)
    rep.flips = [found[k] for k in sorted(found)]
    return rep if report else rep.flips


class FlipError(RuntimeError):
    pass


def apply_flip(t: PartialTriangulation, spec: FlipSpec, full_validation: bool = False) -> PeriodicTriangulation:
    rem = set(spec.removed)
    if not rem.issubset(t.class_set):
        raise FlipError("flip removes classes that are not present")
    classes = [c for c in t.classes if c not in rem] + list(spec.inserted)
    new = PeriodicTriangulation(t.dim, tuple(classes))
    if sum(volume(c) for c in spec.removed) != sum(volume(c) for c in spec.inserted):
        raise FlipError("flip changes the total volume")
    rep = validate(new) if full_validation else validate_structure(new)
    if not rep:
        raise FlipError(f"flip produced an invalid triangulation: {rep.reason}")
    return new


def _cell_codes(cells: np.ndarray) -> np.ndarray:
    """Encode translation classes of cells (..., n+1, n) as sorted integer rows.

    Vertices become mixed-radix integers whose order is the lexicographic
    order of the points; subtracting the smallest code translates the cell
    to its canonical position.
    """
    n = cells.shape[-1]
    if np.abs(cells).max(initial=0) >= _RADIX // 4:
        raise OverflowError("coordinates too large for the cell encoding")
    w = _RADIX ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = cells @ w
    codes.sort(axis=-1)
    return codes - codes[..., :1]


_RADIX = 1 << 11


def _flip_orbit_representatives(t: PeriodicTriangulation, flips: list) -> list:
    """One flip per orbit of the point group (symmetric flips give isomorphic results)."""
    st = stabilizer(t)
    if st.order == 1 or not flips:
        return flips
    G = np.array(st.point_group, dtype=np.int64)

    def key_of(codes) -> tuple:
        return tuple(sorted(map(tuple, codes.tolist())))

    seen = set()
    reps = []
    for f in flips:
        fk = (key_of(_cell_codes(np.array(f.removed, dtype=np.int64))),
              key_of(_cell_codes(np.array(f.inserted, dtype=np.int64))))
        if fk in seen:
            continue
        reps.append(f)
        rem = _cell_codes(np.einsum("gij,cvj->gcvi", G, np.array(f.removed, dtype=np.int64)))
        ins = _cell_codes(np.einsum("gij,cvj->gcvi", G, np.array(f.inserted, dtype=np.int64)))
        for a, b in zip(rem, ins):
            seen.add((key_of(a), key_of(b)))
    return reps


# ---------------------------------------------------------------- closure


@dataclass
class ClosureState:
    dim: int
    archive: list
    queue: deque
    complete: bool = False

    @property
    def expanded(self) -> int:
        return len(self.archive) - len(self.queue)


def closure_start(seed: PeriodicTriangulation) -> ClosureState:
    rep = validate_structure(seed)
    if not rep:
        raise ValueError(f"seed is not a valid triangulation: {rep.reason}")
    return ClosureState(seed.dim, [PeriodicTriangulation(seed.dim, seed.classes)], deque([0]))


def flip_closure(
    seed: PeriodicTriangulation | ClosureState,
    max_nodes: int | None = None,
    checkpoint: Callable[[ClosureState], None] | None = None,
    checkpoint_every: int = 25,
    symmetry_reduction: bool = True,
) -> ClosureState:
    """Breadth-first closure of a triangulation under coherent flips, up to isomorphism.

    Args:
        seed: starting triangulation, or a state to resume.
        max_nodes: expand at most this many triangulations in this call.
        checkpoint: called with the state every ``checkpoint_every`` expansions
            and when the call returns.
        symmetry_reduction: only flip one representative per point-group orbit.

    Returns:
        The state; ``complete`` is True when the queue ran empty, False when
        the node budget stopped the run.
    """
    state = seed if isinstance(seed, ClosureState) else closure_start(seed)
    archive = IsoArchive()
    for t in state.archive:
        archive.items.append(t)
        archive.buckets.setdefault(invariant_key(t), []).append(len(archive.items) - 1)
    done = 0
    while state.queue:
        if max_nodes is not None and done >= max_nodes:
            break
        idx = state.queue[0]
        t = state.archive[idx]
        flips = find_flips(t)
        if symmetry_reduction:
            flips = _flip_orbit_representatives(t, flips)
        for spec in flips:
            new = apply_flip(t, spec)
            j, fresh = archive.add(new)
            if fresh:
                state.archive.append(new)
                state.queue.append(j)
        state.queue.popleft()
        done += 1
        log.info("expanded %d: archive %d, queue %d", idx, len(state.archive), len(state.queue))
        if checkpoint and done % checkpoint_every == 0:
            checkpoint(state)
    state.complete = not state.queue
    if checkpoint:
        checkpoint(state)
    return state


# ---------------------------------------------------------------- adjacency data


def canonical_pair(b: Sequence, i: int) -> tuple:
    """Normal form of an encoded pair under vertex permutations."""
    sb = tuple(sorted(b))
    return sb, sb.index(b[i])


def adjacency_pairs(t: PeriodicTriangulation, neighbor_volume: int | None = 1) -> set:
    """Encoded neighbours (b, i) of all volume-1 classes, up to vertex permutation.

    Args:
        neighbor_volume: keep only neighbours of this volume, i.e. b_i equal
            to minus it. The default lists unimodular pairs; None keeps all.
    """
    out = set()
    for ci, c in enumerate(t.classes):
        if volume(c) != 1:
            continue
        for i in range(t.dim + 1):
            nb = t.neighbor(ci, i)
            if nb is None:
                continue
            _cj, j, cell = nb
            b = barycentric(c, cell[j])
            if any(x.denominator != 1 for x in b):
                raise AssertionError("unimodular simplex with non-integral coordinates")
            if neighbor_volume is not None and b[i] != -neighbor_volume:
                continue
            out.add(canonical_pair(tuple(int(x) for x in b), i))
    return out


def adjacency_classification(closure: Iterable, neighbor_volume: int | None = 1) -> set:
    out = set()
    for t in closure:
        out |= adjacency_pairs(t, neighbor_volume)
    return out


# ---------------------------------------------------------------- infinite family


def neighbor_family_pair(k: int, apex: Callable[[int], tuple] | None = None):
    """The fixed simplex S and its k-th neighbour across the facet x_1 = 0."""
    O = (0, 0, 0, 0, 0)
    A, B, C, D = (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)
    X = (-1, 0, 0, 0, 0)
    Xk = apex(k) if apex else (1, 1, 1, 1, k + 1)
    return (O, A, B, C, D, X), (O, A, B, C, D, Xk)


@dataclass
class FamilyRow:
    k: int
    compatible: bool
    shared_facet: bool
    volumes: tuple
    witness: tuple | None


def neighbor_family_harness(k_max: int, apex: Callable[[int], tuple] | None = None, halt: bool = True) -> list:
    """Check the infinite neighbour family for k = 0..k_max.

    With the default apex every k must be compatible; a failure raises with
    the witness unless ``halt`` is False (used for negative controls).
    """
    rows = []
    for k in range(k_max + 1):
        S, T = neighbor_family_pair(k, apex)
        ok, v = pairwise_compatible(S, T)
        shared = set(S) & set(T)
        # the common vertices span the facet x_1 = 0 and the apexes lie on opposite sides
        facet_ok = len(shared) == 5 and all(x[0] == 0 for x in shared) and S[-1][0] * T[-1][0] < 0
        row = FamilyRow(k, ok, facet_ok, (volume(S), volume(T)), v)
        rows.append(row)
        if halt and not (ok and facet_ok):
            raise AssertionError(f"k={k}: compatibility fails with translation {v}")
    return rows
