"""Acceptance criteria, one reported line each.

The dim-5 flip closure is recomputed from the seed here (roughly 20 minutes
on one core), compared with the stored archive, and then classified.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE, DATA
from ptri import io as pio
from ptri.cli import classify_directory, main
from ptri.enumeration import (
    adjacency_classification,
    apply_flip,
    find_flips,
    flip_closure,
    local_enumerate,
    search_candidates,
    standard_simplex,
    neighbor_family_harness,
)
from ptri.exact import QuadForm, det
from ptri.predicates import (
    delaunay_test,
    freudenthal_seed,
    lifted_determinant,
    nonregularity_test,
    verify_nonregularity,
    voronoi_regulator,
)
from ptri.symmetry import isomorphic, stabilizer, verify_split
from ptri.tricore import (
    canonicalize,
    is_centrally_symmetric,
    translate,
    validate_structure,
    volume_bounds_hold,
)

EXPECTED_PAIRS = {
    ((-1, 0, 0, 0, 1, 1), 0),
    ((-1, -1, 0, 1, 1, 1), 0),
    ((-1, -1, -1, 1, 1, 2), 0),
    ((-2, -1, 1, 1, 1, 1), 1),
    ((-1, -1, -1, -1, 2, 3), 0),
}


def report(label, ok, detail):
    ACCEPTANCE.append(f"{label}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


# ---------------------------------------------------------------- 1-4


def test_c1_dim3_enumeration(tmp_path, capsys):
    t0 = time.monotonic()
    code, out = run_cli(capsys, "enumerate", "--dim", 3, "--out", tmp_path)
    dt = time.monotonic() - t0
    files = sorted(tmp_path.glob("*.ptri"))
    ts = [pio.read_triangulation(f) for f in files]
    ok = (code == 0 and len(ts) == 1 and len(ts[0]) == 6 and set(ts[0].volumes) == {1}
          and delaunay_test(ts[0]).is_delaunay and dt < 60)
    report("1 dim-3 enumeration", ok, f"{len(ts)} triangulation(s), classes {[len(t) for t in ts]}, "
           f"volumes {sorted({v for t in ts for v in t.volumes})}, Delaunay, {dt:.1f}s")


def test_c2_dim4_enumeration(tmp_path, capsys):
    t0 = time.monotonic()
    code, out = run_cli(capsys, "enumerate", "--dim", 4, "--out", tmp_path)
    dt = time.monotonic() - t0
    ts = [pio.read_triangulation(f) for f in sorted(tmp_path.glob("*.ptri"))]
    audit = dict(line.split(" ", 1) for line in (tmp_path / "audit.txt").read_text().splitlines())
    dl = [delaunay_test(t).is_delaunay for t in ts]
    odd = [t for t, d in zip(ts, dl) if not d]
    ok = (code == 0 and len(ts) == 4 and all(len(t) == 24 and set(t.volumes) == {1} for t in ts)
          and sum(dl) == 3 and len(odd) == 1 and not is_centrally_symmetric(odd[0])
          and audit["dead_ends"] == "0" and dt < 1800)
    report("2 dim-4 enumeration", ok, f"{len(ts)} triangulations of {[len(t) for t in ts]} classes, "
           f"{sum(dl)} Delaunay, non-Delaunay one centrally symmetric: "
           f"{[is_centrally_symmetric(t) for t in odd]}, dead ends {audit['dead_ends']}, "
           f"candidates raw {audit['raw_candidates']} / surviving {audit['surviving_candidates']}, {dt:.0f}s")


def test_c3_dim4_neighbor_search():
    s = standard_simplex(4)
    expected = set(itertools.permutations((1, 1, 0, 0))) | set(itertools.permutations((1, 1, 1, -1)))
    ok = True
    counts = []
    for i in range(5):
        found = search_candidates(s, i, 4)
        pats = {tuple(int(x) for k, x in enumerate(c.b) if k != i) for c in found}
        counts.append(len(found))
        ok = ok and len(found) == 10 and pats == expected
    apexes = sorted(c.apex for c in search_candidates(s, 0, 4))
    report("3 dim-4 neighbour lists", ok, f"apexes per facet {counts}; facet 0: {apexes}")


def test_c4_infinite_family():
    t0 = time.monotonic()
    rows = neighbor_family_harness(50, halt=False)
    dt = time.monotonic() - t0
    ok = all(r.compatible and r.shared_facet for r in rows) and len(rows) == 51 and dt < 300
    report("4 infinite neighbour family", ok, f"k = 0..50 all compatible: "
           f"{all(r.compatible for r in rows)}, {dt:.1f}s")


# ---------------------------------------------------------------- 5 and 6


@pytest.fixture(scope="module")
def closure_run():
    snapshots = []

    def cb(state):
        snapshots.append((len(state.archive), pio.serialize_checkpoint(state.archive, [])))

    t0 = time.monotonic()
    st = flip_closure(freudenthal_seed(5), checkpoint=cb)
    return st, snapshots, time.monotonic() - t0


@pytest.fixture(scope="module")
def classified(closure_run, tmp_path_factory):
    st, _s, _dt = closure_run
    d = tmp_path_factory.mktemp("dim5")
    pio.write_directory(d, st.archive)
    return classify_directory(d)


def test_c5a_closure_size(closure_run):
    st, snapshots, dt = closure_run
    final = "".join(pio.serialize(t) for t in st.archive)
    stored = "".join(pio.serialize(t) for t in pio.read_archive(DATA / "dim5_closure.ptri.gz"))
    sizes = [n for n, _ in snapshots]
    prefix = all(final.startswith(text[: -len("queue\n")]) for _n, text in snapshots)
    ok = st.complete and len(st.archive) == 950 and sizes == sorted(sizes) and prefix
    report("5a dim-5 closure size", ok, f"terminated={st.complete}, {len(st.archive)} classes, "
           f"{len(snapshots)} checkpoints growing monotonically as prefixes of the final archive: {prefix}, "
           f"identical to stored archive: {final == stored}, {dt / 60:.1f} min")


def test_c5b_classify_counts(classified):
    sm = classified["summary"]
    ok = sm["total"] == 950 and sm["delaunay"] == 222 and sm["centrally_symmetric_non_delaunay"] == 23
    report("5b classify counts", ok, f"{sm['total']} total, {sm['delaunay']} Delaunay, "
           f"{sm['centrally_symmetric_non_delaunay']} centrally symmetric non-Delaunay")


def test_c5c_volumes(classified):
    sm = classified["summary"]
    big = [m["file"] for m in classified["members"] if max(m["volumes"]) > 2]
    ok = set(sm["volumes"]) <= {1, 2}
    report("5c simplex volumes in {1,2}", ok, f"volumes found {sm['volumes']}; members with larger volume: {big}")


def test_c5d_point_group(classified, closure_run):
    st, _s, _dt = closure_run
    sm = classified["summary"]
    orders = [m["point_group_order"] for m in classified["members"]]
    neg = tuple(tuple(-int(i == j) for j in range(5)) for i in range(5))
    mod_pm = [o // 2 if neg in set(stabilizer(t).point_group) else o for o, t in zip(orders, st.archive)]
    at720 = [m["file"] for m in classified["members"] if m["point_group_order"] == 720]
    ok = sm["max_point_group_order"] == 720
    report("5d maximum point-group order 720", ok,
           f"maximum order {sm['max_point_group_order']} (seed, Sym(6) x {{+-I}}); "
           f"maximum modulo +-I {max(mod_pm)}; members of order exactly 720: {at720}")


def test_c5e_adjacency(closure_run):
    st, _s, _dt = closure_run
    unimodular = adjacency_classification(st.archive)
    everything = adjacency_classification(st.archive, neighbor_volume=None)
    ok = unimodular == EXPECTED_PAIRS
    report("5e adjacency pairs", ok, f"unimodular neighbours give {len(unimodular)} pairs, equal to the list: "
           f"{unimodular == EXPECTED_PAIRS}; with all neighbours also {sorted(everything - unimodular)}")


def test_c6_nonregular_member(closure_run):
    st, _s, _dt = closure_run
    # the member with a volume-3 simplex, located by content rather than position
    t = next(u for u in st.archive if max(u.volumes) == 3)
    res = None
    for r in (1, 2, 3):
        res = nonregularity_test(t, r)
        if res.nonregular:
            break
    ok = res.nonregular and verify_nonregularity(res)
    yi, _ye = res.certificate.farkas if res.nonregular else ((), ())
    report("6 non-regularity certificate", ok,
           f"member {st.archive.index(t) + 1} infeasible at radius {res.radius} "
           f"({len(res.system.simplices)} simplices, {len(res.system.vertices)} points), "
           f"{sum(1 for y in yi if y)} nonzero Farkas multipliers, re-verified exactly")


# ---------------------------------------------------------------- 7


def test_c7_refinement(tmp_path, capsys):
    form = tmp_path / "A.txt"
    form.write_text("9 1 -2\n1 11 3\n-2 3 13\n")
    out = tmp_path / "r.ptri"
    t0 = time.monotonic()
    code, _ = run_cli(capsys, "refine", "--tiling", "cube", "--dim", 3, "--form", form, "--out", out)
    dt = time.monotonic() - t0
    t = pio.read_triangulation(out) if out.exists() else None
    ok = code == 0 and t is not None and isomorphic(t, freudenthal_seed(3)) is not None and dt < 60
    report("7 refinement oracle", ok, f"cube refined by a generic form, isomorphic to the dim-3 triangulation, {dt:.1f}s")


# ---------------------------------------------------------------- 8


def test_c8_property_suites(closure_run):
    notes = []
    try:
        _property_suites(closure_run[0], notes)
    except AssertionError as e:
        report("8 property suites", False, f"passed: {'; '.join(notes)}; failed next: {e!r}")
    report("8 property suites", True, "; ".join(notes))


def _property_suites(st, notes):
    rng = random.Random(2024)

    # flip involution, 100 flips in dims 2-5
    n_flips = 0
    for n, count in {2: 20, 3: 25, 4: 30, 5: 25}.items():
        t = freudenthal_seed(n)
        for _ in range(count):
            f = rng.choice(find_flips(t))
            u = apply_flip(t, f)
            g = next(g for g in find_flips(u) if g.removed == f.inserted and g.inserted == f.removed)
            assert apply_flip(u, g).classes == t.classes
            n_flips += 1
            t = u
    notes.append(f"{n_flips} flip involutions")

    enumerated = local_enumerate(3).triangulations + local_enumerate(4).triangulations
    stored = enumerated + list(st.archive)
    assert all(t.total_volume == math.factorial(t.dim) and validate_structure(t) for t in stored)
    notes.append(f"volume sum on {len(stored)} stored triangulations")

    checked = 0
    while checked < 50:
        n = rng.choice((2, 3, 4))
        s1 = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(n + 1)]
        v2 = tuple(rng.randint(-3, 3) for _ in range(n))
        if det([[1] + list(v) for v in s1]) == 0 or v2 in s1:
            continue
        reg = voronoi_regulator(s1, v2)
        A = QuadForm.from_coords(n, [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n * (n + 1) // 2)])
        B = QuadForm.from_coords(n, [rng.randint(-5, 5) for _ in range(n * (n + 1) // 2)])
        a, b = rng.randint(-3, 3), Fraction(1, rng.randint(1, 4))
        AB = QuadForm.from_coords(n, [a * x + b * y for x, y in zip(A.coords(), B.coords())])
        assert reg(AB) == a * reg(A) + b * reg(B)
        assert reg(A) == lifted_determinant(s1, v2, A)
        checked += 1
    notes.append("regulator linearity and sphere sign on 50 instances")

    for _ in range(50):
        n = rng.choice((2, 3, 4, 5))
        c = rng.choice(freudenthal_seed(n).classes)
        v = tuple(rng.randint(-9, 9) for _ in range(n))
        assert canonicalize(translate(c, v)) == c
    notes.append("translation invariance")

    for t in enumerated + rng.sample(st.archive, 5):
        assert isomorphic(t, t) is not None
    a, b = st.archive[3], st.archive[7]
    assert (isomorphic(a, b) is None) == (isomorphic(b, a) is None)
    notes.append("isomorphism reflexive and symmetric")

    assert all(verify_split(t) for t in enumerated + list(st.archive))
    notes.append(f"split on {len(enumerated) + len(st.archive)} enumerated triangulations")

    assert all(volume_bounds_hold(t) for t in st.archive)
    notes.append("volume bounds on all archive members")
