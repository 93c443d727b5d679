"""Command-line interface: ``ptri <command> ...``.

Exit codes: 0 success, 1 usage or I/O error, 2 negative answer (not
Delaunay, certified non-regular, not isomorphic, invalid).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import io as pio
from .enumeration import (
    ClosureState,
    closure_start,
    flip_closure,
    local_enumerate,
    neighbor_family_harness,
)
from .exact import QuadForm
from .predicates import (
    cube_tiling,
    delaunay_test,
    freudenthal_seed,
    nonregularity_test,
    prism_extend,
    refine,
    verify_nonregularity,
)
from .symmetry import isomorphic
from .tricore import stats, validate

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE = 0, 1, 2

log = logging.getLogger("ptri")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonnegative(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {s}")
    return v


def read_form(path) -> QuadForm:
    """A symmetric matrix: one row per line, integer or rational entries."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([Fraction(x) for x in line.split()])
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise UsageError(f"{path}: form must be a square matrix")
    if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
        raise UsageError(f"{path}: form must be symmetric")
    return QuadForm(rows)


def _format_form(A: QuadForm) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in A.matrix)


def _format_map(g) -> str:
    lines = [" ".join(str(x) for x in row) + " | " + str(c) for row, c in zip(g.A, g.b)]
    return "\n".join(lines)


# ---------------------------------------------------------------- commands


def cmd_enumerate(args) -> int:
    t0 = time.monotonic()
    res = local_enumerate(args.dim, mode=args.mode, radius=args.radius)
    out = Path(args.out)
    pio.write_directory(out, res.triangulations)
    n_del = sum(1 for t in res.triangulations if delaunay_test(t).is_delaunay)
    audit = [
        f"dimension {res.dim}",
        f"mode {args.mode}",
        f"triangulations {len(res.triangulations)}",
        f"delaunay {n_del}",
        f"dead_ends {res.dead_ends}",
        f"expansions {res.expansions}",
        f"raw_candidates {res.raw_candidates}",
        f"surviving_candidates {res.surviving_candidates}",
        "states_per_level " + " ".join(map(str, res.states_per_level)),
        f"seconds {time.monotonic() - t0:.1f}",
    ]
    pio.atomic_write(out / "audit.txt", "\n".join(audit) + "\n")
    print(f"{len(res.triangulations)} triangulations written to {out}")
    print(f"{n_del} Delaunay, {len(res.triangulations) - n_del} non-Delaunay")
    print(f"dead-end partial states: {res.dead_ends}")
    return EXIT_OK


def cmd_seed(args) -> int:
    pio.write_triangulation(args.out, freudenthal_seed(args.dim))
    return EXIT_OK


def cmd_closure(args) -> int:
    ckpt = Path(args.checkpoint)
    if ckpt.exists():
        archive, queue = pio.read_checkpoint(ckpt)
        if not archive:
            raise UsageError(f"{ckpt}: empty checkpoint")
        state = ClosureState(archive[0].dim, archive, queue, complete=not queue)
        log.info("resuming: archive %d, queue %d", len(archive), len(queue))
    else:
        state = closure_start(pio.read_triangulation(args.seed))

    def save(st):
        pio.write_checkpoint(ckpt, st.archive, st.queue)

    state = flip_closure(state, max_nodes=args.max_nodes, checkpoint=save,
                         checkpoint_every=args.checkpoint_every)
    pio.write_directory(args.out, state.archive)
    status = "complete" if state.complete else "incomplete (node budget reached)"
    print(f"closure {status}: {len(state.archive)} classes, {len(state.queue)} queued")
    return EXIT_OK


def cmd_check(args) -> int:
    t = pio.read_triangulation(args.file)
    if args.what == "valid":
        rep = validate(t)
        if rep:
            print("valid")
            return EXIT_OK
        print(f"invalid: {rep.reason}")
        if rep.witness is not None:
            print(f"witness: {rep.witness}")
        return EXIT_NEGATIVE
    if args.what == "delaunay":
        res = delaunay_test(t)
        if res.is_delaunay:
            print("Delaunay; witness form:")
            print(_format_form(res.form))
            print(f"slack {res.slack}")
            return EXIT_OK
        print("not Delaunay")
        print(f"best slack {res.slack}, positive definite: {res.positive_definite}")
        if res.certificate is not None and res.certificate.farkas is not None:
            yi, _ye = res.certificate.farkas
            print("certificate (regulator multipliers): " + " ".join(str(y) for y in yi))
        return EXIT_NEGATIVE
    # regular
    if args.radius is None:
        raise UsageError("check regular needs --radius")
    res = nonregularity_test(t, args.radius)
    sysm = res.system
    print(f"radius {res.radius}: {len(sysm.simplices)} simplices, {len(sysm.vertices)} points, "
          f"{len(sysm.constraints)} constraints")
    if res.regular_possible_at_r:
        print("feasible: no obstruction at this radius")
        return EXIT_OK
    ok = verify_nonregularity(res)
    yi, _ye = res.certificate.farkas
    print(f"infeasible: certified non-regular ({sum(1 for y in yi if y)} nonzero multipliers, "
          f"re-verified: {ok})")
    if not ok:
        raise RuntimeError("Farkas certificate failed independent verification")
    return EXIT_NEGATIVE


def cmd_iso(args) -> int:
    t1, t2 = pio.read_triangulation(args.file1), pio.read_triangulation(args.file2)
    g = isomorphic(t1, t2)
    if g is None:
        print("not isomorphic")
        return EXIT_NEGATIVE
    print("isomorphic; map x -> A x + b (rows 'A | b'):")
    print(_format_map(g))
    return EXIT_OK


def _stats_line(name, s) -> str:
    vols = sorted(set(s["volumes"]))
    return (f"{name}: dim {s['dim']}, {s['classes']} classes, volumes {vols}, "
            f"{s['facet_classes']} facet classes, point group {s['point_group_order']}, "
            f"centrally symmetric {s['centrally_symmetric']}, Delaunay {s['delaunay']}")


def cmd_stats(args) -> int:
    t = pio.read_triangulation(args.file)
    s = stats(t)
    if args.json:
        print(json.dumps(s, sort_keys=True))
    else:
        print(_stats_line(args.file, s))
    return EXIT_OK


def classify_directory(directory) -> dict:
    rows = []
    for path, t in pio.read_directory(directory):
        s = stats(t)
        s["file"] = path.name
        rows.append(s)
    volumes = sorted({v for s in rows for v in s["volumes"]})
    summary = {
        "total": len(rows),
        "delaunay": sum(s["delaunay"] for s in rows),
        "centrally_symmetric": sum(s["centrally_symmetric"] for s in rows),
        "centrally_symmetric_non_delaunay": sum(s["centrally_symmetric"] and not s["delaunay"] for s in rows),
        "volumes": volumes,
        "max_point_group_order": max((s["point_group_order"] for s in rows), default=0),
    }
    return {"summary": summary, "members": rows}


def cmd_classify(args) -> int:
    res = classify_directory(args.dir)
    if not res["members"]:
        raise UsageError(f"{args.dir}: no .ptri files")
    if args.json:
        print(json.dumps(res, sort_keys=True))
        return EXIT_OK
    print("file\tclasses\tvolumes\tpoint_group\tcs\tdelaunay")
    for s in res["members"]:
        print(f"{s['file']}\t{s['classes']}\t{','.join(map(str, sorted(set(s['volumes']))))}\t"
              f"{s['point_group_order']}\t{int(s['centrally_symmetric'])}\t{int(s['delaunay'])}")
    sm = res["summary"]
    print(f"{sm['total']} total, {sm['delaunay']} Delaunay, "
          f"{sm['centrally_symmetric_non_delaunay']} centrally symmetric non-Delaunay")
    print(f"volumes {sm['volumes']}, maximum point-group order {sm['max_point_group_order']}")
    return EXIT_OK


def cmd_family(args) -> int:
    rows = neighbor_family_harness(args.kmax, halt=False)
    bad = [r for r in rows if not (r.compatible and r.shared_facet)]
    for r in rows:
        print(f"k={r.k}: compatible {r.compatible}, shared facet {r.shared_facet}, volumes {r.volumes}")
    if bad:
        print(f"{len(bad)} failures, first at k={bad[0].k} (translation {bad[0].witness})")
        return EXIT_NEGATIVE
    print(f"all {len(rows)} pairs compatible")
    return EXIT_OK


def _write_refined(res, out) -> int:
    if not res.generic:
        print("form is not generic for this tiling: some lower faces are not simplices", file=sys.stderr)
        return EXIT_NEGATIVE
    pio.write_triangulation(out, res.triangulation)
    print(f"{len(res.triangulation)} classes written to {out}")
    return EXIT_OK


def cmd_refine(args) -> int:
    A = read_form(args.form)
    if A.n != args.dim:
        raise UsageError("form size does not match --dim")
    return _write_refined(refine(cube_tiling(args.dim), A), args.out)


def cmd_extend(args) -> int:
    t = pio.read_triangulation(args.seed)
    A = read_form(args.form)
    if A.n != args.dim:
        raise UsageError("form size does not match --dim")
    return _write_refined(prism_extend(t, args.dim, A), args.out)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ptri", description="Periodic lattice triangulations.")
    p.add_argument("-v", "--verbose", action="store_true", help="progress logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", help="local enumeration of all triangulations")
    e.add_argument("--dim", type=int, choices=(3, 4), required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--mode", choices=("hardcoded", "search"), default="hardcoded")
    e.add_argument("--radius", type=_positive, default=4, help="search-mode box radius")
    e.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("seed", help="write a seed triangulation")
    s.add_argument("--freudenthal", action="store_true", required=True)
    s.add_argument("--dim", type=_positive, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_seed)

    c = sub.add_parser("closure", help="flip closure up to isomorphism (resumable)")
    c.add_argument("--seed", required=True)
    c.add_argument("--checkpoint", required=True)
    c.add_argument("--max-nodes", type=_positive)
    c.add_argument("--checkpoint-every", type=_positive, default=25)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_closure)

    k = sub.add_parser("check", help="validity, Delaunay and regularity checks")
    k.add_argument("what", choices=("delaunay", "regular", "valid"))
    k.add_argument("file")
    k.add_argument("--radius", type=_positive)
    k.set_defaults(func=cmd_check)

    i = sub.add_parser("iso", help="affine unimodular equivalence")
    i.add_argument("file1")
    i.add_argument("file2")
    i.set_defaults(func=cmd_iso)

    st = sub.add_parser("stats", help="summary of one triangulation")
    st.add_argument("file")
    st.add_argument("--json", action="store_true")
    st.set_defaults(func=cmd_stats)

    cl = sub.add_parser("classify", help="summary table over a directory of triangulations")
    cl.add_argument("dir")
    cl.add_argument("--json", action="store_true")
    cl.set_defaults(func=cmd_classify)

    th = sub.add_parser("thm61", help="compatibility of the infinite dim-5 neighbour family")
    th.add_argument("--kmax", type=_nonnegative, required=True)
    th.set_defaults(func=cmd_family)

    r = sub.add_parser("refine", help="triangulate a periodic tiling with a quadratic form")
    r.add_argument("--tiling", choices=("cube",), required=True)
    r.add_argument("--dim", type=_positive, required=True)
    r.add_argument("--form", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_refine)

    x = sub.add_parser("extend", help="prism extension of a triangulation to a higher dimension")
    x.add_argument("--seed", required=True)
    x.add_argument("--dim", type=_positive, required=True)
    x.add_argument("--form", required=True)
    x.add_argument("--out", required=True)
    x.set_defaults(func=cmd_extend)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, pio.ParseError, OSError, ValueError) as e:
        print(f"ptri: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
