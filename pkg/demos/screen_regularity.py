"""Floating-point pre-screen for non-regular members of the dim-5 archive.

This only ranks candidates: scipy's HiGHS solves the regularity system in
floating point, and every hit must then be certified with the exact
``nonregularity_test`` (or ``ptri check regular FILE --radius R``).
scipy is needed for this script only; the package does not depend on it.

Run: python3 demos/screen_regularity.py [radius]
"""

import sys
from importlib.resources import files

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import lil_matrix

from ptri.io import read_archive
from ptri.predicates import delaunay_test, regularity_system


def float_feasible(t, r: int) -> bool:
    s = regularity_system(t, r)
    idx = {v: k for k, v in enumerate(s.vertices)}
    A = lil_matrix((len(s.constraints), len(idx)))
    for i, (coef, _rhs) in enumerate(s.constraints):
        for v, a in coef.items():
            A[i, idx[v]] = -float(a)
    bounds = [(None, None)] * len(idx)
    for v in s.gauge:
        bounds[idx[v]] = (0, 0)
    res = linprog(np.zeros(len(idx)), A_ub=A.tocsr(), b_ub=-np.ones(len(s.constraints)),
                  bounds=bounds, method="highs")
    return res.status != 2


if __name__ == "__main__":
    r = int(sys.argv[1]) if len(sys.argv) > 1 else 1
    archive = read_archive(files("ptri") / "data" / "dim5_closure.ptri.gz")
    for k, t in enumerate(archive):
        if delaunay_test(t).is_delaunay:
            continue
        if not float_feasible(t, r):
            print(f"member {k + 1}: regularity system looks infeasible at radius {r}", flush=True)
