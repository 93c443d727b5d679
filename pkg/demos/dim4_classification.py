"""The four periodic triangulations of Z^4 and how they differ.

Run: python3 demos/dim4_classification.py   (about half a minute)
"""

from ptri.enumeration import find_flips, flip_closure, local_enumerate
from ptri.predicates import delaunay_test, freudenthal_seed
from ptri.symmetry import isomorphic, stabilizer
from ptri.tricore import is_centrally_symmetric

res = local_enumerate(4)
ts = res.triangulations
print(f"{len(ts)} triangulations, {res.dead_ends} dead-end partial states")
for k, t in enumerate(ts):
    print(f"  #{k}: {len(t)} classes, point group {stabilizer(t).order}, "
          f"centrally symmetric {is_centrally_symmetric(t)}, Delaunay {delaunay_test(t).is_delaunay}, "
          f"{len(find_flips(t))} flips")

# flips from the seed reach the same four
closure = flip_closure(freudenthal_seed(4))
match = [next(k for k, t in enumerate(ts) if isomorphic(u, t)) for u in closure.archive]
print("flip closure from the seed visits enumeration members", match)
