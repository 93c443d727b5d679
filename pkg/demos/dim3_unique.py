"""Walk through the dimension-3 local enumeration.

Run: python3 demos/dim3_unique.py
"""

from ptri.enumeration import local_enumerate
from ptri.io import serialize
from ptri.predicates import delaunay_test, freudenthal_seed
from ptri.symmetry import isomorphic, stabilizer

res = local_enumerate(3)
print(f"states per level: {res.states_per_level}")
print(f"candidates tried {res.raw_candidates}, kept {res.surviving_candidates}, dead ends {res.dead_ends}")

(t,) = res.triangulations
print(serialize(t))

d = delaunay_test(t)
print("Delaunay:", d.is_delaunay)
print("witness form:", [[str(x) for x in row] for row in d.form.matrix])
print("same as the cube subdivision by a monotone path:", isomorphic(t, freudenthal_seed(3)) is not None)
print("point group order:", stabilizer(t).order)
