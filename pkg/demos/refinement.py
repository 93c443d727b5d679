"""Refining tilings with a quadratic form, and lifting a triangulation to higher dimension.

Run: python3 demos/refinement.py
"""

from ptri.exact import QuadForm
from ptri.predicates import cube_tiling, delaunay_test, freudenthal_seed, prism_extend, refine
from ptri.symmetry import isomorphic
from ptri.tricore import validate

A = QuadForm(((9, 1, -2), (1, 11, 3), (-2, 3, 13)))
res = refine(cube_tiling(3), A)
print("cube refined by a generic form: generic", res.generic, "classes", len(res.cells))
print("isomorphic to the unique dim-3 triangulation:", isomorphic(res.triangulation, freudenthal_seed(3)) is not None)

# the identity form puts all eight cube vertices on one sphere
print("identity form generic:", refine(cube_tiling(3), QuadForm.identity(3)).generic)

B = QuadForm(((10, 3, 1), (3, 12, 2), (1, 2, 14)))
ext = prism_extend(freudenthal_seed(2), 3, B)
print("prism extension 2 -> 3:", len(ext.triangulation), "classes, valid", bool(validate(ext.triangulation)),
      "Delaunay", delaunay_test(ext.triangulation).is_delaunay)
