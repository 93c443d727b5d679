"""A simplex in dimension 5 with infinitely many possible neighbours.

Each apex (1, 1, 1, 1, k+1) gives a unimodular neighbour of the fixed simplex
across the facet x_1 = 0, and every such pair is compatible. Moving one
coordinate of the apex breaks it for odd k.

Run: python3 demos/infinite_family.py
"""

from ptri.enumeration import neighbor_family_harness

rows = neighbor_family_harness(12)
print("k :", " ".join(str(r.k) for r in rows))
print("ok:", " ".join("y" if r.compatible else "n" for r in rows))

control = neighbor_family_harness(4, apex=lambda k: (1, 1, 1, 2, k + 1), halt=False)
for r in control:
    print(f"control k={r.k}: compatible {r.compatible}, overlap at translation {r.witness}")
