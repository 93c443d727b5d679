"""Browse the stored dimension-5 flip closure.

The archive ships with the package (regenerate it with ``ptri closure``).
Run: python3 demos/dim5_archive.py
"""

from collections import Counter
from importlib.resources import files

from ptri.enumeration import adjacency_classification
from ptri.io import read_archive
from ptri.symmetry import stabilizer
from ptri.tricore import is_centrally_symmetric

archive = read_archive(files("ptri") / "data" / "dim5_closure.ptri.gz")
print(len(archive), "triangulations")
print("class counts:", sorted(Counter(len(t) for t in archive).items()))
print("volume sets:", Counter(tuple(sorted(set(t.volumes))) for t in archive))
print("centrally symmetric:", sum(is_centrally_symmetric(t) for t in archive))

odd = next(k for k, t in enumerate(archive) if max(t.volumes) == 3)
print(f"member {odd + 1} has a simplex of volume 3 and point group of order {stabilizer(archive[odd]).order}")

print("unimodular adjacency pairs:")
for pair in sorted(adjacency_classification(archive)):
    print("  ", pair)
