"""Walk the collapsing octahedron through its transition.

Prints the walls at a few parameter values on both sides, then the two
rescaled limits: the Euclidean parallelepiped (gamma) and the half-pipe
octahedron (eta).
"""

import numpy as np

from transition_lab import make_family
from transition_lab.polytope import enumerate_vertices
from transition_lab.report import limit_walls

np.set_printoptions(precision=4, suppress=True)

rec = make_family("oct_collapse")

for t in (0.9, 0.5, 0.1, -0.1, -0.5):
    P = rec.polytope(t)
    V = enumerate_vertices(P)
    kinds = {}
    for v in V.vertices:
        kinds[v.kind] = kinds.get(v.kind, 0) + 1
    print(f"t = {t:+.1f}  {P.geometry:<10} vertices {kinds}")

for kind in ("gamma", "eta"):
    for side in ("pos", "neg"):
        print(f"\n{kind} limit from the {side} side")
        for w in limit_walls("oct_collapse", kind, side):
            print(f"  {w.label:<3} ({' : '.join(str(c) for c in w.display())})")
