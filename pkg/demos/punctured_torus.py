"""Cone angle at the puncture of the glued quadrilateral torus.

The angle sum is printed along with the rotation angle of the commutator
holonomy.  A rotation angle is only defined up to sign modulo 2 pi, so it is
reported in [0, pi] and compared with the cone angle on that circle.
"""

import math

from transition_lab.holonomy import cone_angle, detect_singularity, edge_cycle, holonomy

cycle, scheme = edge_cycle("quadrilateral_puncture")

print("     t   cone angle   commutator rotation   mismatch")
for t in (0.25, 0.5, 1.0, 2.0, 4.0):
    theta = cone_angle(cycle, scheme, t)
    sing = detect_singularity(holonomy("[a,b]", scheme, t), "hyp")
    gap = min(abs(sing.angle - theta), abs(sing.angle - (2 * math.pi - theta)))
    print(f"{t:6.2f}   {theta:10.4f}   {sing.angle:19.4f}   {gap:.1e}")

for t in (-0.3, -0.6):
    theta = cone_angle(cycle, scheme, t)
    print(f"{t:6.2f}   {theta:10.4f}   (spherical side, exceeds 2 pi = {2 * math.pi:.4f})")

H = holonomy("[a,b]", "torus_from_quad_prime", limit="eta", side="pos")
s = detect_singularity(H, "hp")
print(f"\nhalf-pipe limit of the quad' torus: {s.kind}, magnitude {s.magnitude:.4f}")
