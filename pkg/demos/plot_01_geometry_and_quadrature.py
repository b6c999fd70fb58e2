"""
Distances, balls and quadrature on the model spaces
===================================================

Points on the unit sphere are unit vectors, points of the hyperbolic plane
live on the upper sheet of the hyperboloid, and the flat plane is plain
coordinates. Everything below is written once and works on all three.
"""

import numpy as np

from isospec import Manifold, ball_rule, ball_volume, distance, geodesic_point, radius_for_measure
from isospec.geometry import tangent_frame

###############################################################################
# Walk one unit along a geodesic from the origin of each space and measure
# the distance back.

for m in (Manifold.sphere(2), Manifold.hyperbolic(2), Manifold.euclidean(2)):
    o = m.origin()
    direction = tangent_frame(m, o)[0]
    x = geodesic_point(m, o, direction, 1.0)
    print(f"{m}: point {np.round(x, 6)}  distance back {distance(m, o, x):.15f}")

###############################################################################
# Geodesic balls of the same radius have very different areas: caps are
# smaller than flat disks, hyperbolic disks are larger.

for m in (Manifold.sphere(2), Manifold.euclidean(2), Manifold.hyperbolic(2)):
    print(f"{m}: area of the ball of radius 1 = {ball_volume(m, 1.0):.12f}")

# and the inverse map: which radius encloses area 2?
print("radius for area 2 on S2:", radius_for_measure(Manifold.sphere(2), 2.0))

###############################################################################
# A product rule on a cap integrates smooth functions of the distance to
# spectral accuracy. For cos(d) over a cap of radius r the exact value is
# pi sin(r)^2.

S2 = Manifold.sphere(2)
for r in (0.3, 1.0, 2.5):
    q = ball_rule(S2, S2.origin(), r, radial_nodes=32, angular_nodes=64)
    approx = q.integrate(np.cos(distance(S2, S2.origin(), q.nodes)))
    print(f"r={r}: rule {approx:.15f}  exact {np.pi * np.sin(r) ** 2:.15f}")
