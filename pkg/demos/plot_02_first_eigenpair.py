"""
The leading eigenpair of a positive kernel
==========================================

A positive, distance-decreasing kernel restricted to a domain gives a
compact self-adjoint operator. Its top eigenvalue is positive with multiplicity one
and the eigenfunction keeps one sign; here we watch that happen on a few
domains, and see the spectral gap close when two balls are pulled apart.
"""

import numpy as np

from isospec import (Kernel, Manifold, Quadrature, assemble, ball_rule, eigensolve, jentsch_check,
                     random_domain, region_rule, two_balls)
from isospec.geometry import translate

H2 = Manifold.hyperbolic(2)
k = Kernel.exponential(1.0)

###############################################################################
# A ball, a perturbed ball and a union of three balls, all with area 2.

domains = {
    "ball": ball_rule(H2, H2.origin(), 0.75, 20, 40),
    "perturbed": region_rule(random_domain(H2, "perturbed_ball", 2.0, seed=1), 800, seed=1),
    "three balls": region_rule(random_domain(H2, "disjoint_balls", 2.0, seed=2, count=3), 800, seed=2),
}
for name, q in domains.items():
    rep = jentsch_check(eigensolve(assemble(q, k), count=2))
    print(f"{name:12s} lambda1={rep.lambda1:.6f} gap={rep.gap:.3e} min u/max u={rep.min_ratio:.3f}")

###############################################################################
# Two copies of one ball rule, moved apart: the relative gap between the
# two top eigenvalues decays roughly like the kernel across the gap.

qb = ball_rule(H2, H2.origin(), 0.4, 12, 24)
for sep in (1.0, 3.0, 6.0, 9.0):
    nodes = np.concatenate([translate(H2, qb.nodes, -sep / 2), translate(H2, qb.nodes, sep / 2)])
    q = Quadrature(nodes, np.concatenate([qb.weights, qb.weights]), two_balls(H2, 0.4, sep))
    rep = jentsch_check(eigensolve(assemble(q, k), count=2))
    print(f"separation {sep}: relative gap {rep.gap:.3e}")
