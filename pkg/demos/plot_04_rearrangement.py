"""
Symmetric-decreasing rearrangement on an equal-weight rule
==========================================================

With all quadrature weights equal, rearranging a function means sorting
its values and laying them out on a centred ball, largest values nearest
the centre. The double integral against a decreasing kernel cannot go
down, and the weighted norm is untouched.
"""

import numpy as np

from isospec import Kernel, Manifold, random_domain, region_rule
from isospec.rearrange import rearrange, riesz_sobolev_check

H2 = Manifold.hyperbolic(2)
q = region_rule(random_domain(H2, "disjoint_balls", 2.0, seed=5, count=2), 1000, seed=5)
u = np.exp(-np.abs(q.nodes[:, 1]))

pair = rearrange(q, u)
print("first values on the ball:", np.round(pair.values[:5], 4))
print("radii of those nodes:    ", np.round(pair.radii[:5], 4))

rep = riesz_sobolev_check(q, Kernel.riesz(1.0), u)
print(f"double integral {rep.lhs:.6f} -> {rep.rhs:.6f} (ratio {rep.ratio:.4f})")
print(f"norm {rep.norm!r} -> {rep.norm_rearranged!r}")
