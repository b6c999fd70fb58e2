"""
The second eigenvalue of two balls drifting apart
=================================================

For two identical hyperbolic disks the second eigenvalue of the union
creeps up to the first eigenvalue of one disk as the disks separate. The
cross terms of the two-bump test vector vanish at the same rate as the
kernel across the gap.
"""

from isospec import Kernel, Manifold, ball_volume, hks_sweep

H2 = Manifold.hyperbolic(2)
report = hks_sweep(Kernel.exponential(1.0), ball_volume(H2, 0.6), [2.0, 4.0, 6.0, 8.0],
                   nodes_per_ball=300)

print(f"one ball: lambda1 = {report.summary['lambda1_ball']:.6f}")
for row in report.rows:
    print(f"l={row['separation']:.0f}  lambda2={row['lambda2']:.6f}  gap={row['gap']:.3e}  "
          f"I2/I1={row['I2'] / row['I1']:.2e}")

for v in report.verdicts:
    print(v.status.upper(), v.claim, f"margin {v.margin:.3e}", v.note)
