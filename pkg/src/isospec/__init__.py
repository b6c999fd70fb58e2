"""Eigenvalues of convolution-type integral operators with non-increasing
radial kernels on the sphere, hyperbolic space and Euclidean space.

Typical use::

    from isospec import Manifold, Kernel, ball_rule, assemble, eigensolve

    m = Manifold.sphere(2)
    q = ball_rule(m, m.origin(), 0.8)
    spec = eigensolve(assemble(q, Kernel.riesz(1.0)), count=2)
    spec.lambda1, spec.lambda2
"""

from .domains import (DisjointBalls, GeodesicBall, PerturbedBall, SampledRegion, indicator,
                      measure, parse_domain, random_domain, two_balls)
from .experiments import (ExperimentReport, hks_sweep, lambda1_report, rearrange_check,
                          report_read, report_write, rfk_sweep, sign_split_check)
from .geometry import (Manifold, ball_volume, distance, geodesic_point, pairwise_distances,
                       radius_for_measure)
from .kernels import Kernel, cell_average, evaluate, parse_kernel
from .quadrature import Quadrature, ball_rule, region_rule, restrict
from .rearrange import RearrangedPair, rearrange, riesz_sobolev_check
from .spectral import (OperatorMatrix, SpectralResult, assemble, bilinear_form, eigensolve,
                       jentsch_check, leading_eigenvalue, rayleigh_quotient)

__version__ = "0.1.0"

__all__ = [
    "DisjointBalls", "ExperimentReport", "GeodesicBall", "Kernel", "Manifold", "OperatorMatrix",
    "PerturbedBall", "Quadrature", "RearrangedPair", "SampledRegion", "SpectralResult",
    "assemble", "ball_rule", "ball_volume", "bilinear_form", "cell_average", "distance",
    "eigensolve", "evaluate", "geodesic_point", "hks_sweep", "indicator", "jentsch_check",
    "lambda1_report", "leading_eigenvalue", "measure", "pairwise_distances", "parse_domain",
    "parse_kernel", "radius_for_measure", "random_domain", "rayleigh_quotient", "rearrange",
    "rearrange_check", "region_rule", "report_read", "report_write", "restrict", "rfk_sweep",
    "riesz_sobolev_check", "sign_split_check", "two_balls",
]
