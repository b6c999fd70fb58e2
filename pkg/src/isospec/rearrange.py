"""Discrete symmetric-decreasing rearrangement.

On an equal-weight rule the layer-cake construction reduces to sorting:
build an equal-weight rule with the same node count and weight on the
centred ball of the same total measure, order its nodes by distance to
the centre, and hand out the values of ``u`` largest first. Every level
set ``{u > t}`` then keeps its weighted measure exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .domains import GeodesicBall
from .errors import UsageError
from .kernels import Kernel
from .quadrature import Quadrature, sample_ball
from .spectral import bilinear_form


@dataclass(frozen=True, eq=False)
class RearrangedPair:
    ball_rule: Quadrature
    values: np.ndarray
    radii: np.ndarray


def rearrange(q: Quadrature, u, seed: int = 0) -> RearrangedPair:
    """Symmetric-decreasing rearrangement of node values ``u`` on ``q``.

    Raises
    ------
    UsageError
        If ``q`` is not an equal-weight rule or ``u`` has negative entries.
    """
    u = np.asarray(u, dtype=float)
    if not q.equal_weights or not np.all(q.weights == q.weights[0]):
        raise UsageError("rearrangement needs an equal-weight rule; resample with region_rule")
    if u.shape != (q.size,):
        raise UsageError("function values do not match the rule")
    if np.any(u < 0):
        raise UsageError("rearrangement is defined for non-negative functions")
    m = q.manifold
    w = q.weights[0]
    total = w * q.size
    center = m.origin()
    radius = geo.radius_for_measure(m, total)
    nodes = sample_ball(m, center, radius, q.size, seed)
    radii = geo.distance(m, center, nodes)
    order = np.argsort(radii, kind="stable")
    ball = GeodesicBall(m, center, radius)
    rule = Quadrature(nodes[order], np.full(q.size, w), ball, equal_weights=True,
                      info={"rule": "rearranged", "seed": seed})
    values = np.sort(u, kind="stable")[::-1].copy()
    return RearrangedPair(rule, values, radii[order])


def weighted_norm(weights, u) -> float:
    """Discrete L2 norm; fsum makes the result independent of node order."""
    u = np.asarray(u, dtype=float)
    return math.sqrt(math.fsum(np.asarray(weights) * u * u))


@dataclass(frozen=True)
class RieszSobolevReport:
    lhs: float
    rhs: float
    holds: bool
    norm: float
    norm_rearranged: float

    @property
    def ratio(self) -> float:
        return self.rhs / self.lhs if self.lhs else 1.0


def riesz_sobolev_check(q: Quadrature, k: Kernel, u, slack: float = 0.02, seed: int = 0,
                        a=None) -> RieszSobolevReport:
    """Compare the double integral of ``u`` on ``q`` with that of its
    rearrangement; holds if rhs >= lhs * (1 - slack)."""
    pair = rearrange(q, u, seed=seed)
    lhs = bilinear_form(q, k, u, a=a)
    rhs = bilinear_form(pair.ball_rule, k, pair.values)
    norm = weighted_norm(q.weights, u)
    norm_star = weighted_norm(pair.ball_rule.weights, pair.values)
    return RieszSobolevReport(lhs, rhs, rhs >= lhs * (1 - slack), norm, norm_star)
