"""Node/weight rules for the Riemannian measure on domains.

``ball_rule`` is a product Gauss-Legendre x angular rule in geodesic polar
coordinates. ``region_rule`` is an equal-weight rule built by rejection
sampling of scrambled Sobol points pushed into the enclosing ball with
the exact radial volume profile, so proposals are uniform in measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from . import geometry as geo
from .domains import Domain, GeodesicBall, SampledRegion
from .errors import DegenerateDomainError, DomainError, EmptySelectionError, UsageError
from .geometry import Manifold

DEFAULT_RADIAL = 32
DEFAULT_ANGULAR = 64
DEFAULT_REGION_NODES = 2000
MIN_ACCEPTANCE = 1e-3


@dataclass(frozen=True, eq=False)
class Quadrature:
    nodes: np.ndarray
    weights: np.ndarray
    domain: Domain
    equal_weights: bool = False
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise UsageError("nodes and weights differ in length")
        if np.any(self.weights <= 0):
            raise UsageError("quadrature weights must be positive")

    @property
    def manifold(self) -> Manifold:
        return self.domain.manifold

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def __len__(self):
        return len(self.weights)


def uniform_to_ball(m: Manifold, center, radius: float, u) -> np.ndarray:
    """Map points of the unit cube [0,1)^dim to the geodesic ball so that
    the uniform distribution goes to the normalised Riemannian measure.

    The first coordinate sets the radius by inverting the volume profile;
    the rest set the direction (angle on S^1, (cos theta, phi) on S^2).
    In one dimension the single coordinate is a signed arc position.
    """
    u = np.atleast_2d(np.asarray(u, dtype=float))
    total = geo.ball_volume(m, radius)
    if m.dim == 1:
        s = 2.0 * u[:, 0] - 1.0
        return geo.polar_points(m, center, radius * np.abs(s), np.sign(s)[:, None] + (s == 0)[:, None])
    # volume fractions are kept away from 0 so the inversion stays positive
    frac = np.clip(u[:, 0], 1e-300, 1.0)
    r = geo.radius_for_measure(m, frac * total, rtol=1e-12)
    r = np.minimum(r, radius * (1 - 1e-15))
    if m.dim == 2:
        phi = 2 * np.pi * u[:, 1]
        unit = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    else:
        z = 1.0 - 2.0 * u[:, 1]
        phi = 2 * np.pi * u[:, 2]
        rxy = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        unit = np.stack([rxy * np.cos(phi), rxy * np.sin(phi), z], axis=1)
    return geo.polar_points(m, center, r, unit)


def sample_ball(m: Manifold, center, radius: float, count: int, seed: int) -> np.ndarray:
    """``count`` measure-uniform scrambled-Sobol points in a geodesic ball."""
    sampler = qmc.Sobol(m.dim, scramble=True, seed=seed)
    u = _sobol_draw(sampler, count)
    return uniform_to_ball(m, center, radius, u)


def _sobol_draw(sampler, count: int) -> np.ndarray:
    k = max(int(np.ceil(np.log2(max(count, 1)))), 0)
    return sampler.random_base2(k)[:count] if sampler.num_generated == 0 else sampler.random(count)


def ball_rule(m: Manifold, center, radius: float, radial_nodes: int = DEFAULT_RADIAL,
              angular_nodes: int = DEFAULT_ANGULAR) -> Quadrature:
    """Product rule on a geodesic ball.

    Gauss-Legendre in the radius (weights scaled by s(t)^(n-1)) times
    equally spaced angles for n = 2, polar Gauss-Legendre in cos(theta)
    (``angular_nodes // 2`` points) times ``angular_nodes`` azimuths for
    n = 3, and the two directions +-e1 for n = 1. Alternate rings are
    rotated by half an angular step.
    """
    if not 0 < radius <= m.max_radius:
        raise DomainError(f"radius {radius} out of range on {m}")
    if radial_nodes < 4:
        raise UsageError("radial_nodes must be at least 4")
    center = geo.check_point(m, center)
    x, w = np.polynomial.legendre.leggauss(radial_nodes)
    t = 0.5 * radius * (x + 1.0)
    wt = 0.5 * radius * w * geo.warp(m, t) ** (m.dim - 1)

    if m.dim == 1:
        unit = np.array([[1.0], [-1.0]])
        radii = np.repeat(t, 2)
        weights = np.repeat(wt, 2)
        units = np.tile(unit, (radial_nodes, 1))
    elif m.dim == 2:
        A = angular_nodes
        ring = np.arange(radial_nodes)
        phi = 2 * np.pi * (np.arange(A)[None, :] + 0.5 * (ring[:, None] % 2)) / A
        units = np.stack([np.cos(phi), np.sin(phi)], axis=-1).reshape(-1, 2)
        radii = np.repeat(t, A)
        weights = np.repeat(wt * 2 * np.pi / A, A)
    else:
        A = angular_nodes
        P = max(angular_nodes // 2, 2)
        z, wz = np.polynomial.legendre.leggauss(P)
        phi0 = 2 * np.pi * np.arange(A) / A
        units, radii, weights = [], [], []
        for k in range(radial_nodes):
            phi = phi0 + np.pi * (k % 2) / A
            zz, pp = np.meshgrid(z, phi, indexing="ij")
            rxy = np.sqrt(1 - zz ** 2)
            units.append(np.stack([rxy * np.cos(pp), rxy * np.sin(pp), zz], -1).reshape(-1, 3))
            radii.append(np.full(P * A, t[k]))
            weights.append((wt[k] * wz[:, None] * (2 * np.pi / A) * np.ones((P, A))).ravel())
        units, radii, weights = np.concatenate(units), np.concatenate(radii), np.concatenate(weights)

    nodes = geo.polar_points(m, center, radii, units)
    return Quadrature(nodes, weights, GeodesicBall(m, center, radius), equal_weights=False,
                      info={"rule": "ball", "radial_nodes": radial_nodes, "angular_nodes": angular_nodes})


def region_rule(d: Domain, count: int = DEFAULT_REGION_NODES, seed: int = 0) -> Quadrature:
    """Equal-weight rule with ``count`` nodes inside ``d``.

    Proposals are drawn from the enclosing ball until ``count`` are
    accepted; each node carries weight ``|enclosing ball| / proposals``.

    Raises
    ------
    DegenerateDomainError
        If the acceptance ratio falls below 1e-3.
    """
    if count < 1:
        raise UsageError("count must be positive")
    m = d.manifold
    center, radius = d.enclosing
    enclosing_volume = geo.ball_volume(m, radius)
    sampler = qmc.Sobol(m.dim, scramble=True, seed=seed)

    accepted, drawn = [], 0
    kept = 0
    chunk = 1 << max(int(np.ceil(np.log2(max(2 * count, 256)))), 0)
    while kept < count:
        u = sampler.random_base2(int(np.log2(chunk))) if drawn == 0 else sampler.random(chunk)
        pts = uniform_to_ball(m, center, radius, u)
        inside = np.asarray(d.contains(pts), dtype=bool)
        accepted.append((pts, inside, drawn))
        kept += int(inside.sum())
        drawn += len(u)
        if kept < MIN_ACCEPTANCE * drawn or (kept == 0 and drawn >= 1 / MIN_ACCEPTANCE * count):
            raise DegenerateDomainError(
                f"acceptance ratio {kept / drawn:.2e} below {MIN_ACCEPTANCE:g} for {d.describe()}")

    nodes, used = [], 0
    need = count
    for pts, inside, offset in accepted:
        idx = np.flatnonzero(inside)[:need]
        nodes.append(pts[idx])
        need -= len(idx)
        if need == 0:
            used = offset + idx[-1] + 1
            break
    nodes = np.concatenate(nodes)
    weights = np.full(count, enclosing_volume / used)
    return Quadrature(nodes, weights, d, equal_weights=True,
                      info={"rule": "region", "proposals": int(used), "seed": seed})


def restrict(q: Quadrature, keep) -> Quadrature:
    """Sub-rule on the selected nodes, with weights unchanged.

    ``keep`` is a boolean mask, an index array, or a predicate on node
    index. The new domain is the union of the kept nodes' Voronoi cells
    within the parent domain.

    Raises
    ------
    EmptySelectionError
        If nothing is kept (e.g. a sign split of a sign-definite vector).
    """
    if callable(keep):
        mask = np.array([bool(keep(i)) for i in range(q.size)], dtype=bool)
    else:
        keep = np.asarray(keep)
        if keep.dtype == bool:
            mask = keep
        else:
            mask = np.zeros(q.size, dtype=bool)
            mask[keep] = True
    if mask.shape != (q.size,):
        raise UsageError("selection mask has the wrong length")
    if not mask.any():
        raise EmptySelectionError("empty selection: the splitting vector does not change sign")
    if mask.all():
        return q

    m = q.manifold
    parent, all_nodes = q.domain, q.nodes

    def inside(x):
        x = np.atleast_2d(x)
        nearest = np.argmin(geo.pairwise_distances(m, x, all_nodes), axis=1)
        return parent.contains(x) & mask[nearest]

    center, radius = parent.enclosing
    sub = SampledRegion(m, inside, center, radius, label="restricted")
    sub._measure.append(float(np.sum(q.weights[mask])))
    return Quadrature(q.nodes[mask], q.weights[mask], sub, equal_weights=q.equal_weights,
                      info=dict(q.info, restricted=int(mask.sum())))
