"""Open bounded regions of a model space.

Four shapes are supported: a geodesic ball, a union of pairwise disjoint
balls, a star-shaped perturbation of a ball (n = 2 only), and a region
given by an arbitrary membership predicate inside an enclosing ball.
Every shape knows its enclosing ball, which drives rejection sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from . import geometry as geo
from .errors import DomainError, GenerationError, UsageError
from .geometry import Manifold

MEASURE_SAMPLES = 100_000
_PERTURBED_ANGLES = 4096


def _check_same(m: Manifold, other: Manifold):
    if m != other:
        raise UsageError(f"manifold mismatch: {m} vs {other}")


@dataclass(frozen=True, eq=False)
class GeodesicBall:
    manifold: Manifold
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", geo.check_point(self.manifold, self.center))
        if not 0 < self.radius <= self.manifold.max_radius:
            raise DomainError(f"ball radius {self.radius} out of range on {self.manifold}")

    @property
    def enclosing(self) -> tuple[np.ndarray, float]:
        return self.center, self.radius

    def measure(self) -> float:
        return geo.ball_volume(self.manifold, self.radius)

    def contains(self, x):
        return geo.distance(self.manifold, self.center, x) < self.radius

    def to_record(self) -> dict:
        return {"shape": "ball", "center": self.center.tolist(), "radius": self.radius}

    def describe(self) -> str:
        return f"ball(r={self.radius:.6g})"


@dataclass(frozen=True, eq=False)
class DisjointBalls:
    manifold: Manifold
    centers: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        m = self.manifold
        centers = geo.check_point(m, np.atleast_2d(self.centers))
        radii = np.atleast_1d(np.asarray(self.radii, dtype=float))
        if len(centers) != len(radii) or len(radii) == 0:
            raise DomainError("need one radius per centre")
        if np.any(radii <= 0) or np.any(radii > m.max_radius):
            raise DomainError("ball radius out of range")
        d = geo.pairwise_distances(m, centers)
        iu = np.triu_indices(len(radii), 1)
        if np.any(d[iu] <= (radii[:, None] + radii[None, :])[iu]):
            raise DomainError("balls are not strictly disjoint")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radii", radii)

    @property
    def balls(self) -> list[GeodesicBall]:
        return [GeodesicBall(self.manifold, c, r) for c, r in zip(self.centers, self.radii)]

    @property
    def enclosing(self) -> tuple[np.ndarray, float]:
        m = self.manifold
        best = None
        for c in self.centers:
            reach = np.max(geo.distance(m, c, self.centers) + self.radii)
            if best is None or reach < best[1]:
                best = (c, reach)
        center, reach = best
        return center, min(reach * (1 + 1e-12), m.max_radius)

    def measure(self) -> float:
        return float(np.sum(geo.ball_volume(self.manifold, self.radii)))

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        d = geo.distance(self.manifold, self.centers, x[..., None, :])
        return np.any(d < self.radii, axis=-1)

    def to_record(self) -> dict:
        return {"shape": "balls", "centers": self.centers.tolist(), "radii": self.radii.tolist()}

    def describe(self) -> str:
        radii = ",".join(f"{r:.4g}" for r in self.radii)
        return f"balls({len(self.radii)};r={radii})"


@dataclass(frozen=True, eq=False)
class PerturbedBall:
    """Star-shaped region with boundary radius ``R (1 + eps cos(k theta))``
    in geodesic polar coordinates about ``center`` (two-dimensional only)."""

    manifold: Manifold
    center: np.ndarray
    base_radius: float
    amplitude: float
    mode: int

    def __post_init__(self):
        m = self.manifold
        if m.dim != 2:
            raise DomainError("perturbed balls are only defined for n = 2")
        object.__setattr__(self, "center", geo.check_point(m, self.center))
        if not 0 <= self.amplitude < 1:
            raise DomainError("amplitude must lie in [0, 1)")
        if self.base_radius <= 0 or self.base_radius * (1 + self.amplitude) >= m.max_radius:
            raise DomainError("perturbed boundary leaves the admissible radius range")

    def boundary_radius(self, theta):
        return self.base_radius * (1.0 + self.amplitude * np.cos(self.mode * theta))

    @property
    def enclosing(self) -> tuple[np.ndarray, float]:
        return self.center, self.base_radius * (1 + self.amplitude)

    def measure(self) -> float:
        # area = int_0^{2pi} int_0^{r(theta)} s(t) dt dtheta; the periodic
        # trapezoid rule is spectrally accurate here
        theta = 2 * np.pi * np.arange(_PERTURBED_ANGLES) / _PERTURBED_ANGLES
        r = self.boundary_radius(theta)
        return float(np.mean(geo.ball_volume(self.manifold, r)))

    def contains(self, x):
        rho, unit = geo.polar_coords(self.manifold, self.center, x)
        theta = np.arctan2(unit[..., 1], unit[..., 0])
        return rho < self.boundary_radius(theta)

    def to_record(self) -> dict:
        return {"shape": "perturbed", "center": self.center.tolist(),
                "base_radius": self.base_radius, "amplitude": self.amplitude, "mode": self.mode}

    def describe(self) -> str:
        return f"perturbed(R={self.base_radius:.4g},eps={self.amplitude:.3g},k={self.mode})"


@dataclass(frozen=True, eq=False)
class SampledRegion:
    """Region given by a membership predicate inside an enclosing ball.

    The measure is a hit-ratio estimate from ``samples`` quasi-random
    proposals; it is computed once and cached.
    """

    manifold: Manifold
    indicator: Callable
    center: np.ndarray
    radius: float
    samples: int = MEASURE_SAMPLES
    seed: int = 0
    label: str = "sampled"
    _measure: list = field(default_factory=list, repr=False)

    @property
    def enclosing(self) -> tuple[np.ndarray, float]:
        return self.center, self.radius

    def measure(self) -> float:
        if not self._measure:
            from .quadrature import sample_ball

            pts = sample_ball(self.manifold, self.center, self.radius, self.samples, self.seed)
            hits = np.count_nonzero(self.indicator(pts))
            self._measure.append(geo.ball_volume(self.manifold, self.radius) * hits / self.samples)
        return self._measure[0]

    def contains(self, x):
        return np.asarray(self.indicator(np.asarray(x, dtype=float)), dtype=bool)

    def to_record(self) -> dict:
        return {"shape": "sampled", "label": self.label, "center": np.asarray(self.center).tolist(),
                "radius": self.radius, "samples": self.samples}

    def describe(self) -> str:
        return f"{self.label}(samples={self.samples})"


Domain = GeodesicBall | DisjointBalls | PerturbedBall | SampledRegion


def measure(d: Domain) -> float:
    """Riemannian measure of ``d`` (closed form where available)."""
    return d.measure()


def indicator(d: Domain, x, manifold: Manifold | None = None):
    """Membership in the open set; boundary points are outside."""
    if manifold is not None:
        _check_same(d.manifold, manifold)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != d.manifold.ambient_dim:
        raise UsageError(f"point does not belong to {d.manifold}")
    return d.contains(x)


def from_record(m: Manifold, record: dict) -> Domain:
    """Rebuild a domain from :meth:`to_record` output (not SampledRegion)."""
    shape = record["shape"]
    if shape == "ball":
        return GeodesicBall(m, np.array(record["center"]), record["radius"])
    if shape == "balls":
        return DisjointBalls(m, np.array(record["centers"]), np.array(record["radii"]))
    if shape == "perturbed":
        return PerturbedBall(m, np.array(record["center"]), record["base_radius"],
                             record["amplitude"], int(record["mode"]))
    raise UsageError(f"cannot rebuild shape {shape!r} from a record")


def parse_domain(m: Manifold, text: str) -> Domain:
    """Parse a domain description centred at the model origin.

    ``ball:radius=0.8``, ``balls:radius=0.5,separation=3`` (two identical
    balls with centres ``separation`` apart), ``perturbed:radius=0.8,
    amplitude=0.2,mode=3``.
    """
    try:
        tag, _, rest = text.partition(":")
        params = dict(item.split("=") for item in rest.split(",") if item)
        params = {k.strip(): float(v) for k, v in params.items()}
        tag = tag.strip().lower()
        if tag == "ball":
            return GeodesicBall(m, m.origin(), params["radius"])
        if tag == "balls":
            return two_balls(m, params["radius"], params["separation"])
        if tag == "perturbed":
            return PerturbedBall(m, m.origin(), params["radius"], params.get("amplitude", 0.0),
                                 int(params.get("mode", 2)))
    except (KeyError, ValueError):
        pass
    raise UsageError(f"bad domain description {text!r}")


def two_balls(m: Manifold, radius: float, separation: float) -> DisjointBalls:
    """Two identical balls whose centres sit at ``+-separation/2`` along
    the first axis through the origin."""
    o = m.origin()
    centers = np.array([geo.translate(m, o, -separation / 2), geo.translate(m, o, separation / 2)])
    return DisjointBalls(m, centers, [radius, radius])


def _random_points(m: Manifold, rng, count: int, spread: float) -> np.ndarray:
    from .quadrature import uniform_to_ball

    u = rng.random((count, m.dim))
    if m.compact:
        spread = np.pi
    return uniform_to_ball(m, m.origin(), spread, u)


def random_domain(m: Manifold, family: str, target_measure: float, seed: int,
                  count: int = 2, amplitude: float | None = None,
                  max_tries: int = 200) -> Domain:
    """Random domain of the given measure.

    ``family`` is ``"disjoint_balls"`` (``count`` balls with random centres
    and relative sizes, rescaled by root finding so the total measure hits
    ``target_measure``) or ``"perturbed_ball"`` (random amplitude in
    [0.05, 0.35] unless given, random mode in 2..5, base radius solved for
    the measure).

    Raises
    ------
    GenerationError
        If no valid placement is found within ``max_tries`` attempts.
    """
    if target_measure <= 0 or target_measure >= m.total_measure:
        raise DomainError("target measure is not feasible on this manifold")
    rng = np.random.default_rng(seed)
    if family == "perturbed_ball":
        return _random_perturbed(m, rng, target_measure, amplitude)
    if family != "disjoint_balls":
        raise UsageError(f"unknown domain family {family!r}")
    if count < 1:
        raise UsageError("need at least one ball")

    r_single = geo.radius_for_measure(m, target_measure)
    for _ in range(max_tries):
        rel = rng.uniform(0.5, 1.0, size=count)
        centers = _random_points(m, rng, count, spread=2.5 * r_single * np.sqrt(count))

        def excess(scale):
            return np.sum(geo.ball_volume(m, np.minimum(scale * rel, m.max_radius))) - target_measure

        hi = m.max_radius / rel.max() if m.compact else 1.0
        if not m.compact:
            while excess(hi) < 0:
                hi *= 2.0
        if excess(hi) < 0:
            continue
        scale = optimize.brentq(excess, 0.0, hi, xtol=1e-15, rtol=1e-15)
        radii = scale * rel
        d = geo.pairwise_distances(m, centers)
        iu = np.triu_indices(count, 1)
        if np.all(d[iu] > (radii[:, None] + radii[None, :])[iu] * 1.02):
            return DisjointBalls(m, centers, radii)
    raise GenerationError(f"could not place {count} disjoint balls of total measure "
                          f"{target_measure} on {m} in {max_tries} tries")


def _random_perturbed(m: Manifold, rng, target: float, amplitude: float | None) -> PerturbedBall:
    if m.dim != 2:
        raise DomainError("perturbed balls are only defined for n = 2")
    eps = rng.uniform(0.05, 0.35) if amplitude is None else float(amplitude)
    mode = int(rng.integers(2, 6))
    center = m.origin()
    r_ball = geo.radius_for_measure(m, target)
    if eps == 0:
        return PerturbedBall(m, center, r_ball, 0.0, mode)

    def excess(base):
        return PerturbedBall(m, center, base, eps, mode).measure() - target

    hi = min(2 * r_ball, m.max_radius / (1 + eps) * (1 - 1e-9))
    if excess(hi) < 0:
        raise GenerationError("perturbed ball cannot reach the target measure")
    base = optimize.brentq(excess, 0.5 * r_ball / (1 + eps), hi, xtol=1e-15, rtol=1e-15)
    return PerturbedBall(m, center, base, eps, mode)
