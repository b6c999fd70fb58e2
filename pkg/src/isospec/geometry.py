"""Unit-curvature model spaces S^n, R^n and H^n for n <= 3.

Points are plain numpy arrays whose last axis holds the coordinates:
``dim + 1`` ambient coordinates on the sphere (unit vectors in R^{n+1})
and on hyperbolic space (upper sheet of the hyperboloid
``x0^2 - x1^2 - ... - xn^2 = 1``), ``dim`` coordinates on Euclidean space.
Every function broadcasts over leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, DomainError

POSITIVE = "positive"
ZERO = "zero"
NEGATIVE = "negative"

_ALIASES = {
    "sphere": POSITIVE,
    "spherical": POSITIVE,
    "positive": POSITIVE,
    "euclidean": ZERO,
    "flat": ZERO,
    "zero": ZERO,
    "hyperbolic": NEGATIVE,
    "negative": NEGATIVE,
}

# unit (n-1)-sphere surface measure for n = 1, 2, 3
_SPHERE_AREA = {1: 2.0, 2: 2.0 * np.pi, 3: 4.0 * np.pi}

CONSTRAINT_TOL = 1e-9


@dataclass(frozen=True)
class Manifold:
    """Simply connected model space of constant curvature +1, 0 or -1."""

    curvature: str
    dim: int

    def __post_init__(self):
        curvature = _ALIASES.get(str(self.curvature).lower())
        if curvature is None:
            raise ValueError(f"unknown curvature sign {self.curvature!r}")
        object.__setattr__(self, "curvature", curvature)
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.dim}")

    @classmethod
    def sphere(cls, dim: int = 2) -> Manifold:
        return cls(POSITIVE, dim)

    @classmethod
    def hyperbolic(cls, dim: int = 2) -> Manifold:
        return cls(NEGATIVE, dim)

    @classmethod
    def euclidean(cls, dim: int = 2) -> Manifold:
        return cls(ZERO, dim)

    @property
    def name(self) -> str:
        return {POSITIVE: "sphere", ZERO: "euclidean", NEGATIVE: "hyperbolic"}[self.curvature]

    @property
    def ambient_dim(self) -> int:
        return self.dim if self.curvature == ZERO else self.dim + 1

    @property
    def compact(self) -> bool:
        return self.curvature == POSITIVE

    @property
    def max_radius(self) -> float:
        """Largest admissible ball radius (pi on the sphere)."""
        return np.pi if self.curvature == POSITIVE else np.inf

    @property
    def total_measure(self) -> float:
        return ball_volume(self, np.pi) if self.curvature == POSITIVE else np.inf

    def origin(self) -> np.ndarray:
        """Canonical centre: north pole, hyperboloid apex, or 0."""
        x = np.zeros(self.ambient_dim)
        if self.curvature == POSITIVE:
            x[-1] = 1.0
        elif self.curvature == NEGATIVE:
            x[0] = 1.0
        return x

    def __str__(self):
        symbol = {POSITIVE: "S", ZERO: "E", NEGATIVE: "H"}[self.curvature]
        return f"{symbol}{self.dim}"


def warp(m: Manifold, t):
    """Radial warping profile s(t): sin, identity or sinh."""
    t = np.asarray(t, dtype=float)
    if m.curvature == POSITIVE:
        return np.sin(t)
    if m.curvature == NEGATIVE:
        return np.sinh(t)
    return t


def sphere_area(dim: int) -> float:
    """Surface measure of the unit (dim-1)-sphere."""
    return _SPHERE_AREA[dim]


def form(m: Manifold, x, y):
    """Model bilinear form: Euclidean dot product, or the Minkowski form
    ``x0*y0 - sum(xi*yi)`` on the hyperboloid."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    prod = np.sum(x * y, axis=-1)
    if m.curvature == NEGATIVE:
        prod = 2.0 * x[..., 0] * y[..., 0] - prod
    return prod


def check_point(m: Manifold, x, tol: float = CONSTRAINT_TOL) -> np.ndarray:
    """Return ``x`` as an array after validating the model constraint.

    Raises
    ------
    ConstraintError
        If the coordinate count is wrong or the constraint is violated
        by more than ``tol``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != m.ambient_dim:
        raise ConstraintError(
            f"{m} points need {m.ambient_dim} coordinates, got {x.shape[-1]}")
    if m.curvature == POSITIVE:
        bad = np.abs(np.sum(x * x, axis=-1) - 1.0) > tol
    elif m.curvature == NEGATIVE:
        bad = (np.abs(form(m, x, x) - 1.0) > tol * np.maximum(1.0, x[..., 0] ** 2)) | (x[..., 0] < 1.0 - tol)
    else:
        bad = ~np.all(np.isfinite(x), axis=-1)
    if np.any(bad):
        raise ConstraintError(f"point(s) off the {m.name} model")
    return x


def distance(m: Manifold, x, y):
    """Geodesic distance, broadcasting over leading axes.

    Uses chord formulas ``2 arcsin(|x-y|/2)`` and
    ``2 arsinh(sqrt(-<x-y, x-y>)/2)``, which agree with the arccos / arcosh
    of the (clamped) inner product but keep full relative accuracy for
    nearby points.
    """
    x = check_point(m, x)
    y = check_point(m, y)
    diff = x - y
    if m.curvature == ZERO:
        return np.sqrt(np.sum(diff * diff, axis=-1))
    if m.curvature == POSITIVE:
        chord = np.sqrt(np.sum(diff * diff, axis=-1))
        return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))
    q = np.maximum(-form(m, diff, diff), 0.0)
    return 2.0 * np.arcsinh(np.sqrt(q) / 2.0)


def pairwise_distances(m: Manifold, X, Y=None) -> np.ndarray:
    """Matrix of geodesic distances between the rows of X and Y."""
    from scipy.spatial.distance import cdist

    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = X if Y is None else np.atleast_2d(np.asarray(Y, dtype=float))
    if m.curvature == ZERO:
        return cdist(X, Y)
    if m.curvature == POSITIVE:
        chord = cdist(X, Y)
        np.clip(chord / 2.0, 0.0, 1.0, out=chord)
        return 2.0 * np.arcsin(chord)
    q = cdist(X[:, 1:], Y[:, 1:], "sqeuclidean")
    q -= cdist(X[:, :1], Y[:, :1], "sqeuclidean")
    np.maximum(q, 0.0, out=q)
    np.sqrt(q, out=q)
    q /= 2.0
    return 2.0 * np.arcsinh(q)


def _tangent_component(m: Manifold, center, v):
    """Project ambient vectors v onto the tangent space at center."""
    if m.curvature == ZERO:
        return np.asarray(v, dtype=float)
    return v - form(m, v, center)[..., None] * center


def tangent_norm(m: Manifold, v):
    """Length of tangent vectors (spacelike on the hyperboloid)."""
    sq = form(m, v, v)
    if m.curvature == NEGATIVE:
        sq = -sq
    return np.sqrt(np.maximum(sq, 0.0))


def tangent_frame(m: Manifold, center) -> np.ndarray:
    """Orthonormal basis (rows) of the tangent space at ``center``.

    Gram-Schmidt on the ambient coordinate axes in the model form.
    """
    center = check_point(m, center)
    if m.curvature == ZERO:
        return np.eye(m.dim)
    frame = []
    for axis in np.eye(m.ambient_dim):
        v = _tangent_component(m, center, axis)
        for e in frame:
            # tangent vectors have negative Minkowski norm
            sign = -1.0 if m.curvature == NEGATIVE else 1.0
            v = v - sign * form(m, v, e) * e
        length = tangent_norm(m, v)
        if length > 1e-8:
            frame.append(v / length)
        if len(frame) == m.dim:
            break
    return np.array(frame)


def check_direction(m: Manifold, center, direction, tol: float = CONSTRAINT_TOL) -> np.ndarray:
    direction = np.asarray(direction, dtype=float)
    if direction.shape[-1] != m.ambient_dim:
        raise ConstraintError("direction has the wrong number of coordinates")
    if m.curvature != ZERO and np.any(np.abs(form(m, direction, center)) > tol):
        raise ConstraintError("direction is not tangent at the centre")
    if np.any(np.abs(tangent_norm(m, direction) - 1.0) > tol):
        raise ConstraintError("direction is not a unit tangent vector")
    return direction


def geodesic_point(m: Manifold, center, direction, t):
    """Point at arc length ``t`` along the unit-speed geodesic from
    ``center`` in ``direction``. Broadcasts over ``direction`` and ``t``."""
    center = check_point(m, center)
    direction = check_direction(m, center, direction)
    t = np.asarray(t, dtype=float)[..., None]
    if m.curvature == POSITIVE:
        return np.cos(t) * center + np.sin(t) * direction
    if m.curvature == NEGATIVE:
        return np.cosh(t) * center + np.sinh(t) * direction
    return center + t * direction


def _exp_unchecked(m: Manifold, center, directions, t):
    t = np.asarray(t, dtype=float)[..., None]
    if m.curvature == POSITIVE:
        x = np.cos(t) * center + np.sin(t) * directions
        return x / np.linalg.norm(x, axis=-1, keepdims=True)
    if m.curvature == NEGATIVE:
        x = np.cosh(t) * center + np.sinh(t) * directions
        # re-project onto the upper sheet
        x[..., 0] = np.sqrt(1.0 + np.sum(x[..., 1:] ** 2, axis=-1))
        return x
    return center + t * directions


def polar_points(m: Manifold, center, radii, unit_coords) -> np.ndarray:
    """Points ``exp_center(r * sum_i c_i e_i)`` for frame coefficients
    ``unit_coords`` (shape ``(..., dim)``, unit rows) and radii ``r``."""
    center = check_point(m, center)
    frame = tangent_frame(m, center)
    directions = np.asarray(unit_coords, dtype=float) @ frame
    return _exp_unchecked(m, center, directions, radii)


def polar_coords(m: Manifold, center, x):
    """Inverse of :func:`polar_points`: radii and frame coefficients of
    the unit initial direction (zero vector at the centre)."""
    center = check_point(m, center)
    x = check_point(m, x)
    frame = tangent_frame(m, center)
    v = _tangent_component(m, center, x if m.curvature != ZERO else x - center)
    coeffs = form(m, v[..., None, :], frame)
    if m.curvature == NEGATIVE:
        coeffs = -coeffs
    norms = np.linalg.norm(coeffs, axis=-1, keepdims=True)
    unit = np.divide(coeffs, norms, out=np.zeros_like(coeffs), where=norms > 0)
    return distance(m, center, x), unit


def translate(m: Manifold, x, t, axis: int = 1):
    """Isometry moving the origin a distance ``t`` along ambient ``axis``
    (rotation on the sphere, boost on the hyperboloid)."""
    x = np.array(x, dtype=float)
    if m.curvature == ZERO:
        x[..., axis - 1] += t
        return x
    pivot = m.ambient_dim - 1 if m.curvature == POSITIVE else 0
    a, b = x[..., pivot].copy(), x[..., axis].copy()
    if m.curvature == POSITIVE:
        c, s = np.cos(t), np.sin(t)
        x[..., pivot] = c * a - s * b
        x[..., axis] = s * a + c * b
    else:
        c, s = np.cosh(t), np.sinh(t)
        x[..., pivot] = c * a + s * b
        x[..., axis] = s * a + c * b
    return x


def _primitive(m: Manifold, r):
    """int_0^r s(t)^(n-1) dt in closed form."""
    r = np.asarray(r, dtype=float)
    n = m.dim
    if n == 1:
        return r
    if m.curvature == ZERO:
        return r ** n / n
    if n == 2:
        # 2 sin^2(r/2) == 1 - cos r without cancellation
        return 2.0 * np.sin(r / 2.0) ** 2 if m.curvature == POSITIVE else 2.0 * np.sinh(r / 2.0) ** 2
    if m.curvature == POSITIVE:
        return 0.5 * (r - np.sin(r) * np.cos(r))
    # sinh r cosh r - r loses digits for small r; use the series there
    small = r < 1e-2
    rs = np.where(small, r, 0.0)
    series = rs ** 3 / 3.0 + rs ** 5 / 15.0 + 2.0 * rs ** 7 / 315.0 + rs ** 9 / 2835.0
    rl = np.where(small, 1.0, r)
    return np.where(small, series, 0.5 * (np.sinh(rl) * np.cosh(rl) - rl))


def ball_volume(m: Manifold, r):
    """Riemannian measure of a geodesic ball of radius r."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > m.max_radius):
        raise DomainError(f"radius out of range for {m}: {r}")
    vol = sphere_area(m.dim) * _primitive(m, r)
    return float(vol) if vol.ndim == 0 else vol


def radius_for_measure(m: Manifold, target, rtol: float = 1e-13):
    """Radius of the geodesic ball of measure ``target`` (vectorised bisection)."""
    target = np.asarray(target, dtype=float)
    if np.any(target <= 0):
        raise DomainError("target measure must be positive")
    if m.compact and np.any(target > m.total_measure * (1 + 1e-15)):
        raise DomainError(f"target exceeds total measure of {m}")
    lo = np.zeros_like(target)
    if m.compact:
        hi = np.full_like(target, np.pi)
    else:
        hi = np.ones_like(target)
        while np.any(ball_volume(m, hi) < target):
            hi = np.where(ball_volume(m, hi) < target, 2.0 * hi, hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = ball_volume(m, mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= rtol * hi):
            break
    r = 0.5 * (lo + hi)
    if m.compact:
        # the volume is flat at r = pi; the whole sphere maps to pi exactly
        r = np.where(target >= m.total_measure, np.pi, r)
    return float(r) if r.ndim == 0 else r
