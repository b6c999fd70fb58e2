"""Radial kernel profiles K(rho): positive, non-increasing functions of
geodesic distance, and their averages over small geodesic cells."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, SingularityError, UsageError
from .geometry import Manifold, radius_for_measure, sphere_area, warp

RIESZ = "riesz"
EXPONENTIAL = "exp"
CONSTANT = "const"

_PARAM = {RIESZ: "alpha", EXPONENTIAL: "beta", CONSTANT: "c"}

# Gauss-Legendre order per panel and number of dyadic panels towards 0
_CELL_ORDER = 24
_CELL_LEVELS = 24


@dataclass(frozen=True)
class Kernel:
    """Kernel profile with one parameter.

    ``riesz``: rho**-alpha with 0 < alpha < dim; ``exp``: exp(-beta*rho)
    with beta > 0; ``const``: c > 0.
    """

    kind: str
    param: float
    dim: int = 2

    def __post_init__(self):
        if self.kind not in _PARAM:
            raise UsageError(f"unknown kernel kind {self.kind!r}")
        object.__setattr__(self, "param", float(self.param))
        if self.kind == RIESZ and not 0.0 < self.param < self.dim:
            raise AdmissibilityError(
                f"Riesz exponent must satisfy 0 < alpha < {self.dim}, got {self.param}")
        if self.kind != RIESZ and self.param <= 0:
            raise AdmissibilityError(f"{_PARAM[self.kind]} must be positive")

    @classmethod
    def riesz(cls, alpha: float, dim: int = 2) -> Kernel:
        return cls(RIESZ, alpha, dim)

    @classmethod
    def exponential(cls, beta: float = 1.0, dim: int = 2) -> Kernel:
        return cls(EXPONENTIAL, beta, dim)

    @classmethod
    def constant(cls, c: float = 1.0, dim: int = 2) -> Kernel:
        return cls(CONSTANT, c, dim)

    @property
    def singular(self) -> bool:
        return self.kind == RIESZ

    @property
    def decays(self) -> bool:
        """Whether K(rho) -> 0 as rho -> infinity (needed for the two-ball limit)."""
        return self.kind != CONSTANT

    def spec(self) -> str:
        return f"{self.kind if self.kind != EXPONENTIAL else 'exp'}:{_PARAM[self.kind]}={self.param:g}"

    def __call__(self, rho):
        return evaluate(self, rho)


def parse_kernel(text: str, dim: int = 2) -> Kernel:
    """Parse ``riesz:alpha=1.0``, ``exp:beta=1.0`` or ``const:c=1.0``."""
    try:
        kind, rest = text.strip().split(":", 1)
        key, value = rest.split("=", 1)
        kind = kind.strip().lower()
        kind = {"exponential": EXPONENTIAL, "constant": CONSTANT}.get(kind, kind)
        if kind not in _PARAM or key.strip() != _PARAM[kind]:
            raise ValueError
        return Kernel(kind, float(value), dim)
    except ValueError as exc:
        if isinstance(exc, AdmissibilityError):
            raise
        raise UsageError(f"bad kernel spec {text!r}; expected e.g. riesz:alpha=1.0") from None


def evaluate(k: Kernel, rho):
    """K(rho) for rho >= 0 (rho > 0 for Riesz kernels)."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise UsageError("distances must be non-negative")
    if k.kind == RIESZ:
        if np.any(rho == 0):
            raise SingularityError("Riesz kernel is singular at rho = 0; use cell_average")
        out = rho ** -k.param
    elif k.kind == EXPONENTIAL:
        out = np.exp(-k.param * rho)
    else:
        out = np.full_like(rho, k.param)
    return float(out) if out.ndim == 0 else out


def _gauss_unit(order: int = _CELL_ORDER, levels: int = _CELL_LEVELS):
    """Composite Gauss-Legendre rule on [0, 1], panels graded dyadically
    towards 0 (the last panel reaches 0)."""
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = 0.5 * (x + 1.0), 0.5 * w
    edges = np.concatenate([0.5 ** np.arange(levels), [0.0]])
    hi, lo = edges[:-1, None], edges[1:, None]
    return (lo + (hi - lo) * x).ravel(), ((hi - lo) * w).ravel()


def radial_integral(k: Kernel, m: Manifold, radius):
    """sigma_{n-1} * int_0^radius K(t) s(t)^(n-1) dt, vectorised in radius.

    For Riesz kernels the substitution t = radius * u**(1/(n - alpha))
    absorbs t**(n-1-alpha), leaving the smooth factor (s(t)/t)**(n-1).
    """
    if k.kind == RIESZ and k.param >= m.dim:
        raise AdmissibilityError(f"Riesz exponent {k.param} not integrable in dimension {m.dim}")
    radius = np.asarray(radius, dtype=float)
    u, w = _gauss_unit()
    r = radius[..., None]
    n = m.dim
    if k.kind == RIESZ:
        p = 1.0 / (n - k.param)
        t = r * u ** p
        ratio = np.where(t > 0, warp(m, t) / np.where(t > 0, t, 1.0), 1.0)
        total = r[..., 0] ** (n - k.param) * p * np.sum(w * ratio ** (n - 1), axis=-1)
    else:
        t = r * u
        total = r[..., 0] * np.sum(w * evaluate(k, t) * warp(m, t) ** (n - 1), axis=-1)
    return sphere_area(n) * total


def cell_average(k: Kernel, m: Manifold, cell_measure):
    """Mean of K(d(x, .)) over the geodesic ball of measure ``cell_measure``
    centred at x. Vectorised over ``cell_measure``."""
    if k.kind == RIESZ and k.param >= m.dim:
        raise AdmissibilityError(f"Riesz exponent {k.param} not integrable in dimension {m.dim}")
    cell_measure = np.asarray(cell_measure, dtype=float)
    if np.any(cell_measure <= 0):
        raise UsageError("cell measure must be positive")
    if k.kind == CONSTANT:
        out = np.full_like(cell_measure, k.param)
    else:
        rho = radius_for_measure(m, cell_measure)
        out = radial_integral(k, m, rho) / cell_measure
    return float(out) if np.ndim(out) == 0 else out
