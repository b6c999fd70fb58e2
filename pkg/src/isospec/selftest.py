"""Brute-force oracles kept independent of the main numerical path.

Nothing here imports the quadrature, kernel or spectral modules: radial
integrals use plain midpoint panels on dyadically graded shells, and
small eigenproblems use Householder tridiagonalisation plus Sturm-count
bisection of the characteristic polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, UsageError
from .geometry import Manifold, sphere_area, warp


@dataclass(frozen=True)
class OracleConfig:
    panel_count: int = 1_000_000
    tolerance: float = 1e-8
    levels: int = 60

    def __post_init__(self):
        if self.panel_count < 1000:
            raise UsageError("panel_count must be at least 1000")


@dataclass(frozen=True)
class OracleValue:
    value: float
    error: float
    converged: bool

    def __float__(self):
        return self.value


def _shell_sums(g, r: float, levels: int, per_shell: int) -> np.ndarray:
    sums = np.empty(levels)
    mids = (np.arange(per_shell) + 0.5) / per_shell
    for j in range(levels):
        hi = r * 0.5 ** j
        lo = 0.5 * hi
        t = lo + (hi - lo) * mids
        sums[j] = np.sum(g(t)) * (hi - lo) / per_shell
    return sums


def _graded_integral(g, r: float, levels: int, per_shell: int) -> float:
    sums = _shell_sums(g, r, levels, per_shell)
    last, prev = sums[-1], sums[-2]
    if last == 0:
        return float(np.sum(sums))
    ratio = last / prev if prev != 0 else np.inf
    if not np.isfinite(ratio) or ratio >= 1.0 - 1e-9:
        raise DivergenceError(
            f"shell integrals do not decay near 0 (ratio {ratio:.6f}); the integral diverges")
    # the integrand is a pure power near 0, so the remaining shells form a geometric series
    return float(np.sum(sums) + last * ratio / (1.0 - ratio))


def radial_integral_oracle(m: Manifold, f, r: float, config: OracleConfig = OracleConfig()) -> OracleValue:
    """sigma_{n-1} * int_0^r f(t) s(t)^(n-1) dt by graded midpoint panels.

    Each dyadic shell (r 2^-(j+1), r 2^-j] gets the same number of panels,
    so integrable power singularities at 0 are resolved. The result is the
    Richardson extrapolation of the panel_count and 2*panel_count sums.

    Raises
    ------
    DivergenceError
        When shell contributions stop decaying towards the origin.
    """
    n = m.dim

    def g(t):
        return np.asarray(f(t), dtype=float) * warp(m, t) ** (n - 1)

    per_shell = max(config.panel_count // config.levels, 16)
    coarse = _graded_integral(g, r, config.levels, per_shell)
    fine = _graded_integral(g, r, config.levels, 2 * per_shell)
    value = (4.0 * fine - coarse) / 3.0
    error = abs(fine - coarse) / 3.0
    scale = sphere_area(n)
    return OracleValue(scale * value, scale * error, error <= config.tolerance * abs(value))


def _tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.array(a, dtype=float)
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        norm_x = np.sqrt(np.sum(x * x))
        if norm_x == 0:
            continue
        alpha = -norm_x if x[0] >= 0 else norm_x
        v = x
        v[0] -= alpha
        v /= np.sqrt(np.sum(v * v))
        a[k + 1:, :] -= 2.0 * np.outer(v, v @ a[k + 1:, :])
        a[:, k + 1:] -= 2.0 * np.outer(a[:, k + 1:] @ v, v)
    return np.diag(a).copy(), np.diag(a, 1).copy()


def _count_below(d: np.ndarray, e: np.ndarray, x: float) -> int:
    """Number of eigenvalues < x (sign changes of the Sturm sequence)."""
    count = 0
    q = d[0] - x
    tiny = 1e-300
    for i in range(len(d)):
        if i > 0:
            q = d[i] - x - e[i - 1] ** 2 / q
        if q == 0:
            q = -tiny
        if q < 0:
            count += 1
    return count


def eigen_oracle(matrix) -> np.ndarray:
    """Eigenvalues (ascending) of a symmetric matrix of order <= 6 by
    bisection on Sturm counts."""
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or n > 6 or n < 1:
        raise UsageError("eigen_oracle handles square matrices of order 1..6")
    if not np.allclose(a, a.T, rtol=1e-12, atol=1e-12 * np.max(np.abs(a), initial=0.0)):
        raise UsageError("eigen_oracle needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    if n == 1:
        return a[0].copy()
    d, e = _tridiagonalize(a)
    radius = np.max(np.abs(d) + np.concatenate([np.abs(e), [0]]) + np.concatenate([[0], np.abs(e)]))
    radius = radius * (1 + 1e-12) + 1e-300
    out = np.empty(n)
    for i in range(n):
        lo, hi = -radius, radius
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if _count_below(d, e, mid) >= i + 1:
                hi = mid
            else:
                lo = mid
        out[i] = 0.5 * (lo + hi)
    return out
