"""Symmetrised Nystrom discretisation of K_Omega and its spectrum.

For a rule with nodes x_i and weights w_i the operator matrix is

    A_ij = sqrt(w_i w_j) K(d(x_i, x_j))     (i != j)
    A_ii = w_i * <K over the cell of measure w_i>

which is similar to the weighted Nystrom matrix ``K(d_ij) w_j``. A vector
``v`` in these coordinates corresponds to node values ``v_i / sqrt(w_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from . import geometry as geo
from .errors import AdmissibilityError, AssemblyError, SolverError, UsageError
from .kernels import RIESZ, Kernel, cell_average, evaluate
from .quadrature import Quadrature

COINCIDENT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    quadrature: Quadrature
    kernel: Kernel

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def sqrt_weights(self) -> np.ndarray:
        return np.sqrt(self.quadrature.weights)

    def to_values(self, v):
        """Weighted coordinates -> node values of the function."""
        return np.asarray(v) / self.sqrt_weights[:, None] if np.ndim(v) == 2 else np.asarray(v) / self.sqrt_weights

    def from_values(self, u):
        """Node values -> weighted coordinates."""
        return np.asarray(u) * (self.sqrt_weights[:, None] if np.ndim(u) == 2 else self.sqrt_weights)


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Eigenpairs ordered by modulus, descending.

    ``eigenvectors`` holds orthonormal columns in weighted coordinates.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    norm: float
    info: dict = field(default_factory=dict)

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1]) if len(self.eigenvalues) > 1 else 0.0

    @property
    def u1(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    @property
    def u2(self) -> np.ndarray:
        return self.eigenvectors[:, 1]


def _kernel_matrix(k: Kernel, dist: np.ndarray) -> np.ndarray:
    if k.kind == RIESZ:
        with np.errstate(divide="ignore"):
            return np.power(dist, -k.param, out=dist)
    return evaluate(k, dist)


def assemble(q: Quadrature, k: Kernel) -> OperatorMatrix:
    """Dense symmetric operator matrix of ``K_Omega`` on the rule ``q``.

    Raises
    ------
    AssemblyError
        If two nodes coincide (distance < 1e-12) and the kernel is singular.
    AdmissibilityError
        If a Riesz exponent is not below the manifold dimension.
    """
    m = q.manifold
    if k.kind == RIESZ and k.param >= m.dim:
        raise AdmissibilityError(f"Riesz exponent {k.param} not admissible on {m}")
    n = q.size
    dist = geo.pairwise_distances(m, q.nodes)
    np.fill_diagonal(dist, np.inf)
    if k.singular:
        close = np.argwhere(np.triu(dist < COINCIDENT_TOL, 1))
        if len(close):
            i, j = close[0]
            raise AssemblyError(f"nodes {i} and {j} coincide (distance {dist[i, j]:.3e})")
    a = _kernel_matrix(k, dist)
    sw = np.sqrt(q.weights)
    a *= sw[:, None]
    a *= sw[None, :]
    # mirror the upper triangle so the matrix is bitwise symmetric
    for s in range(0, n, 512):
        a[s:s + 512, :s] = a[:s, s:s + 512].T
    w_unique, inverse = np.unique(q.weights, return_inverse=True)
    diag = w_unique * np.atleast_1d(cell_average(k, m, w_unique))
    np.fill_diagonal(a, diag[inverse])
    return OperatorMatrix(a, q, k)


def _order(values: np.ndarray) -> np.ndarray:
    """Indices sorting by modulus descending, positive first on ties,
    then by original position."""
    idx = np.arange(len(values))
    return np.lexsort((idx, values < 0, -np.abs(values)))


def eigensolve(a: OperatorMatrix | np.ndarray, count: int | None = None) -> SpectralResult:
    """All eigenpairs (or the ``count`` largest in modulus) of a dense
    symmetric matrix, ordered by modulus.

    With ``count`` set, only the ``count`` algebraically largest and
    smallest pairs are computed; the leading ``count`` by modulus are
    always among them.
    """
    mat = a.entries if isinstance(a, OperatorMatrix) else np.asarray(a, dtype=float)
    n = mat.shape[0]
    if n < 1 or mat.shape != (n, n):
        raise UsageError("need a non-empty square matrix")
    try:
        if count is None or 2 * count >= n:
            vals, vecs = linalg.eigh(mat, driver="evd")
        else:
            top_v, top_x = linalg.eigh(mat, subset_by_index=[n - count, n - 1], driver="evr")
            bot_v, bot_x = linalg.eigh(mat, subset_by_index=[0, count - 1], driver="evr")
            vals = np.concatenate([bot_v, top_v])
            vecs = np.concatenate([bot_x, top_x], axis=1)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"dense symmetric eigensolver failed for N={n}: {exc}") from exc
    order = _order(vals)
    if count is not None:
        order = order[:count]
    vals, vecs = vals[order], vecs[:, order]
    residuals = np.linalg.norm(mat @ vecs - vecs * vals, axis=0)
    norm = float(np.max(np.abs(vals))) if count is None else float(abs(vals[0]))
    return SpectralResult(vals, vecs, residuals, norm, info={"n": n, "partial": count is not None})


def leading_eigenvalue(a: OperatorMatrix | np.ndarray) -> float:
    """Largest-modulus eigenvalue only (cheapest dense route)."""
    mat = a.entries if isinstance(a, OperatorMatrix) else np.asarray(a, dtype=float)
    n = mat.shape[0]
    hi = linalg.eigh(mat, eigvals_only=True, subset_by_index=[n - 1, n - 1], driver="evr")[0]
    lo = linalg.eigh(mat, eigvals_only=True, subset_by_index=[0, 0], driver="evr")[0]
    return float(hi if hi >= -lo else lo)


def rayleigh_quotient(a: OperatorMatrix | np.ndarray, f) -> float:
    """(f . A f) / (f . f) for f in weighted coordinates."""
    mat = a.entries if isinstance(a, OperatorMatrix) else np.asarray(a, dtype=float)
    f = np.asarray(f, dtype=float)
    if f.shape != (mat.shape[0],):
        raise UsageError("vector length does not match the operator")
    ff = float(f @ f)
    if ff == 0:
        raise UsageError("Rayleigh quotient of the zero vector")
    return float(f @ (mat @ f)) / ff


def bilinear_form(q: Quadrature, k: Kernel, u, a: OperatorMatrix | None = None) -> float:
    """Discrete double integral sum_ij w_i w_j u_i u_j K(d_ij) of a
    non-negative function given by node values ``u`` (diagonal
    cell-averaged). Pass a pre-assembled ``a`` to avoid reassembly."""
    u = np.asarray(u, dtype=float)
    if u.shape != (q.size,):
        raise UsageError("function values do not match the rule")
    if np.any(u < 0):
        raise UsageError("bilinear form is defined here for non-negative functions")
    if not np.any(u):
        return 0.0
    a = assemble(q, k) if a is None else a
    ut = np.sqrt(q.weights) * u
    return float(ut @ (a.entries @ ut))


@dataclass(frozen=True)
class JentschReport:
    lambda1: float
    lambda1_positive: bool
    simple: bool
    eigenfunction_positive: bool
    gap: float
    min_ratio: float

    @property
    def passed(self) -> bool:
        return self.lambda1_positive and self.simple and self.eigenfunction_positive


def jentsch_check(r: SpectralResult, gap_tol: float = 1e-6, sign_tol: float = 1e-8) -> JentschReport:
    """Check that lambda_1 is positive with multiplicity one and a one-signed
    eigenvector. ``gap`` is (|l1| - |l2|) / |l1|; small gaps are reported,
    not raised."""
    lam = r.eigenvalues
    l1 = float(lam[0])
    gap = (abs(l1) - abs(float(lam[1]))) / abs(l1) if len(lam) > 1 and l1 != 0 else 1.0
    u = r.u1
    u = u if u[np.argmax(np.abs(u))] > 0 else -u
    min_ratio = float(u.min() / u.max())
    return JentschReport(
        lambda1=l1,
        lambda1_positive=l1 > 0,
        simple=gap > gap_tol,
        eigenfunction_positive=min_ratio >= -sign_tol,
        gap=gap,
        min_ratio=min_ratio,
    )


def positive_first_eigenvector(r: SpectralResult) -> np.ndarray:
    u = r.u1
    return u if u.sum() >= 0 else -u
