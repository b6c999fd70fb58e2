"""Experiment drivers and their persisted reports.

* :func:`rfk_sweep` -- the centred ball against random domains of equal
  measure (largest first eigenvalue).
* :func:`sign_split_check` -- positive/negative parts of the second
  eigenvector and the bound min(l1(O+), l1(O-)) >= l2(O).
* :func:`hks_sweep` -- two identical balls drifting apart; l2 of the union
  approaches l1 of one ball from below.
* :func:`rearrange_check` -- double-integral comparison under
  symmetric-decreasing rearrangement.

Every trial draws its random stream from ``(seed, trial)`` so results do
not depend on execution order.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import geometry as geo
from .domains import GeodesicBall, random_domain, two_balls
from .errors import AdmissibilityError, DomainError, GenerationError, UsageError
from .geometry import Manifold
from .kernels import Kernel
from .quadrature import DEFAULT_ANGULAR, DEFAULT_RADIAL, Quadrature, ball_rule, region_rule, restrict
from .rearrange import riesz_sobolev_check
from .spectral import (OperatorMatrix, SpectralResult, assemble, eigensolve, jentsch_check,
                       leading_eigenvalue)

PASS, FAIL, SKIP = "pass", "fail", "skip"

CSV_COLUMNS = {
    "rfk_sweep": ["trial", "domain", "measure", "lambda1", "ratio_to_ball"],
    "hks_sweep": ["separation", "lambda1_union", "lambda2", "lambda1_ball", "gap", "lower_bound",
                  "gamma", "I1", "I2", "I3", "I4", "min_eigenvalue", "lambda1_plus",
                  "lambda1_minus"],
    "rearrange_check": ["trial", "domain", "function", "lhs", "rhs", "ratio", "norm",
                        "norm_rearranged"],
    "lambda1": ["domain", "measure", "nodes", "lambda1", "lambda2", "gap", "eigenfunction_positive"],
}


@dataclass
class Verdict:
    claim: str
    status: str
    margin: float
    note: str = ""


@dataclass
class ExperimentReport:
    experiment: str
    manifold: str
    dim: int
    kernel: str
    config: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True unless some verdict failed (skips count as passing)."""
        return all(v.status != FAIL for v in self.verdicts)

    def verdict(self, claim: str) -> Verdict:
        for v in self.verdicts:
            if v.claim == claim:
                return v
        raise KeyError(claim)

    def add(self, claim: str, ok: bool | None, margin: float, note: str = ""):
        status = SKIP if ok is None else (PASS if ok else FAIL)
        self.verdicts.append(Verdict(claim, status, float(margin), note))


def _child_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _clean(value):
    """JSON-friendly copy: numpy scalars/arrays to Python objects."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    return value


# ---------------------------------------------------------------- RFK


def rfk_sweep(m: Manifold, k: Kernel, target_measure: float, trials: int, seed: int,
              slack: float = 0.02, region_nodes: int = 1500,
              radial_nodes: int = DEFAULT_RADIAL, angular_nodes: int = DEFAULT_ANGULAR,
              families: list[str] | None = None, amplitude: float | None = None) -> ExperimentReport:
    """Compare l1 of random equal-measure domains with l1 of the ball.

    ``families`` cycles over the trials; by default perturbed balls and
    unions of two or three balls alternate (balls only when dim != 2).
    """
    if trials < 1:
        raise UsageError("trials must be at least 1")
    if families is None:
        families = ["perturbed_ball", "disjoint_balls:2", "disjoint_balls:3"] if m.dim == 2 \
            else ["disjoint_balls:2", "disjoint_balls:3"]
    radius = geo.radius_for_measure(m, target_measure)
    ball_q = ball_rule(m, m.origin(), radius, radial_nodes, angular_nodes)
    ball_spec = eigensolve(assemble(ball_q, k), count=2)
    lam_ball = ball_spec.lambda1

    report = ExperimentReport("rfk_sweep", m.name, m.dim, k.spec(), config={
        "target_measure": target_measure, "trials": trials, "seed": seed, "slack": slack,
        "region_nodes": region_nodes, "radial_nodes": radial_nodes,
        "angular_nodes": angular_nodes, "families": list(families), "amplitude": amplitude,
    })
    report.summary.update(ball_radius=radius, ball_lambda1=lam_ball, ball_lambda2=ball_spec.lambda2)

    for trial in range(trials):
        family, _, count = families[trial % len(families)].partition(":")
        child = _child_seed(seed, trial)
        try:
            dom = random_domain(m, family, target_measure, seed=child, count=int(count or 2),
                                amplitude=amplitude)
        except (GenerationError, DomainError) as exc:
            raise type(exc)(f"trial {trial}: {exc}") from exc
        q = region_rule(dom, region_nodes, seed=child)
        spec = eigensolve(assemble(q, k), count=2)
        report.rows.append({
            "trial": trial,
            "domain": dom.describe(),
            "measure": dom.measure(),
            "lambda1": spec.lambda1,
            "ratio_to_ball": spec.lambda1 / lam_ball,
            "lambda2": spec.lambda2,
            "rule_measure": q.total_weight,
            "record": _clean(dom.to_record()),
        })
    report.rows.sort(key=lambda row: -row["lambda1"])
    worst = max(row["ratio_to_ball"] for row in report.rows)
    report.add("ball_maximises_lambda1", worst <= 1 + slack, 1 + slack - worst,
               f"max lambda1(domain)/lambda1(ball) = {worst:.6f}")
    off = max(abs(row["measure"] / target_measure - 1) for row in report.rows)
    report.add("equal_measure", off <= 5e-3, 5e-3 - off)
    return report


# ---------------------------------------------------------------- sign split


@dataclass
class SignSplitReport:
    lambda2: float
    lambda1_plus: float
    lambda1_minus: float
    holds: bool | None
    measure_plus: float
    measure_minus: float
    ball_lambda1_plus: float | None = None
    ball_lambda1_minus: float | None = None
    note: str = ""

    @property
    def min_part(self) -> float:
        return min(self.lambda1_plus, self.lambda1_minus)


def _ball_lambda1(m: Manifold, k: Kernel, measure: float, radial: int, angular: int) -> float:
    r = geo.radius_for_measure(m, measure)
    return leading_eigenvalue(assemble(ball_rule(m, m.origin(), r, radial, angular), k))


def sign_split_check(q: Quadrature, k: Kernel, tol: float = 0.01,
                     a: OperatorMatrix | None = None, spectrum: SpectralResult | None = None,
                     compare_balls: bool = False, radial_nodes: int = DEFAULT_RADIAL,
                     angular_nodes: int = DEFAULT_ANGULAR) -> SignSplitReport:
    """Split the rule by the sign of u2 and compare l1 of each part with l2.

    The sub-operators are principal submatrices of the assembled matrix,
    i.e. exactly the operators assembled on the restricted rules. With
    ``compare_balls`` the parts are also compared with balls of the same
    measure.

    Raises
    ------
    EmptySelectionError
        If u2 does not change sign.
    """
    a = assemble(q, k) if a is None else a
    spectrum = eigensolve(a, count=2) if spectrum is None else spectrum
    lam2 = spectrum.lambda2
    u2 = spectrum.u2
    plus = u2 >= -1e-12 * np.max(np.abs(u2))
    q_plus = restrict(q, plus)
    q_minus = restrict(q, ~plus)
    ent = a.entries
    l_plus = leading_eigenvalue(ent[np.ix_(plus, plus)])
    l_minus = leading_eigenvalue(ent[np.ix_(~plus, ~plus)])
    out = SignSplitReport(lam2, l_plus, l_minus, None, q_plus.total_weight, q_minus.total_weight)
    if lam2 <= 0:
        out.note = f"hypothesis violated: lambda2 = {lam2:.3e} <= 0"
        return out
    out.holds = min(l_plus, l_minus) >= lam2 * (1 - tol)
    if compare_balls:
        m = q.manifold
        out.ball_lambda1_plus = _ball_lambda1(m, k, out.measure_plus, radial_nodes, angular_nodes)
        out.ball_lambda1_minus = _ball_lambda1(m, k, out.measure_minus, radial_nodes, angular_nodes)
    return out


# ---------------------------------------------------------------- HKS


def _grid_for(nodes_per_ball: int) -> tuple[int, int]:
    radial = max(4, int(round(math.sqrt(nodes_per_ball / 2))))
    return radial, max(4, int(round(nodes_per_ball / radial)))


def hks_sweep(k: Kernel, half_measure: float, separations, nodes_per_ball: int = 600,
              seed: int = 0, manifold: Manifold | None = None, coupling_tol: float = 0.01,
              chain_tol: float = 0.01, ceiling_tol: float = 0.01) -> ExperimentReport:
    """Two identical balls of measure ``half_measure`` with centres
    ``separation`` apart along a fixed geodesic through the origin.

    Each ball carries the same product rule (``nodes_per_ball`` nodes), so
    the union rule is a pair of isometric copies and l2(union) tends to
    l1(ball) in the discrete setting too. Per separation the report keeps
    l1, l2 of the union, the orthogonalised two-bump test vector bound and
    its four terms I1..I4, and the sign-split parts.

    Raises
    ------
    DomainError
        If the balls would overlap (separation <= 2 * radius).
    """
    m = Manifold.hyperbolic(2) if manifold is None else manifold
    if m.compact:
        raise UsageError("the two-ball limit needs a decaying kernel on a non-compact space")
    if not k.decays:
        raise AdmissibilityError("kernel must tend to 0 at infinity for the two-ball experiment")
    seps = sorted(float(s) for s in separations)
    radius = geo.radius_for_measure(m, half_measure)
    if any(s <= 2 * radius for s in seps):
        raise DomainError(f"separations must exceed 2 * radius = {2 * radius:.6g}")
    radial, angular = _grid_for(nodes_per_ball)
    qb = ball_rule(m, m.origin(), radius, radial, angular)
    nb = qb.size
    ball_spec = eigensolve(assemble(qb, k), count=1)
    lam_ball = ball_spec.lambda1

    report = ExperimentReport("hks_sweep", m.name, m.dim, k.spec(), config={
        "half_measure": half_measure, "separations": seps, "nodes_per_ball": nb,
        "radial_nodes": radial, "angular_nodes": angular, "seed": seed,
        "coupling_tol": coupling_tol, "chain_tol": chain_tol, "ceiling_tol": ceiling_tol,
    })
    report.summary.update(ball_radius=radius, lambda1_ball=lam_ball)

    for sep in seps:
        dom = two_balls(m, radius, sep)
        nodes = np.concatenate([geo.translate(m, qb.nodes, -sep / 2), geo.translate(m, qb.nodes, sep / 2)])
        q = Quadrature(nodes, np.concatenate([qb.weights, qb.weights]), dom,
                       info={"rule": "two-ball", "separation": sep})
        a = assemble(q, k)
        spec = eigensolve(a)
        ent = a.entries
        blocks = (slice(0, nb), slice(nb, 2 * nb))
        u_plus = _positive(eigensolve(ent[blocks[0], blocks[0]], count=1).u1)
        u_minus = _positive(eigensolve(ent[blocks[1], blocks[1]], count=1).u1)
        u1 = _positive(spec.u1)
        gamma = -float(u_plus @ u1[blocks[0]]) / float(u_minus @ u1[blocks[1]])
        i1 = float(u_plus @ ent[blocks[0], blocks[0]] @ u_plus)
        i2 = gamma * float(u_plus @ ent[blocks[0], blocks[1]] @ u_minus)
        i3 = gamma * float(u_minus @ ent[blocks[1], blocks[0]] @ u_plus)
        i4 = gamma ** 2 * float(u_minus @ ent[blocks[1], blocks[1]] @ u_minus)
        lower = (i1 + i2 + i3 + i4) / (1 + gamma ** 2)
        split = sign_split_check(q, k, tol=chain_tol, a=a, spectrum=spec, compare_balls=True,
                                 radial_nodes=radial, angular_nodes=angular)
        report.rows.append({
            "separation": sep,
            "lambda1_union": spec.lambda1,
            "lambda2": spec.lambda2,
            "lambda1_ball": lam_ball,
            "gap": abs(lam_ball - spec.lambda2),
            "lower_bound": lower,
            "gamma": gamma,
            "I1": i1, "I2": i2, "I3": i3, "I4": i4,
            "min_eigenvalue": float(spec.eigenvalues.min()),
            "lambda1_plus": split.lambda1_plus,
            "lambda1_minus": split.lambda1_minus,
            "ball_lambda1_plus": split.ball_lambda1_plus,
            "ball_lambda1_minus": split.ball_lambda1_minus,
            "chain_holds": split.holds,
            "max_cross_kernel": float(k(sep - 2 * radius)),
        })

    rows = report.rows
    hyp = [r["lambda2"] > 0 for r in rows]
    live = [r for r, h in zip(rows, hyp) if h]
    skip_note = "" if all(hyp) else f"{hyp.count(False)} separation(s) skipped: lambda2 <= 0"

    psd = [r["min_eigenvalue"] >= -1e-10 * r["lambda1_union"] for r in rows]
    worst_min = min(r["min_eigenvalue"] / r["lambda1_union"] for r in rows)
    if all(psd):
        report.add("operator_positive", True, worst_min)
    else:
        report.add("operator_positive", None, worst_min,
                   "operator not positive semidefinite; verdicts keyed on lambda2 > 0 instead")
    if not live:
        for claim in ("lambda2_below_lambda1", "min_side_bound", "gap_non_increasing",
                      "final_gap", "no_optimizer", "test_vector_bound"):
            report.add(claim, None, 0.0, skip_note)
        return report

    m_a = min(r["lambda1_union"] - r["lambda2"] for r in live)
    report.add("lambda2_below_lambda1", m_a >= 0, m_a, skip_note)
    m_b = min(min(r["ball_lambda1_plus"], r["ball_lambda1_minus"]) - r["lambda2"] * (1 - chain_tol)
              for r in live)
    report.add("min_side_bound", m_b >= 0, m_b, skip_note)
    gaps = [r["gap"] for r in live]
    steps = np.diff(gaps)
    m_c = -float(np.max(steps)) if len(steps) else 0.0
    report.add("gap_non_increasing", m_c >= 0, m_c, skip_note)
    m_d = coupling_tol * lam_ball - gaps[-1]
    report.add("final_gap", m_d >= 0, m_d, f"final gap {gaps[-1]:.3e}")
    m_e = min(lam_ball * (1 + ceiling_tol) - r["lambda2"] for r in live)
    report.add("no_optimizer", m_e > 0, m_e, skip_note)
    m_f = min(r["lambda2"] * (1 + 1e-10) - r["lower_bound"] for r in live)
    report.add("test_vector_bound", m_f >= 0, m_f, skip_note)
    return report


def _positive(v: np.ndarray) -> np.ndarray:
    return v if v.sum() >= 0 else -v


# ---------------------------------------------------------------- rearrangement


def smooth_bump(m: Manifold, q: Quadrature, rng, bumps: int = 3) -> np.ndarray:
    """Non-negative sum of Gaussian bumps in geodesic distance, centred at
    random nodes of ``q``."""
    centers = q.nodes[rng.choice(q.size, size=bumps, replace=False)]
    scale = geo.radius_for_measure(m, q.total_weight)
    width = rng.uniform(0.2, 0.6, size=bumps) * scale
    amp = rng.uniform(0.5, 1.5, size=bumps)
    d = geo.pairwise_distances(m, q.nodes, centers)
    return np.sum(amp * np.exp(-0.5 * (d / width) ** 2), axis=1)


def rearrange_check(m: Manifold, k: Kernel, trials: int, seed: int, slack: float = 0.02,
                    region_nodes: int = 1200, target_measure: float | None = None) -> ExperimentReport:
    """Double integrals of first eigenfunctions (even trials) and random
    smooth bumps (odd trials) before and after rearrangement."""
    if target_measure is None:
        target_measure = geo.ball_volume(m, 0.8)
    families = ["disjoint_balls:2", "perturbed_ball"] if m.dim == 2 else ["disjoint_balls:2", "disjoint_balls:3"]
    report = ExperimentReport("rearrange_check", m.name, m.dim, k.spec(), config={
        "trials": trials, "seed": seed, "slack": slack, "region_nodes": region_nodes,
        "target_measure": target_measure, "families": families,
    })
    for trial in range(trials):
        child = _child_seed(seed, trial)
        rng = np.random.default_rng(child)
        family, _, count = families[(trial // 2) % len(families)].partition(":")
        dom = random_domain(m, family, target_measure, seed=child, count=int(count or 2))
        q = region_rule(dom, region_nodes, seed=child)
        a = assemble(q, k)
        if trial % 2 == 0:
            spec = eigensolve(a, count=1)
            u = np.maximum(a.to_values(_positive(spec.u1)), 0.0)
            kind = "eigenfunction"
        else:
            u = smooth_bump(m, q, rng)
            kind = "bump"
        res = riesz_sobolev_check(q, k, u, slack=slack, seed=child, a=a)
        report.rows.append({
            "trial": trial, "domain": dom.describe(), "function": kind,
            "lhs": res.lhs, "rhs": res.rhs, "ratio": res.ratio,
            "norm": res.norm, "norm_rearranged": res.norm_rearranged, "holds": res.holds,
        })
    worst = min(r["ratio"] for r in report.rows)
    report.add("riesz_sobolev", all(r["holds"] for r in report.rows), worst - (1 - slack),
               f"min rhs/lhs = {worst:.6f}")
    exact = all(r["norm"] == r["norm_rearranged"] for r in report.rows)
    drift = max(abs(r["norm"] - r["norm_rearranged"]) for r in report.rows)
    report.add("norm_preserved", exact, -drift)
    return report


def lambda1_report(m: Manifold, k: Kernel, domain, nodes: int = 2048, seed: int = 0) -> ExperimentReport:
    """Leading eigenpairs of one domain; balls use the product rule."""
    if isinstance(domain, GeodesicBall):
        radial, angular = _grid_for(nodes)
        q = ball_rule(m, domain.center, domain.radius, radial, angular)
    else:
        q = region_rule(domain, nodes, seed=seed)
    spec = eigensolve(assemble(q, k), count=2)
    jr = jentsch_check(spec)
    report = ExperimentReport("lambda1", m.name, m.dim, k.spec(), config={"nodes": q.size, "seed": seed})
    report.rows.append({
        "domain": domain.describe(), "measure": domain.measure(), "nodes": q.size,
        "lambda1": spec.lambda1, "lambda2": spec.lambda2, "gap": jr.gap,
        "eigenfunction_positive": jr.eigenfunction_positive,
        "record": _clean(domain.to_record()),
    })
    report.add("lambda1_positive", jr.lambda1_positive, spec.lambda1)
    report.add("eigenfunction_positive", jr.eigenfunction_positive, jr.min_ratio)
    report.add("lambda1_simple", jr.simple, jr.gap)
    return report


# ---------------------------------------------------------------- persistence


def report_to_dict(r: ExperimentReport) -> dict:
    return _clean(asdict(r))


def report_from_dict(data: dict) -> ExperimentReport:
    data = dict(data)
    data["verdicts"] = [Verdict(**v) for v in data.get("verdicts", [])]
    return ExperimentReport(**data)


def report_write(r: ExperimentReport, path, format: str = "json") -> Path:
    """Write a report as JSON (full) or CSV (one row per trial/separation)."""
    path = Path(path)
    if format not in ("json", "csv"):
        raise UsageError(f"unknown report format {format!r}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if format == "json":
            path.write_text(json.dumps(report_to_dict(r), indent=2) + "\n")
        else:
            columns = CSV_COLUMNS[r.experiment]
            with path.open("w", newline="") as fh:
                writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
                writer.writeheader()
                for row in r.rows:
                    writer.writerow(_clean(row))
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path


def report_read(path) -> ExperimentReport:
    path = Path(path)
    try:
        return report_from_dict(json.loads(path.read_text()))
    except OSError as exc:
        raise OSError(f"cannot read report from {path}: {exc}") from exc
