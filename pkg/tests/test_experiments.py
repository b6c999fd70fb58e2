import csv
import json

import numpy as np
import pytest

from isospec import cli
from isospec import geometry as geo
from isospec.domains import GeodesicBall, two_balls
from isospec.errors import AdmissibilityError, DomainError, EmptySelectionError, UsageError
from isospec.experiments import (ExperimentReport, hks_sweep, lambda1_report, rearrange_check, report_read,
                                 report_write, rfk_sweep, sign_split_check)
from isospec.geometry import Manifold
from isospec.kernels import Kernel
from isospec.quadrature import Quadrature, ball_rule, region_rule
from isospec.spectral import assemble, eigensolve, leading_eigenvalue

S2, H2 = Manifold.sphere(2), Manifold.hyperbolic(2)


def test_rfk_unperturbed_ball_matches():
    target = geo.ball_volume(S2, 0.7)
    rep = rfk_sweep(S2, Kernel.riesz(1.0), target, trials=1, seed=0, region_nodes=1500,
                    radial_nodes=16, angular_nodes=32, families=["perturbed_ball"], amplitude=0.0)
    assert rep.rows[0]["ratio_to_ball"] == pytest.approx(1.0, abs=0.02)
    assert rep.passed


def test_rfk_small_sweep_rows_and_verdicts():
    rep = rfk_sweep(H2, Kernel.riesz(0.5), 2.0, trials=4, seed=3, region_nodes=600,
                    radial_nodes=16, angular_nodes=32)
    assert len(rep.rows) == 4
    assert [r["lambda1"] for r in rep.rows] == sorted((r["lambda1"] for r in rep.rows), reverse=True)
    assert rep.verdict("ball_maximises_lambda1").status == "pass"
    assert rep.verdict("equal_measure").status == "pass"
    again = rfk_sweep(H2, Kernel.riesz(0.5), 2.0, trials=4, seed=3, region_nodes=600,
                      radial_nodes=16, angular_nodes=32)
    assert again.rows == rep.rows


def test_two_half_caps_lose_to_one_cap():
    k = Kernel.riesz(1.0)
    r = geo.radius_for_measure(S2, 1.0)
    one = leading_eigenvalue(assemble(ball_rule(S2, S2.origin(), r, 16, 32), k))
    half = geo.radius_for_measure(S2, 0.5)
    q = region_rule(two_balls(S2, half, 1.5), 1200, seed=0)
    assert leading_eigenvalue(assemble(q, k)) < one


def _mirror_union(m, radius, sep, radial=10, angular=20):
    qb = ball_rule(m, m.origin(), radius, radial, angular)
    nodes = np.concatenate([geo.translate(m, qb.nodes, -sep / 2), geo.translate(m, qb.nodes, sep / 2)])
    return Quadrature(nodes, np.concatenate([qb.weights, qb.weights]), two_balls(m, radius, sep))


def test_sign_split_symmetric_union():
    q = _mirror_union(H2, 0.5, 2.0)
    rep = sign_split_check(q, Kernel.exponential(1.0))
    assert rep.lambda1_plus == pytest.approx(rep.lambda1_minus, rel=1e-6)
    assert rep.measure_plus == pytest.approx(rep.measure_minus, rel=1e-12)
    assert rep.holds


def test_sign_split_single_ball():
    q = ball_rule(S2, S2.origin(), 0.8, 12, 24)
    rep = sign_split_check(q, Kernel.riesz(1.0), compare_balls=True, radial_nodes=12, angular_nodes=24)
    assert rep.holds
    assert rep.min_part >= rep.lambda2 * 0.99
    assert rep.ball_lambda1_plus >= rep.lambda1_plus * 0.99


def test_sign_split_needs_a_sign_change():
    q = ball_rule(S2, S2.origin(), 0.5, 4, 4)
    a = assemble(q, Kernel.constant(1.0))
    spec = eigensolve(a)
    fake = type(spec)(spec.eigenvalues, np.abs(spec.eigenvectors), spec.residuals, spec.norm)
    with pytest.raises(EmptySelectionError):
        sign_split_check(q, Kernel.constant(1.0), a=a, spectrum=fake)


def test_hks_small_case():
    k = Kernel.exponential(1.0)
    half = geo.ball_volume(H2, 0.6)
    rep = hks_sweep(k, half, [2.0, 4.0, 8.0], nodes_per_ball=200)
    assert [r["separation"] for r in rep.rows] == [2.0, 4.0, 8.0]
    gaps = [r["gap"] for r in rep.rows]
    assert gaps[0] > gaps[1] > gaps[2]
    last = rep.rows[-1]
    # cross terms scale like the kernel across the gap between the balls
    for term in ("I2", "I3"):
        assert abs(last[term]) <= 10 * np.exp(-8.0 + 1.2) * last["I1"]
    assert last["I4"] == pytest.approx(last["gamma"] ** 2 * last["I1"], rel=1e-10)
    for claim in ("lambda2_below_lambda1", "gap_non_increasing", "final_gap", "no_optimizer",
                  "test_vector_bound", "min_side_bound"):
        assert rep.verdict(claim).status == "pass", claim


def test_hks_rejects_bad_setups():
    half = geo.ball_volume(H2, 0.6)
    with pytest.raises(DomainError):
        hks_sweep(Kernel.exponential(1.0), half, [1.0])
    with pytest.raises(AdmissibilityError):
        hks_sweep(Kernel.constant(1.0), half, [4.0])
    with pytest.raises(UsageError):
        hks_sweep(Kernel.exponential(1.0), 1.0, [2.0], manifold=S2)


def test_rearrange_check_small():
    rep = rearrange_check(S2, Kernel.riesz(1.0), trials=4, seed=1, region_nodes=500)
    assert [r["function"] for r in rep.rows] == ["eigenfunction", "bump"] * 2
    assert rep.passed
    assert rep.verdict("norm_preserved").margin == 0.0


def test_lambda1_report_on_ball():
    rep = lambda1_report(H2, Kernel.riesz(1.0), GeodesicBall(H2, H2.origin(), 0.8), nodes=512)
    assert rep.passed
    assert rep.rows[0]["lambda1"] > rep.rows[0]["lambda2"] > 0


@pytest.fixture(scope="module")
def small_report():
    return rfk_sweep(S2, Kernel.riesz(1.0), 1.0, trials=2, seed=0, region_nodes=300,
                     radial_nodes=8, angular_nodes=16)


def test_json_roundtrip(small_report, tmp_path):
    path = report_write(small_report, tmp_path / "sub" / "r.json")
    back = report_read(path)
    assert back == small_report
    assert json.loads(path.read_text())["experiment"] == "rfk_sweep"


def test_csv_header(small_report, tmp_path):
    path = report_write(small_report, tmp_path / "r.csv", "csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["trial", "domain", "measure", "lambda1", "ratio_to_ball"]
    assert len(rows) == 3


def test_unknown_format(small_report, tmp_path):
    with pytest.raises(UsageError):
        report_write(small_report, tmp_path / "r.xml", "xml")


def test_report_add_and_passed():
    rep = ExperimentReport("lambda1", "S2", 2, "riesz:alpha=1")
    rep.add("a", None, 0.0)
    assert rep.passed
    rep.add("b", False, -1.0)
    assert not rep.passed
    with pytest.raises(KeyError):
        rep.verdict("c")


def test_cli_lambda1(tmp_path, capsys):
    out = tmp_path / "l1.json"
    code = cli.main(["lambda1", "--manifold", "sphere", "--kernel", "riesz:alpha=1.0",
                     "--domain", "ball:radius=0.8", "--nodes", "256", "--out", str(out)])
    assert code == 0
    assert "PASS  lambda1_positive" in capsys.readouterr().out
    assert report_read(out).rows[0]["lambda1"] > 0


def test_cli_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code = cli.main(["rearrange-check", "--manifold", "hyperbolic", "--kernel", "exp:beta=1",
                     "--trials", "2", "--nodes", "300", "--format", "csv"])
    assert code == 0
    header = (tmp_path / "rearrange-check.csv").read_text().splitlines()[0]
    assert header == "trial,domain,function,lhs,rhs,ratio,norm,norm_rearranged"


def test_cli_errors(capsys):
    assert cli.main(["lambda1", "--manifold", "sphere", "--kernel", "riesz:alpha=2.0",
                     "--domain", "ball:radius=0.8"]) == 2
    assert "isospec: error:" in capsys.readouterr().err
    assert cli.main(["hks-sweep", "--kernel", "exp:beta=1", "--half-measure", "1.2",
                     "--separations", "0.5"]) == 2
    with pytest.raises(SystemExit):
        cli.main(["lambda1", "--manifold", "torus", "--kernel", "exp:beta=1", "--domain", "ball:radius=1"])


def test_cli_hks_and_rfk(tmp_path):
    assert cli.main(["hks-sweep", "--kernel", "exp:beta=1", "--half-measure", "1.2",
                     "--separations", "3,5", "--nodes-per-ball", "128",
                     "--out", str(tmp_path / "h.json")]) == 1
    rep = report_read(tmp_path / "h.json")
    assert len(rep.rows) == 2
    # balls only 5 apart are still coupled above the 1% tolerance
    assert rep.verdict("final_gap").status == "fail"
    assert cli.main(["rfk-sweep", "--manifold", "euclidean", "--kernel", "riesz:alpha=1.0",
                     "--measure", "1.0", "--trials", "2", "--nodes", "300",
                     "--out", str(tmp_path / "r.csv"), "--format", "csv"]) == 0
