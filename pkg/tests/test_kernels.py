import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isospec import geometry as geo
from isospec.errors import AdmissibilityError, SingularityError, UsageError
from isospec.geometry import Manifold
from isospec.kernels import Kernel, cell_average, evaluate, parse_kernel, radial_integral
from isospec.selftest import radial_integral_oracle

S2, H2, E2 = Manifold.sphere(2), Manifold.hyperbolic(2), Manifold.euclidean(2)

KERNELS = [Kernel.riesz(0.5), Kernel.riesz(1.0), Kernel.riesz(1.9), Kernel.exponential(1.0),
           Kernel.exponential(3.0), Kernel.constant(2.0)]


@pytest.mark.parametrize("k, rho, expected", [
    (Kernel.riesz(1.0), 2.0, 0.5),
    (Kernel.exponential(1.0), 0.0, 1.0),
    (Kernel.riesz(1.5), 1.0, 1.0),
    (Kernel.constant(3.0), 7.0, 3.0),
])
def test_eval_examples(k, rho, expected):
    assert evaluate(k, rho) == expected


def test_riesz_singular_at_zero():
    with pytest.raises(SingularityError):
        evaluate(Kernel.riesz(1.0), 0.0)


@pytest.mark.parametrize("k", KERNELS, ids=lambda k: k.spec())
@settings(max_examples=50, deadline=None)
@given(a=st.floats(1e-6, 50.0), b=st.floats(1e-6, 50.0))
def test_monotone_and_positive(k, a, b):
    lo, hi = min(a, b), max(a, b)
    assert evaluate(k, lo) >= evaluate(k, hi)
    assert evaluate(k, hi) > 0 or k.kind == "exp"  # exp underflows only far beyond rho = 50


def test_admissibility_at_construction():
    with pytest.raises(AdmissibilityError):
        Kernel.riesz(2.0, dim=2)
    with pytest.raises(AdmissibilityError):
        Kernel.riesz(0.0)
    with pytest.raises(AdmissibilityError):
        Kernel.exponential(-1.0)
    with pytest.raises(AdmissibilityError):
        Kernel.constant(0.0)
    assert Kernel.riesz(2.5, dim=3).param == 2.5


def test_parse_kernel():
    assert parse_kernel("riesz:alpha=1.0") == Kernel.riesz(1.0)
    assert parse_kernel("exp:beta=2") == Kernel.exponential(2.0)
    assert parse_kernel("const:c=1.5", dim=3) == Kernel.constant(1.5, dim=3)
    for bad in ("riesz:beta=1", "gauss:s=1", "riesz", "riesz:alpha=x"):
        with pytest.raises(UsageError):
            parse_kernel(bad)
    with pytest.raises(AdmissibilityError):
        parse_kernel("riesz:alpha=2.0")
    assert parse_kernel(Kernel.exponential(0.25).spec()) == Kernel.exponential(0.25)


def test_cell_average_constant():
    for cell in (1e-6, 0.1, 3.0):
        assert cell_average(Kernel.constant(2.5), S2, cell) == 2.5


def test_cell_average_euclidean_disk_closed_form():
    # mean of 1/|x| over a disk of radius rho is (2 pi rho) / (pi rho^2) = 2 / rho
    for rho in (1e-3, 0.05, 1.0):
        avg = cell_average(Kernel.riesz(1.0), E2, np.pi * rho ** 2)
        assert avg == pytest.approx(2.0 / rho, rel=1e-13)


def test_cell_average_sphere_cap_against_oracle():
    k = Kernel.riesz(1.0)
    cell = geo.ball_volume(S2, 0.1)
    oracle = radial_integral_oracle(S2, k, 0.1)
    assert oracle.converged
    avg = cell_average(k, S2, cell)
    assert np.isfinite(avg)
    assert avg == pytest.approx(oracle.value / cell, rel=1e-8)
    assert avg >= evaluate(k, 0.1)


@pytest.mark.parametrize("m", [S2, H2, E2, Manifold.sphere(3), Manifold.hyperbolic(3), Manifold.euclidean(1)],
                         ids=str)
def test_radial_integral_against_oracle(m):
    for k in (Kernel.riesz(0.3 * m.dim, m.dim), Kernel.riesz(0.95 * m.dim, m.dim), Kernel.exponential(1.0, m.dim)):
        for r in (1e-3, 0.3, 1.2):
            assert radial_integral(k, m, r) == pytest.approx(radial_integral_oracle(m, k, r).value, rel=1e-8)


def test_cell_average_at_least_boundary_value():
    for m in (S2, H2, E2):
        for k in KERNELS:
            cells = np.array([1e-5, 1e-3, 0.1])
            rho = geo.radius_for_measure(m, cells)
            assert np.all(cell_average(k, m, cells) >= evaluate(k, rho) * (1 - 1e-14))


def test_cell_average_converges_to_point_value_off_zero():
    # average over a ball around a point at distance 1 from the origin of
    # K(d(0, .)) tends to K(1); checked by halving cell sizes
    k = Kernel.exponential(1.0)
    m = S2
    center = geo.geodesic_point(m, m.origin(), [1, 0, 0], 1.0)
    errors = []
    from isospec.quadrature import ball_rule
    for r in (0.2, 0.1, 0.05):
        q = ball_rule(m, center, r, 16, 32)
        avg = q.integrate(k(geo.distance(m, m.origin(), q.nodes))) / q.total_weight
        errors.append(abs(avg - k(1.0)))
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1e-3


def test_cell_average_rejects_bad_input():
    with pytest.raises(UsageError):
        cell_average(Kernel.riesz(1.0), S2, 0.0)
    with pytest.raises(AdmissibilityError):
        cell_average(Kernel.riesz(1.5), Manifold.euclidean(1), 0.1)
