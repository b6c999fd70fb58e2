import numpy as np
import pytest

from isospec import geometry as geo
from isospec.domains import (DisjointBalls, GeodesicBall, PerturbedBall, SampledRegion, from_record,
                             indicator, measure, parse_domain, random_domain, two_balls)
from isospec.errors import DomainError, GenerationError, UsageError
from isospec.geometry import Manifold

S2, H2, E2 = Manifold.sphere(2), Manifold.hyperbolic(2), Manifold.euclidean(2)


def test_ball_measure():
    assert measure(GeodesicBall(S2, S2.origin(), np.pi / 2)) == pytest.approx(2 * np.pi)


def test_disjoint_balls_measure_is_additive():
    d = two_balls(H2, 0.5, 3.0)
    assert measure(d) == 2 * geo.ball_volume(H2, 0.5)
    d = DisjointBalls(S2, [[0, 0, 1], [1, 0, 0], [0, 1, 0]], [0.3, 0.2, 0.1])
    assert measure(d) == sum(geo.ball_volume(S2, r) for r in (0.3, 0.2, 0.1))


def test_disjointness_is_enforced():
    with pytest.raises(DomainError):
        two_balls(H2, 0.5, 1.0)
    with pytest.raises(DomainError):
        two_balls(H2, 0.5, 0.99)


def test_sampled_region_measure_close_to_closed_form():
    ball = GeodesicBall(H2, H2.origin(), 0.7)
    region = SampledRegion(H2, ball.contains, H2.origin(), 1.0, samples=100_000, seed=3)
    assert region.measure() == pytest.approx(ball.measure(), rel=0.02)


def test_indicator_open_set_convention():
    ball = GeodesicBall(S2, S2.origin(), 0.5)
    u = geo.tangent_frame(S2, S2.origin())[0]
    assert indicator(ball, S2.origin())
    assert not indicator(ball, geo.geodesic_point(S2, S2.origin(), u, 0.6))
    # exact boundary: build a point whose computed distance is the radius
    x = geo.geodesic_point(S2, S2.origin(), u, 0.5)
    d = geo.distance(S2, S2.origin(), x)
    assert not indicator(GeodesicBall(S2, S2.origin(), d), x)


def test_indicator_manifold_mismatch():
    ball = GeodesicBall(S2, S2.origin(), 0.5)
    with pytest.raises(UsageError):
        indicator(ball, [0.0, 0.0])
    with pytest.raises(UsageError):
        indicator(ball, [0.0, 0.0, 1.0], manifold=H2)


@pytest.mark.parametrize("m", [S2, H2, E2], ids=str)
def test_ball_indicator_matches_distance(m):
    rng = np.random.default_rng(1)
    ball = GeodesicBall(m, m.origin(), 0.8)
    from isospec.quadrature import sample_ball
    pts = sample_ball(m, m.origin(), 1.2, 500, seed=int(rng.integers(1 << 30)))
    np.testing.assert_array_equal(indicator(ball, pts), geo.distance(m, m.origin(), pts) < 0.8)


@pytest.mark.parametrize("m", [S2, H2, E2], ids=str)
def test_perturbed_ball_measure_against_sampling(m):
    d = PerturbedBall(m, m.origin(), 0.6, 0.3, 3)
    sampled = SampledRegion(m, d.contains, *d.enclosing, samples=200_000, seed=5)
    assert d.measure() == pytest.approx(sampled.measure(), rel=5e-3)
    flat = PerturbedBall(m, m.origin(), 0.6, 0.0, 3)
    assert flat.measure() == pytest.approx(geo.ball_volume(m, 0.6), rel=1e-13)


def test_perturbed_ball_invariants():
    with pytest.raises(DomainError):
        PerturbedBall(S2, S2.origin(), 2.5, 0.3, 2)
    with pytest.raises(DomainError):
        PerturbedBall(H2, H2.origin(), 0.5, 1.0, 2)
    with pytest.raises(DomainError):
        PerturbedBall(Manifold.hyperbolic(3), Manifold.hyperbolic(3).origin(), 0.5, 0.1, 2)


def test_random_disjoint_balls_example():
    d = random_domain(S2, "disjoint_balls", 1.0, seed=7, count=2)
    assert 0.995 <= measure(d) <= 1.005
    assert isinstance(d, DisjointBalls)


def test_random_domain_is_deterministic():
    a = random_domain(H2, "disjoint_balls", 2.0, seed=42, count=3)
    b = random_domain(H2, "disjoint_balls", 2.0, seed=42, count=3)
    np.testing.assert_array_equal(a.centers, b.centers)
    np.testing.assert_array_equal(a.radii, b.radii)
    p = random_domain(H2, "perturbed_ball", 2.0, seed=42)
    q = random_domain(H2, "perturbed_ball", 2.0, seed=42)
    assert p.to_record() == q.to_record()


def test_random_perturbed_with_zero_amplitude_is_the_ball():
    target = geo.ball_volume(S2, 0.8)
    d = random_domain(S2, "perturbed_ball", target, seed=1, amplitude=0.0)
    assert d.amplitude == 0
    assert d.base_radius == pytest.approx(0.8, rel=1e-12)


@pytest.mark.parametrize("m", [S2, H2, E2, Manifold.hyperbolic(3), Manifold.sphere(3)], ids=str)
def test_random_domains_hit_target_measure(m):
    target = geo.ball_volume(m, 0.8)
    for seed in range(10):
        for count in (2, 3):
            d = random_domain(m, "disjoint_balls", target, seed=seed, count=count)
            assert abs(measure(d) / target - 1) < 5e-3
        if m.dim == 2:
            d = random_domain(m, "perturbed_ball", target, seed=seed)
            assert abs(measure(d) / target - 1) < 5e-3


def test_random_domain_failures():
    with pytest.raises(GenerationError):
        random_domain(S2, "disjoint_balls", 0.95 * 4 * np.pi, seed=0, count=3, max_tries=5)
    with pytest.raises(UsageError):
        random_domain(S2, "blob", 1.0, seed=0)
    with pytest.raises(DomainError):
        random_domain(S2, "disjoint_balls", 20.0, seed=0)


def test_records_roundtrip():
    for d in (GeodesicBall(H2, H2.origin(), 0.4), two_balls(S2, 0.3, 1.0),
              PerturbedBall(E2, E2.origin(), 0.5, 0.2, 4)):
        back = from_record(d.manifold, d.to_record())
        assert back.to_record() == d.to_record()


def test_parse_domain():
    assert isinstance(parse_domain(S2, "ball:radius=0.8"), GeodesicBall)
    assert isinstance(parse_domain(H2, "balls:radius=0.5,separation=3"), DisjointBalls)
    p = parse_domain(H2, "perturbed:radius=0.5,amplitude=0.1,mode=3")
    assert (p.mode, p.amplitude) == (3, 0.1)
    with pytest.raises(UsageError):
        parse_domain(S2, "square:side=1")


def test_every_shape_inside_enclosing_ball():
    from isospec.quadrature import sample_ball
    for d in (two_balls(H2, 0.5, 3.0), PerturbedBall(S2, S2.origin(), 0.5, 0.3, 2),
              random_domain(S2, "disjoint_balls", 1.0, seed=3, count=3)):
        c, r = d.enclosing
        pts = sample_ball(d.manifold, c, min(r * 1.5, d.manifold.max_radius), 4000, seed=0)
        inside = d.contains(pts)
        assert np.all(geo.distance(d.manifold, c, pts[inside]) <= r)
