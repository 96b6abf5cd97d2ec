import numpy as np
import pytest

from conftest import random_simplex
from config.constants import MetricName, MetricDirection
from src.ldl_metrics.metrics import (
    per_instance_metric, metric_values, aggregate, score_report, ScoreReport
)
from src.error_handling.exceptions import ShapeMismatch, InvalidDistribution

IDENTITY = {
    MetricName.CHEBYSHEV: 0.0,
    MetricName.CLARK: 0.0,
    MetricName.CANBERRA: 0.0,
    MetricName.KL: 0.0,
    MetricName.COSINE: 1.0,
    MetricName.INTERSECTION: 1.0,
}


def test_directions():
    assert MetricName.CHEBYSHEV.direction is MetricDirection.DOWN
    assert MetricName.KL.direction is MetricDirection.DOWN
    assert MetricName.COSINE.direction is MetricDirection.UP
    assert MetricName.INTERSECTION.direction is MetricDirection.UP


def test_identity_values_are_exact(rng):
    for _ in range(100):
        d = random_simplex(rng, int(rng.integers(2, 10)), 1)[:, 0]
        for name, expected in IDENTITY.items():
            assert per_instance_metric(name, d, d) == expected


def test_hand_computed_pair():
    d, p = [0.5, 0.5], [1.0, 0.0]
    assert per_instance_metric(MetricName.CHEBYSHEV, d, p) == pytest.approx(0.5)
    assert per_instance_metric(MetricName.CLARK, d, p) == pytest.approx(1.054093, abs=1e-6)
    assert per_instance_metric(MetricName.CANBERRA, d, p) == pytest.approx(1.333333, abs=1e-6)
    assert per_instance_metric(MetricName.INTERSECTION, d, p) == pytest.approx(0.5)
    assert per_instance_metric(MetricName.COSINE, d, p) == pytest.approx(0.707107, abs=1e-6)
    expected_kl = 0.5 * np.log(0.5) + 0.5 * np.log(0.5 / 1e-12)
    assert per_instance_metric(MetricName.KL, d, p) == pytest.approx(expected_kl, rel=1e-12)


@pytest.mark.parametrize("t", np.linspace(0.0, 1.0, 20))
def test_chebyshev_family(t):
    d, p = [t, 1 - t], [1 - t, t]
    assert per_instance_metric(MetricName.CHEBYSHEV, d, p) == pytest.approx(abs(1 - 2 * t), abs=1e-12)


def test_zero_terms_contribute_nothing():
    d, p = [0.5, 0.5, 0.0], [0.25, 0.75, 0.0]
    assert np.isfinite(per_instance_metric(MetricName.CLARK, d, p))
    assert np.isfinite(per_instance_metric(MetricName.CANBERRA, d, p))


def test_symmetry(rng):
    D, P = random_simplex(rng, 5, 30), random_simplex(rng, 5, 30)
    for name in MetricName:
        if name is MetricName.KL:
            continue
        assert metric_values(name, D, P) == pytest.approx(metric_values(name, P, D), abs=1e-14)


def test_kl_is_asymmetric():
    d, p = [0.9, 0.1], [0.5, 0.5]
    assert per_instance_metric(MetricName.KL, d, p) != pytest.approx(per_instance_metric(MetricName.KL, p, d))


def test_ranges(rng):
    m = 6
    D, P = random_simplex(rng, m, 1000), random_simplex(rng, m, 1000)
    cheb = metric_values(MetricName.CHEBYSHEV, D, P)
    assert np.all((cheb >= 0) & (cheb <= 1))
    clark = metric_values(MetricName.CLARK, D, P)
    assert np.all((clark >= 0) & (clark <= np.sqrt(m)))
    canberra = metric_values(MetricName.CANBERRA, D, P)
    assert np.all((canberra >= 0) & (canberra <= m))
    assert np.all(metric_values(MetricName.KL, D, P) >= 0)
    for name in (MetricName.COSINE, MetricName.INTERSECTION):
        values = metric_values(name, D, P)
        assert np.all((values >= 0) & (values <= 1))


def test_aggregate_two_points():
    D = np.array([[1.0, 1.0], [0.0, 0.0]])
    P = np.array([[0.9, 0.7], [0.1, 0.3]])
    mean, std = aggregate(MetricName.CHEBYSHEV, D, P)
    assert mean == pytest.approx(0.2)
    assert std == pytest.approx(0.1)


def test_aggregate_identity(rng):
    D = random_simplex(rng, 4, 10)
    assert aggregate(MetricName.CHEBYSHEV, D, D) == (0.0, 0.0)


def test_aggregate_matches_scalar_oracle():
    rng = np.random.default_rng(6)
    D, P = random_simplex(rng, 6, 50), random_simplex(rng, 6, 50)
    for name in MetricName:
        values = [per_instance_metric(name, D[:, j], P[:, j]) for j in range(50)]
        assert aggregate(name, D, P)[0] == pytest.approx(np.mean(values), abs=1e-12)


def test_report_identity(rng):
    D = random_simplex(rng, 4, 10)
    report = score_report(D, D)
    for name, expected in IDENTITY.items():
        assert report.per_metric[name] == (expected, 0.0)
    assert report.n_instances == 10


def test_report_uniform_against_one_hot():
    D = np.eye(4)
    P = np.full((4, 4), 0.25)
    report = score_report(D, P)
    assert report.mean(MetricName.INTERSECTION) == pytest.approx(0.25)
    assert report.mean(MetricName.CHEBYSHEV) == pytest.approx(0.75)


def test_report_is_composition(rng):
    D, P = random_simplex(rng, 5, 20), random_simplex(rng, 5, 20)
    report = score_report(D, P)
    for name in MetricName:
        assert report.per_metric[name] == aggregate(name, D, P)


def test_report_dict_roundtrip(rng):
    D, P = random_simplex(rng, 3, 8), random_simplex(rng, 3, 8)
    report = score_report(D, P)
    again = ScoreReport.from_dict(report.to_dict())
    assert again.per_metric == report.per_metric and again.n_instances == 8


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        per_instance_metric(MetricName.KL, [0.5, 0.5], [0.2, 0.3, 0.5])


def test_invalid_distribution():
    with pytest.raises(InvalidDistribution):
        per_instance_metric(MetricName.KL, [0.5, 0.6], [0.5, 0.5])
