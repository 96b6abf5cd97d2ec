import numpy as np
import pytest

from conftest import random_simplex
from src.ldl_core.types import DistributionMatrix
from src.ldl_metrics.metrics import metric_values
from src.bias_degrade.bias import BiasConfig, inject_bias
from src.bias_degrade.degrade import (
    DegradeConfig, degrade_to_multilabel, batch_degrade, hamming_distance
)
from src.exp_harness.synthetic import synth_generate
from src.error_handling.exceptions import InvalidConfig, InvalidDistribution, ShapeMismatch
from config.constants import MetricName


class StubGenerator:
    """Always returns the same simplex point"""

    def __init__(self, point):
        self.point = np.asarray(point, dtype=float)

    def dirichlet(self, alpha, size):
        return np.tile(self.point, (size, 1))


class TestInjectBias:

    def test_zero_bias_is_identity(self, rng):
        D = DistributionMatrix(random_simplex(rng, 5, 10))
        assert np.array_equal(inject_bias(D, BiasConfig(c=0.0, seed=1)).data, D.data)

    def test_full_bias_replaces_columns(self):
        D = DistributionMatrix(np.array([[0.2], [0.3], [0.5]]))
        out = inject_bias(D, BiasConfig(c=1.0), rng=StubGenerator([1.0, 0.0, 0.0]))
        assert out.data[:, 0] == pytest.approx([1.0, 0.0, 0.0])

    def test_full_bias_on_every_column(self):
        D = DistributionMatrix(np.tile([[0.2], [0.3], [0.5]], (1, 4)))
        out = inject_bias(D, BiasConfig(c=1.0), rng=StubGenerator([0.0, 1.0, 0.0]))
        assert out.data == pytest.approx(np.tile([[0.0], [1.0], [0.0]], (1, 4)))

    def test_misshaped_draw_is_rejected(self):
        class SingleDraw(StubGenerator):
            def dirichlet(self, alpha, size):
                return self.point.reshape(1, -1)

        D = DistributionMatrix(np.tile([[0.2], [0.3], [0.5]], (1, 4)))
        with pytest.raises(ShapeMismatch):
            inject_bias(D, BiasConfig(c=0.5), rng=SingleDraw([1.0, 0.0, 0.0]))

    def test_deterministic_for_seed(self):
        D = DistributionMatrix(np.tile([[0.5], [0.3], [0.2]], (1, 3)))
        first = inject_bias(D, BiasConfig(c=0.2, seed=42))
        second = inject_bias(D, BiasConfig(c=0.2, seed=42))
        assert np.array_equal(first.data, second.data)
        assert not np.array_equal(first.data, D.data)

    def test_different_seeds_differ(self):
        D = DistributionMatrix(np.tile([[0.5], [0.3], [0.2]], (1, 3)))
        assert not np.array_equal(
            inject_bias(D, BiasConfig(c=0.2, seed=1)).data,
            inject_bias(D, BiasConfig(c=0.2, seed=2)).data,
        )

    @pytest.mark.parametrize("c", [0.1, 0.3, 0.7, 1.0])
    def test_output_is_valid(self, rng, c):
        D = DistributionMatrix(random_simplex(rng, 6, 30))
        out = inject_bias(D, BiasConfig(c=c, seed=9))
        assert np.all(out.data >= 0)
        assert np.allclose(out.data.sum(axis=0), 1.0, atol=1e-9)

    @pytest.mark.parametrize("c", [-0.1, 1.5])
    def test_bias_level_range(self, c):
        with pytest.raises(InvalidConfig):
            BiasConfig(c=c)


class TestDegrade:

    def test_hand_trace(self):
        labels = degrade_to_multilabel([0.5, 0.3, 0.2], DegradeConfig(threshold_t=0.6))
        assert labels.tolist() == [1, 1, 0]

    @pytest.mark.parametrize("t", [0.1, 0.5, 0.99])
    def test_single_label_mass(self, t):
        assert degrade_to_multilabel([1.0, 0.0, 0.0], DegradeConfig(threshold_t=t)).tolist() == [1, 0, 0]

    def test_uniform_ties_break_to_lowest_index(self):
        labels = degrade_to_multilabel([0.2] * 5, DegradeConfig(threshold_t=0.5))
        assert labels.tolist() == [1, 1, 1, 0, 0]

    def test_invalid_distribution(self):
        with pytest.raises(InvalidDistribution):
            degrade_to_multilabel([0.5, 0.6], DegradeConfig())

    @pytest.mark.parametrize("t", [0.0, 1.0])
    def test_threshold_range(self, t):
        with pytest.raises(InvalidConfig):
            DegradeConfig(threshold_t=t)

    def test_batch_single_column(self):
        L = batch_degrade(np.array([[0.5], [0.3], [0.2]]), DegradeConfig(threshold_t=0.6))
        assert L.data[:, 0].tolist() == [1, 1, 0]

    def test_batch_one_hot(self):
        D = np.eye(4)[:, [2, 0, 3, 1]]
        assert np.array_equal(batch_degrade(D, DegradeConfig()).data, D.astype(np.uint8))

    def test_batch_reports_column(self):
        D = np.array([[0.5, 0.5], [0.5, 0.6]])
        with pytest.raises(InvalidDistribution) as info:
            batch_degrade(D, DegradeConfig())
        assert info.value.column == 1

    def test_batch_matches_single(self, rng):
        D = random_simplex(rng, 6, 40)
        cfg = DegradeConfig(threshold_t=0.7)
        L = batch_degrade(D, cfg)
        for j in range(D.shape[1]):
            assert np.array_equal(L.data[:, j], degrade_to_multilabel(D[:, j], cfg))

    def test_coverage_and_minimality(self):
        D = random_simplex(np.random.default_rng(20), 6, 20)
        L = batch_degrade(D, DegradeConfig(threshold_t=0.7)).data
        for j in range(D.shape[1]):
            selected = np.flatnonzero(L[:, j])
            covered = D[selected, j].sum()
            assert covered > 0.7
            if selected.size > 1:
                smallest = D[selected, j].min()
                assert covered - smallest <= 0.7

    def test_selection_is_top_prefix(self, rng):
        D = random_simplex(rng, 7, 30)
        L = batch_degrade(D, DegradeConfig(threshold_t=0.6)).data
        for j in range(D.shape[1]):
            k = int(L[:, j].sum())
            top = np.argsort(-D[:, j], kind="stable")[:k]
            assert set(np.flatnonzero(L[:, j])) == set(top)

    def test_monotone_in_threshold(self, rng):
        D = random_simplex(rng, 6, 30)
        low = batch_degrade(D, DegradeConfig(threshold_t=0.5)).data
        high = batch_degrade(D, DegradeConfig(threshold_t=0.8)).data
        assert np.all(high >= low)

    def test_hamming_distance(self):
        a = np.array([[1, 0], [0, 1]])
        b = np.array([[1, 1], [0, 1]])
        assert hamming_distance(a, b) == 0.25


def test_hard_labels_absorb_more_bias_than_distributions():
    dataset = synth_generate(d=20, m=8, n=200, rank_r=3, seed=1)
    cfg = DegradeConfig(threshold_t=0.7)
    for c in (0.1, 0.2, 0.3):
        D_hat = inject_bias(dataset.D, BiasConfig(c=c, seed=1))
        chebyshev = metric_values(MetricName.CHEBYSHEV, dataset.D, D_hat).mean()
        hamming = hamming_distance(batch_degrade(D_hat, cfg), batch_degrade(dataset.D, cfg))
        assert chebyshev > hamming
