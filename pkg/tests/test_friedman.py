import math
import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from config.constants import MetricDirection
from src.stat_tests.friedman import (
    RankTable, friedman, f_sf, f_critical, bonferroni_dunn_q, bonferroni_dunn_cd
)
from src.error_handling.exceptions import InvalidConfig, ShapeMismatch

METHODS = ["a", "b", "c"]


def test_all_ties_give_zero_statistics():
    table = RankTable(np.full((5, 3), 2.0), METHODS)
    result = friedman(table)
    assert result.chi2 == pytest.approx(0.0, abs=1e-12)
    assert result.f_stat == pytest.approx(0.0, abs=1e-12)
    assert not result.degenerate


def test_known_mean_ranks():
    ranks = [[1, 2, 3], [1, 2, 3], [2, 1, 3], [2, 3, 1]]
    table = RankTable(ranks, METHODS)
    assert table.mean_ranks() == pytest.approx([1.5, 2.0, 2.5])
    result = friedman(table)
    assert result.chi2 == pytest.approx(2.0)
    assert result.f_stat == pytest.approx(1.0)
    assert (result.df1, result.df2) == (2, 6)


def test_perfect_ordering_is_unbounded():
    result = friedman(RankTable([[1, 2, 3]] * 5, METHODS))
    assert result.chi2 == pytest.approx(10.0)
    assert math.isinf(result.f_stat)
    assert result.degenerate


def test_degrees_of_freedom():
    rng = np.random.default_rng(0)
    scores = rng.random((12, 8))
    result = friedman(RankTable.from_scores(scores, list("abcdefgh")))
    assert (result.df1, result.df2) == (7, 77)


def test_from_scores_direction():
    scores = [[0.1, 0.2, 0.2]]
    down = RankTable.from_scores(scores, METHODS, MetricDirection.DOWN)
    up = RankTable.from_scores(scores, METHODS, MetricDirection.UP)
    assert down.ranks[0] == pytest.approx([1.0, 2.5, 2.5])
    assert up.ranks[0] == pytest.approx([3.0, 1.5, 1.5])


def test_permuting_datasets_changes_nothing():
    rng = np.random.default_rng(1)
    scores = rng.random((10, 4))
    names = list("wxyz")
    base = friedman(RankTable.from_scores(scores, names))
    shuffled = friedman(RankTable.from_scores(scores[rng.permutation(10)], names))
    assert shuffled.chi2 == pytest.approx(base.chi2, abs=1e-12)
    assert shuffled.f_stat == pytest.approx(base.f_stat, abs=1e-12)


def test_rank_rows_must_sum_correctly():
    with pytest.raises(InvalidConfig):
        RankTable([[1, 1, 1]], METHODS)


def test_rank_shape_must_match_methods():
    with pytest.raises(ShapeMismatch):
        RankTable([[1, 2]], METHODS)


def test_single_dataset_rejected():
    with pytest.raises(InvalidConfig):
        friedman(RankTable([[1, 2, 3]], METHODS))


def test_f_critical_table_value():
    assert f_critical(0.05, 7, 77) == pytest.approx(2.131, abs=0.002)


def test_f_tail_matches_integrated_density():
    x = f_critical(0.05, 2, 10)
    assert x == pytest.approx(5.0 * (20.0 ** 0.2 - 1.0), abs=1e-8)
    assert x == pytest.approx(4.10282, abs=1e-5)
    tail, _ = quad(lambda t: stats.f.pdf(t, 2, 10), x, np.inf)
    assert tail == pytest.approx(0.05, abs=1e-7)
    assert f_sf(x, 2, 10) == pytest.approx(tail, abs=1e-7)


@pytest.mark.parametrize("nu", [1, 4, 10, 30])
def test_f_median_of_equal_degrees_is_one(nu):
    assert f_critical(0.5, nu, nu) == pytest.approx(1.0, abs=1e-8)


def test_f_critical_decreases_with_alpha():
    values = [f_critical(a, 3, 20) for a in (0.01, 0.05, 0.1, 0.5)]
    assert values == sorted(values, reverse=True)


def test_f_critical_inverts_tail():
    x = f_critical(0.05, 4, 12)
    assert f_sf(x, 4, 12) == pytest.approx(0.05, abs=1e-8)
    assert f_sf(0.0, 4, 12) == 1.0


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1])
def test_f_critical_alpha_range(alpha):
    with pytest.raises(InvalidConfig):
        f_critical(alpha, 2, 6)


def test_critical_difference_from_table():
    # k(k+1)/(6N) = 1 for k = 8, N = 12
    assert bonferroni_dunn_cd(8, 12) == pytest.approx(2.690)
    assert bonferroni_dunn_cd(8, 12, q_alpha=2.3296) == pytest.approx(2.3296)


def test_q_outside_table_uses_normal_quantile():
    assert bonferroni_dunn_q(12, 0.05) == pytest.approx(2.838, abs=2e-3)
    assert bonferroni_dunn_q(3, 0.10) == pytest.approx(1.960)


def test_critical_difference_rejects_bad_input():
    with pytest.raises(InvalidConfig):
        bonferroni_dunn_cd(1, 10)
    with pytest.raises(InvalidConfig):
        bonferroni_dunn_cd(3, 10, q_alpha=0.0)
