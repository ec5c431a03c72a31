"""Dominance sorting and crowding against brute-force oracles."""

import numpy as np
import pytest

from revbrew.evolve.pareto import (
    crowding_distance,
    dominates,
    fast_nondominated_sort,
    nondominated_mask,
    rank_and_crowding,
)


def brute_force_fronts(F):
    """O(n^2) front assignment by repeated pairwise scanning."""
    F = np.asarray(F, dtype=float)
    remaining = list(range(len(F)))
    fronts = []
    while remaining:
        front = []
        for i in remaining:
            if not any(dominates(F[j], F[i]) for j in remaining if j != i):
                front.append(i)
        fronts.append(sorted(front))
        remaining = [i for i in remaining if i not in front]
    return fronts


class TestDominates:
    def test_strict_componentwise(self):
        assert dominates((1, 1, 1), (2, 2, 2))

    def test_equality_is_non_domination(self):
        assert not dominates((1, 1, 1), (1, 1, 1))

    def test_mutual_non_domination(self):
        assert not dominates((1, 3, 1), (2, 2, 2))
        assert not dominates((2, 2, 2), (1, 3, 1))

    def test_partial_improvement_dominates(self):
        assert dominates((1, 2, 2), (2, 2, 2))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            dominates((1, 2), (1, 2, 3))


class TestFastNondominatedSort:
    def test_singleton(self):
        fronts = fast_nondominated_sort([[1.0, 2.0, 3.0]])
        assert [f.tolist() for f in fronts] == [[0]]

    def test_total_order_chain(self):
        fronts = fast_nondominated_sort([[1, 1, 1], [2, 2, 2], [3, 3, 3]])
        assert [f.tolist() for f in fronts] == [[0], [1], [2]]

    def test_empty_population_rejected(self):
        with pytest.raises(ValueError):
            fast_nondominated_sort(np.empty((0, 3)))

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_brute_force_random(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 60))
        F = rng.integers(0, 6, size=(n, 3)).astype(float)  # ties likely
        fronts = fast_nondominated_sort(F)
        assert [f.tolist() for f in fronts] == brute_force_fronts(F)

    def test_every_index_assigned_once(self):
        rng = np.random.default_rng(42)
        F = rng.random((50, 3))
        fronts = fast_nondominated_sort(F)
        flat = np.concatenate(fronts)
        assert sorted(flat.tolist()) == list(range(50))

    def test_nondominated_mask_agrees(self):
        rng = np.random.default_rng(3)
        F = rng.random((40, 3))
        fronts = fast_nondominated_sort(F)
        assert sorted(np.flatnonzero(nondominated_mask(F)).tolist()) == fronts[0].tolist()


class TestCrowdingDistance:
    def test_small_fronts_all_infinite(self):
        assert np.all(np.isinf(crowding_distance([[1.0, 2.0]])))
        assert np.all(np.isinf(crowding_distance([[1.0, 2.0], [2.0, 1.0]])))

    def test_three_collinear_points(self):
        d = crowding_distance([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
        assert np.isinf(d[0]) and np.isinf(d[2])
        assert 0 < d[1] < np.inf
        assert d[1] == pytest.approx(2.0)  # one full normalized gap per objective

    def test_identical_values_interior_zero(self):
        d = crowding_distance([[1.0, 1.0]] * 5)
        assert np.isinf(d).sum() == 2
        assert np.all(d[~np.isinf(d)] == 0.0)

    def test_denser_point_has_smaller_crowding(self):
        # x=0.4 sits closer to its neighbors than x=2 does.
        F = np.array([[0.0], [0.4], [0.6], [2.0], [3.0]])
        d = crowding_distance(F)
        assert d[1] < d[3]

    def test_empty_front_rejected(self):
        with pytest.raises(ValueError):
            crowding_distance(np.empty((0, 2)))


class TestRankAndCrowding:
    def test_ranks_match_fronts(self):
        rng = np.random.default_rng(11)
        F = rng.random((30, 3))
        ranks, crowd, fronts = rank_and_crowding(F)
        for k, idx in enumerate(fronts):
            assert np.all(ranks[idx] == k)
        assert crowd.shape == (30,)
