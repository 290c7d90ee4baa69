"""Tests for the cut Aztec weights and the shuffling reduction."""

import math
from fractions import Fraction

import numpy as np
import pytest

from arcticl.model.geometry import GeometryError, LGeometry
from arcticl.model.transfer import partition_function
from arcticl.model.vertex import FreeFermionWeights
from arcticl.shuffling.weights import (
    AztecWeightGrid,
    ShufflingError,
    build_weights,
    log_partition_function,
    reduce_weights,
)


def _admissible(max_n: int) -> list[tuple[int, int, int]]:
    return [
        (N, r, s)
        for N in range(1, max_n + 1)
        for r in range(1, N + 1)
        for s in range(0, r + 1)
        if s <= N
    ]


class TestBuildWeights:
    def test_half_uncut_is_uniform(self) -> None:
        wg = build_weights(5, 5, 0, 0.5)
        np.testing.assert_allclose(wg.weights, 1.0, rtol=0, atol=1e-15)
        assert not wg.epsilon_power.any()

    def test_cell_pattern(self) -> None:
        wg = build_weights(3, 3, 0, 0.2)
        a, b = math.sqrt(1.6), math.sqrt(0.4)
        np.testing.assert_allclose(wg.cell(1, 2), [[a, b], [b, a]])

    def test_cut_keeps_only_the_nw_edge(self) -> None:
        N, r, s = 6, 2, 3
        wg = build_weights(N, r, s, 0.3)
        for i in range(N):
            for j in range(N):
                cell = wg.cell(i, j)
                if i < s and j < N - r:
                    assert cell[0, 0] > 0
                    assert cell[0, 1] == cell[1, 0] == cell[1, 1] == 0
                else:
                    assert np.all(cell > 0)
        assert int(wg.epsilon_power.sum()) == 3 * s * (N - r)

    def test_exact_alpha_is_accepted(self) -> None:
        wg = build_weights(3, 2, 1, Fraction(1, 3))
        assert wg.alpha == pytest.approx(1 / 3)

    def test_invalid_geometry(self) -> None:
        with pytest.raises(GeometryError):
            build_weights(3, 0, 1, 0.5)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 1.5])
    def test_invalid_alpha(self, alpha: float) -> None:
        with pytest.raises(ShufflingError):
            build_weights(3, 3, 0, alpha)

    def test_size_guard(self) -> None:
        with pytest.raises(ShufflingError, match="cap"):
            build_weights(12, 12, 0, 0.5, max_order=10)

    def test_rejects_non_positive_coefficients(self) -> None:
        with pytest.raises(ShufflingError):
            AztecWeightGrid(
                LGeometry(1, 1), 0.5, np.zeros((2, 2)), np.zeros((2, 2), dtype=np.int64)
            )


class TestReduction:
    def test_level_shapes(self) -> None:
        tower = reduce_weights(build_weights(4, 3, 1, 0.4))
        assert [d.shape for d in tower.diagonal] == [(k, k) for k in range(1, 5)]
        for d in tower.diagonal:
            assert np.all((d >= 0) & (d <= 1))

    def test_order_one_is_a_fair_coin_at_half(self) -> None:
        tower = reduce_weights(build_weights(1, 1, 0, 0.5))
        assert tower.diagonal[0][0, 0] == pytest.approx(0.5)
        assert tower.log_weight == pytest.approx(math.log(2))

    def test_order_one_bias(self) -> None:
        tower = reduce_weights(build_weights(1, 1, 0, 0.3))
        assert tower.diagonal[0][0, 0] == pytest.approx(0.7)

    def test_tower_is_cached_on_the_grid(self) -> None:
        wg = build_weights(3, 3, 0, 0.5)
        assert wg.tower is wg.tower

    def test_inadmissible_cut_vanishes(self) -> None:
        wg = build_weights(4, 1, 2, 0.5)
        assert not wg.tower.admissible
        with pytest.raises(ShufflingError, match="zero total weight"):
            log_partition_function(wg)


class TestPartitionFunction:
    @pytest.mark.parametrize(("N", "r", "s"), _admissible(5))
    def test_matches_six_vertex_partition_function(self, N: int, r: int, s: int) -> None:
        alpha = 0.3
        Z = float(partition_function(LGeometry(N, r, s), FreeFermionWeights(alpha)))
        expected = N * (N + 1) / 2 * math.log(2) + s * (N - r) / 2 * math.log(1 - alpha)
        expected += math.log(Z)
        assert log_partition_function(build_weights(N, r, s, alpha)) == pytest.approx(
            expected, abs=1e-12
        )

    @pytest.mark.parametrize("N", [1, 4, 10, 30])
    def test_uncut_half_counts_tilings(self, N: int) -> None:
        # 2^{N(N+1)/2} domino tilings of the order-N Aztec diamond
        wg = build_weights(N, N, 0, 0.5)
        assert log_partition_function(wg) == pytest.approx(N * (N + 1) / 2 * math.log(2), rel=1e-12)
