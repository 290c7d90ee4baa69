"""Tests for the shuffling sampler."""

import math

import numpy as np
import pytest

from arcticl.shuffling.probabilities import edge_probabilities
from arcticl.shuffling.sampler import (
    SAMPLER_VERSION,
    TilingSample,
    batch_edge_counts,
    empirical_edge_frequencies,
    sample_batches,
    sample_tiling,
    sample_tilings,
)
from arcticl.shuffling.weights import AztecWeightGrid, ShufflingError, build_weights


@pytest.fixture(scope="module")
def cut_grid() -> AztecWeightGrid:
    return build_weights(6, 4, 2, 0.4)


class TestSampleTiling:
    def test_is_a_perfect_matching(self, cut_grid: AztecWeightGrid) -> None:
        for seed in range(20):
            sample = sample_tiling(cut_grid, seed)
            assert sample.edge_count == 6 * 7
            assert sample.covers_every_vertex()

    def test_cut_pattern_is_fixed(self, cut_grid: AztecWeightGrid) -> None:
        for seed in range(10):
            occupied = sample_tiling(cut_grid, seed).occupied
            assert occupied[0::2, 0::2][:2, :2].all()
            assert not occupied[0::2, 1::2][:2, :2].any()
            assert not occupied[1::2, 0::2][:2, :2].any()
            assert not occupied[1::2, 1::2][:2, :2].any()

    def test_fixed_seed_is_reproducible(self, cut_grid: AztecWeightGrid) -> None:
        a = sample_tiling(cut_grid, 2024)
        b = sample_tiling(cut_grid, 2024)
        assert a.occupied.tobytes() == b.occupied.tobytes()

    def test_seed_changes_the_sample(self) -> None:
        wg = build_weights(12, 12, 0, 0.5)
        assert not np.array_equal(sample_tiling(wg, 1).occupied, sample_tiling(wg, 2).occupied)

    def test_metadata(self, cut_grid: AztecWeightGrid) -> None:
        meta = sample_tiling(cut_grid, 5).metadata()
        assert meta == {
            "seed": 5,
            "index": 0,
            "batch_size": 1,
            "sampler_version": SAMPLER_VERSION,
            "generator": "PCG64",
        }

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_rejects_bad_seeds(self, cut_grid: AztecWeightGrid, seed: int) -> None:
        with pytest.raises(ShufflingError):
            sample_tiling(cut_grid, seed)

    def test_inadmissible(self) -> None:
        with pytest.raises(ShufflingError, match="zero total weight"):
            sample_tiling(build_weights(4, 1, 2, 0.5), 0)

    def test_broken_matching_is_detected(self) -> None:
        occupied = np.zeros((2, 2), dtype=bool)
        occupied[0, 0] = True
        assert not TilingSample(occupied, 0).covers_every_vertex()
        occupied[0, 1] = True
        assert not TilingSample(occupied, 0).covers_every_vertex()
        occupied[0, 1], occupied[1, 1] = False, True
        assert TilingSample(occupied, 0).covers_every_vertex()


class TestSampleTilings:
    def test_first_of_unit_batches_matches_single(self, cut_grid: AztecWeightGrid) -> None:
        first = next(sample_tilings(cut_grid, 77, 3, batch_size=1))
        assert np.array_equal(first.occupied, sample_tiling(cut_grid, 77).occupied)

    def test_indices_and_count(self, cut_grid: AztecWeightGrid) -> None:
        samples = list(sample_tilings(cut_grid, 3, 10, batch_size=4))
        assert [s.index for s in samples] == list(range(10))
        assert all(s.batch_size == 4 for s in samples)

    def test_order_one_is_fair(self) -> None:
        wg = build_weights(1, 1, 0, 0.5)
        n = 4000
        freq = empirical_edge_frequencies(sample_tilings(wg, 11, n))
        sigma = math.sqrt(0.25 / n)
        assert abs(freq[0, 0] - 0.5) < 4 * sigma
        assert freq[0, 0] == freq[1, 1]
        assert freq[0, 0] + freq[0, 1] == pytest.approx(1.0)

    def test_frequencies_match_probabilities(self, cut_grid: AztecWeightGrid) -> None:
        n = 20000
        counts, total = batch_edge_counts(sample_batches(cut_grid, 99, n, batch_size=1000))
        assert total == n
        freq = counts / n
        p = edge_probabilities(cut_grid).edges
        sigma = np.sqrt(p * (1 - p) / n)
        assert np.all(np.abs(freq - p) <= 5 * sigma + 1e-12)

    def test_stream_validation(self, cut_grid: AztecWeightGrid) -> None:
        with pytest.raises(ShufflingError):
            next(sample_batches(cut_grid, 0, 10, batch_size=0))
        with pytest.raises(ShufflingError):
            empirical_edge_frequencies([])
