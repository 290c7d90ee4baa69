"""Exact random perfect matchings by generalized domino shuffling."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import NDArray
from rich.progress import track

from arcticl.shuffling.probabilities import stderr
from arcticl.shuffling.weights import (
    AztecWeightGrid,
    FloatArray,
    ShufflingError,
    ShufflingTower,
    blocks,
    checked_tower,
)

logger = logging.getLogger(__name__)

SAMPLER_VERSION = "1"
GENERATOR = "PCG64"
BATCH_SIZE = 256

BoolArray = NDArray[np.bool_]

# Endpoint offsets of the edges at cell positions (0,0), (0,1), (1,0), (1,1)
# around the plaquette centre, in doubled coordinates.
_ENDPOINTS = np.array(
    [
        [[-1, -1], [1, -1]],
        [[-1, -1], [-1, 1]],
        [[1, -1], [1, 1]],
        [[-1, 1], [1, 1]],
    ]
)


@dataclass(frozen=True)
class TilingSample:
    """One perfect matching of the cut Aztec diamond.

    ``occupied`` uses the cell layout of the weight grid. ``index`` is the
    position of the sample in its generator stream.
    """

    occupied: BoolArray
    seed: int
    index: int = 0
    batch_size: int = 1
    sampler_version: str = SAMPLER_VERSION
    generator: str = GENERATOR

    @property
    def N(self) -> int:
        return self.occupied.shape[0] // 2

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.occupied))

    def endpoints(self) -> NDArray[np.int64]:
        """Both endpoints of every occupied edge, in doubled diamond coordinates.

        Plaquette (i, j) of order N is centred at (i − j, i + j − N + 1).
        """
        a, b = np.nonzero(self.occupied)
        i, j = a // 2, b // 2
        centre = np.column_stack([i - j, i + j - self.N + 1]) * 2
        position = 2 * (a % 2) + (b % 2)
        return centre[:, None, :] + _ENDPOINTS[position]

    def covers_every_vertex(self) -> bool:
        """Each of the 2N(N+1) diamond vertices is matched exactly once."""
        points = self.endpoints().reshape(-1, 2)
        distinct = np.unique(points, axis=0)
        return len(points) == len(distinct) == 2 * self.N * (self.N + 1)

    def metadata(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "index": self.index,
            "batch_size": self.batch_size,
            "sampler_version": self.sampler_version,
            "generator": self.generator,
        }


def _check_seed(seed: int) -> None:
    if not 0 <= seed < 2**64:
        raise ShufflingError(f"seed must be a 64-bit unsigned integer, got {seed}")


def _shuffle(tower: ShufflingTower, rng: np.random.Generator, batch: int) -> BoolArray:
    """Grow ``batch`` matchings from order 0 to order N.

    Edges of order k−1 move one step into the order-k array. A cell holding
    two of them loses both, a cell holding one slides it to the opposite
    corner, and an empty cell is filled with one of its two pairs.
    """
    occupied: BoolArray = np.zeros((batch, 0, 0), dtype=bool)
    for k in range(1, tower.N + 1):
        moved = np.zeros((batch, 2 * k, 2 * k), dtype=bool)
        if k > 1:
            moved[:, 1:-1, 1:-1] = occupied
        f00, f01, f10, f11 = blocks(moved)
        count = f00.astype(np.int8) + f01 + f10 + f11
        single = count == 1
        empty = count == 0
        diagonal = rng.random((batch, k, k)) < tower.diagonal[k - 1]
        nxt = np.zeros_like(moved)
        nxt[:, 1::2, 1::2] = (f00 & single) | (empty & diagonal)
        nxt[:, 0::2, 0::2] = (f11 & single) | (empty & diagonal)
        nxt[:, 1::2, 0::2] = (f01 & single) | (empty & ~diagonal)
        nxt[:, 0::2, 1::2] = (f10 & single) | (empty & ~diagonal)
        occupied = nxt
    return occupied


def sample_tiling(wg: AztecWeightGrid, seed: int) -> TilingSample:
    """Exact sample from the weighted measure; a pure function of (wg, seed)."""
    _check_seed(seed)
    tower = checked_tower(wg)
    rng = np.random.Generator(np.random.PCG64(seed))
    return TilingSample(_shuffle(tower, rng, 1)[0], seed)


def sample_batches(
    wg: AztecWeightGrid,
    seed: int,
    n_samples: int,
    batch_size: int = BATCH_SIZE,
    show_progress: bool = False,
) -> Iterator[BoolArray]:
    """Stream ``n_samples`` matchings from one generator in batches."""
    _check_seed(seed)
    if n_samples < 0:
        raise ShufflingError(f"n_samples must be non-negative, got {n_samples}")
    if batch_size < 1:
        raise ShufflingError(f"batch_size must be positive, got {batch_size}")
    tower = checked_tower(wg)
    rng = np.random.Generator(np.random.PCG64(seed))
    sizes = [batch_size] * (n_samples // batch_size)
    if rest := n_samples % batch_size:
        sizes.append(rest)
    logger.info(f"sampling {n_samples} matchings of {wg.geometry.label()} (seed {seed})")
    for size in track(sizes, description="sampling", console=stderr, disable=not show_progress):
        yield _shuffle(tower, rng, size)


def sample_tilings(
    wg: AztecWeightGrid,
    seed: int,
    n_samples: int,
    batch_size: int = BATCH_SIZE,
) -> Iterator[TilingSample]:
    index = 0
    for batch in sample_batches(wg, seed, n_samples, batch_size):
        for occupied in batch:
            yield TilingSample(occupied, seed, index, batch_size)
            index += 1


def empirical_edge_frequencies(samples: Iterable[TilingSample]) -> FloatArray:
    """Fraction of samples in which each edge is occupied."""
    total: NDArray[np.int64] | None = None
    n = 0
    for sample in samples:
        if total is None:
            total = np.zeros(sample.occupied.shape, dtype=np.int64)
        total += sample.occupied
        n += 1
    if total is None:
        raise ShufflingError("no samples to count")
    return total / n


def batch_edge_counts(batches: Iterable[BoolArray]) -> tuple[NDArray[np.int64], int]:
    """Occupation counts summed over streamed batches, with the sample count."""
    total: NDArray[np.int64] | None = None
    n = 0
    for batch in batches:
        counts = batch.sum(axis=0, dtype=np.int64)
        total = counts if total is None else total + counts
        n += len(batch)
    if total is None:
        raise ShufflingError("no samples to count")
    return total, n
