"""Exact edge-inclusion probabilities from the shuffling recursion."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from rich.console import Console
from rich.progress import track

from arcticl.shuffling.weights import (
    AztecWeightGrid,
    FloatArray,
    ShufflingError,
    blocks,
    checked_tower,
)

logger = logging.getLogger(__name__)

stderr = Console(stderr=True)


@dataclass(frozen=True)
class PlaquetteProbabilities:
    """Occupation probabilities of the four edges of every plaquette.

    ``edges`` is the 2N×2N array in the cell layout of the weight grid; p, q,
    r and s are its NW, NE, SW and SE positions as N×N grids.
    """

    edges: FloatArray

    def __post_init__(self) -> None:
        rows, cols = self.edges.shape
        if rows != cols or rows % 2:
            raise ShufflingError(f"edge array must be 2N×2N, got {self.edges.shape}")

    @property
    def N(self) -> int:
        return self.edges.shape[0] // 2

    @property
    def p(self) -> FloatArray:
        return self.edges[0::2, 0::2]

    @property
    def q(self) -> FloatArray:
        return self.edges[0::2, 1::2]

    @property
    def r(self) -> FloatArray:
        return self.edges[1::2, 0::2]

    @property
    def s(self) -> FloatArray:
        return self.edges[1::2, 1::2]

    def quadruple(self, i: int, j: int) -> tuple[float, float, float, float]:
        return (
            float(self.p[i, j]),
            float(self.q[i, j]),
            float(self.r[i, j]),
            float(self.s[i, j]),
        )

    def total(self) -> float:
        """Expected number of dominoes, N(N+1) for every admissible cut."""
        return float(self.edges.sum())

    @staticmethod
    def domino_count(N: int) -> int:
        return N * (N + 1)


def edge_probabilities(wg: AztecWeightGrid, show_progress: bool = False) -> PlaquetteProbabilities:
    """Run the probability pass upward through the reduced levels.

    At each level the probabilities of the previous order are shifted into the
    interior, each cell swaps its occupied edges to the opposite corner, and
    the remaining mass of a cell goes to whichever pair a creation would pick.
    """
    tower = checked_tower(wg)
    current: FloatArray = np.zeros((0, 0))
    levels = range(1, wg.N + 1)
    for k in track(
        levels, description="probabilities", console=stderr, disable=not show_progress
    ):
        shifted = np.zeros((2 * k, 2 * k))
        if k > 1:
            shifted[1:-1, 1:-1] = current
        p00, p01, p10, p11 = blocks(shifted)
        created = 1 - (p00 + p01 + p10 + p11)
        diagonal = tower.diagonal[k - 1]
        nxt = np.empty_like(shifted)
        nxt[0::2, 0::2] = p11 + created * diagonal
        nxt[1::2, 1::2] = p00 + created * diagonal
        nxt[0::2, 1::2] = p10 + created * (1 - diagonal)
        nxt[1::2, 0::2] = p01 + created * (1 - diagonal)
        current = nxt

    probs = PlaquetteProbabilities(current)
    drift = abs(probs.total() - PlaquetteProbabilities.domino_count(wg.N))
    logger.info(f"edge probabilities for {wg.geometry.label()}: domino count drift {drift:.2e}")
    return probs
