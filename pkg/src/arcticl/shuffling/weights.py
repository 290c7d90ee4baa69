"""Edge weights of the cut Aztec diamond and the shuffling reduction.

The order-N diamond is stored as a 2N×2N array. Cell (i, j) is the 2×2 block
rows {2i, 2i+1} × columns {2j, 2j+1}; it is the plaquette standing for the
vertex in row i+1 from the top and column j+1 from the left of the L-shape.
Inside a cell, position (0, 0) is the NW edge, (0, 1) NE, (1, 0) SW and
(1, 1) SE. Opposite edges (NW with SE, NE with SW) form the two local
matchings of an isolated plaquette.

Zero weights are replaced by a formal ε and every weight is carried as a
coefficient times an integer power of ε. Only the leading order survives the
reduction, which is exact as ε → 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from arcticl.config import ArcticError
from arcticl.model.geometry import LGeometry

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]
IntArray = NDArray[np.int64]


class ShufflingError(ArcticError):
    """Raised for degenerate weights or oversized shuffling requests."""


def blocks(a: NDArray[np.generic]) -> tuple[NDArray[np.generic], ...]:
    """The (0,0), (0,1), (1,0), (1,1) positions of every cell, as k×k views.

    Leading axes (a batch of samples) are passed through.
    """
    return (
        a[..., 0::2, 0::2],
        a[..., 0::2, 1::2],
        a[..., 1::2, 0::2],
        a[..., 1::2, 1::2],
    )


@dataclass(frozen=True)
class AztecWeightGrid:
    geometry: LGeometry
    alpha: float
    coefficient: FloatArray
    epsilon_power: IntArray

    def __post_init__(self) -> None:
        shape = (2 * self.N, 2 * self.N)
        if self.coefficient.shape != shape or self.epsilon_power.shape != shape:
            raise ShufflingError(f"weight arrays must have shape {shape}")
        if not np.all(self.coefficient > 0):
            raise ShufflingError("weight coefficients must be positive")
        if np.any(self.epsilon_power < 0):
            raise ShufflingError("epsilon powers must be non-negative")

    @property
    def N(self) -> int:
        return self.geometry.N

    @property
    def weights(self) -> FloatArray:
        """Plain edge weights, zero wherever the weight is formally ε."""
        return np.where(self.epsilon_power == 0, self.coefficient, 0.0)

    @property
    def cut(self) -> tuple[int, int]:
        return self.geometry.r, self.geometry.s

    def cell(self, i: int, j: int) -> FloatArray:
        return self.weights[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]

    @cached_property
    def tower(self) -> ShufflingTower:
        return reduce_weights(self)


def build_weights(
    N: int, r: int, s: int, alpha: float, max_order: int | None = None
) -> AztecWeightGrid:
    """Weights realizing the free-fermion six-vertex measure on the L-shape.

    NW and SE edges carry √(2(1−α)), NE and SW carry √(2α). Plaquettes of the
    removed corner keep only their NW edge, which forces the frozen type-2
    vertex there.
    """
    geom = LGeometry(N, r, s)
    if max_order is not None and N > max_order:
        raise ShufflingError(f"N={N} exceeds the shuffling cap of {max_order}")
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise ShufflingError(f"alpha must lie in (0, 1), got {alpha}")

    rows, cols = np.indices((2 * N, 2 * N))
    diagonal = (rows % 2) == (cols % 2)
    weights = np.where(diagonal, math.sqrt(2 * (1 - alpha)), math.sqrt(2 * alpha))
    nw = (rows % 2 == 0) & (cols % 2 == 0)
    in_cut = (rows // 2 < s) & (cols // 2 < N - r)
    weights[in_cut & ~nw] = 0.0

    zero = weights == 0
    grid = AztecWeightGrid(
        geometry=geom,
        alpha=alpha,
        coefficient=np.where(zero, 1.0, weights),
        epsilon_power=zero.astype(np.int64),
    )
    logger.debug(f"weights for {geom.label()}, alpha={alpha}: {int(zero.sum())} forced zeros")
    return grid


# ── Reduction ───────────────────────────────────────────────────


@dataclass
class ShufflingTower:
    """Per-level creation odds of the shuffling reduction.

    ``diagonal[k-1]`` is the k×k array of probabilities that a plaquette
    created at level k receives its NW+SE pair rather than NE+SW.
    """

    N: int
    diagonal: list[FloatArray]
    log_weight: float
    vanishing_order: int

    @property
    def admissible(self) -> bool:
        """False when the total weight vanishes as ε → 0."""
        return self.vanishing_order == 0


def _cell_delta(c: FloatArray, e: IntArray) -> tuple[FloatArray, IntArray, FloatArray]:
    """Leading term of w00·w11 + w01·w10 per cell and the NW+SE share of it."""
    c00, c01, c10, c11 = blocks(c)
    e00, e01, e10, e11 = blocks(e)
    c_diag, e_diag = c00 * c11, e00 + e11
    c_anti, e_anti = c01 * c10, e01 + e10
    e_min = np.minimum(e_diag, e_anti)
    c_min = np.where(e_diag < e_anti, c_diag, np.where(e_anti < e_diag, c_anti, c_diag + c_anti))
    share = np.where(e_diag == e_min, c_diag / c_min, 0.0)
    return c_min, e_min, share


def _renew(
    c: FloatArray, e: IntArray, c_min: FloatArray, e_min: IntArray
) -> tuple[FloatArray, IntArray]:
    """Weights of level k−1 from level k: divide by the cell delta and swap corners."""
    k = c_min.shape[0]
    unit = np.ones((2, 2))
    scaled = c / np.kron(c_min, unit)
    shifted = e - np.kron(e_min, unit.astype(np.int64))
    next_c = np.empty((2 * k - 2, 2 * k - 2))
    next_e = np.empty((2 * k - 2, 2 * k - 2), dtype=np.int64)
    for src, dst in ((scaled, next_c), (shifted, next_e)):
        s00, s01, s10, s11 = blocks(src)
        dst[1::2, 1::2] = s11[1:, 1:]
        dst[0::2, 0::2] = s00[:-1, :-1]
        dst[1::2, 0::2] = s10[1:, :-1]
        dst[0::2, 1::2] = s01[:-1, 1:]
    return next_c, next_e


def reduce_weights(wg: AztecWeightGrid) -> ShufflingTower:
    """Run the weight reduction from order N down to order 1."""
    c, e = wg.coefficient, wg.epsilon_power
    diagonal: list[FloatArray] = [np.empty((0, 0))] * wg.N
    log_weight = 0.0
    order = 0
    for k in range(wg.N, 0, -1):
        c_min, e_min, share = _cell_delta(c, e)
        diagonal[k - 1] = share
        log_weight += float(np.log(c_min).sum())
        order += int(e_min.sum())
        if k > 1:
            c, e = _renew(c, e, c_min, e_min)
    logger.debug(f"reduced order {wg.N}: log weight {log_weight:.6f}, epsilon order {order}")
    return ShufflingTower(wg.N, diagonal, log_weight, order)


def checked_tower(wg: AztecWeightGrid) -> ShufflingTower:
    tower = wg.tower
    if not tower.admissible:
        raise ShufflingError(
            f"zero total weight for {wg.geometry.label()}: the cut leaves no perfect matching"
        )
    return tower


def log_partition_function(wg: AztecWeightGrid) -> float:
    """log of the weighted count of perfect matchings.

    Equals log(2^{N(N+1)/2} · (1−α)^{s(N−r)/2} · Z_{N,r,s}).
    """
    return checked_tower(wg).log_weight
