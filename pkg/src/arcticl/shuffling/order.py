"""Order parameters, fluid mask and comparison with the analytic curve."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from arcticl.shuffling.probabilities import PlaquetteProbabilities
from arcticl.shuffling.weights import FloatArray

logger = logging.getLogger(__name__)

MAX_SEGMENT = 0.05
CHUNK = 256


@dataclass(frozen=True)
class OrderParameterField:
    """x and z per plaquette with the fluid mask at threshold ``eps``.

    Grids are indexed like the probabilities: row i from the top, column j
    from the left.
    """

    x: FloatArray
    z: NDArray[np.complex128]
    mask: NDArray[np.bool_]
    eps: float

    @property
    def N(self) -> int:
        return self.x.shape[0]

    @property
    def fluid_fraction(self) -> float:
        return float(self.mask.mean())


def fluid_threshold(N: int, eps_const: float = 1.0) -> float:
    return eps_const * N ** (-2 / 3)


def order_parameters(
    probs: PlaquetteProbabilities, N: int | None = None, eps_const: float = 1.0
) -> OrderParameterField:
    """x = (1 + p − q − r + s)/2 and z = √p + i√q − i√r − √s.

    The fluid mask keeps the plaquettes with x in [ε, 1−ε], ε = eps_const·N^(−2/3).
    """
    N = probs.N if N is None else N
    p, q, r, s = (np.clip(v, 0.0, 1.0) for v in (probs.p, probs.q, probs.r, probs.s))
    x = (1 + p - q - r + s) / 2
    z = np.sqrt(p) + 1j * np.sqrt(q) - 1j * np.sqrt(r) - np.sqrt(s)
    eps = fluid_threshold(N, eps_const)
    mask = (x >= eps) & (x <= 1 - eps)
    logger.debug(f"order parameters: eps={eps:.4g}, fluid fraction {mask.mean():.3f}")
    return OrderParameterField(x, z, mask, eps)


def plaquette_centres(N: int) -> tuple[FloatArray, FloatArray]:
    """Scaled (x, y) of every plaquette: x leftward from the right edge, y downward."""
    i, j = np.indices((N, N))
    return (N - j - 0.5) / N, (i + 0.5) / N


def fluid_boundary(field: OrderParameterField) -> FloatArray:
    """Midpoints between neighbouring fluid and frozen plaquettes, as (m, 2) scaled points."""
    mask, N = field.mask, field.N
    i, j = np.nonzero(mask[:, 1:] != mask[:, :-1])
    across = np.column_stack([(N - j - 1.0) / N, (i + 0.5) / N])
    i, j = np.nonzero(mask[1:, :] != mask[:-1, :])
    down = np.column_stack([(N - j - 0.5) / N, (i + 1.0) / N])
    return np.vstack([across, down])


def _segments(branches: Sequence[tuple[FloatArray, FloatArray]]) -> tuple[FloatArray, FloatArray]:
    starts, ends = [], []
    for x, y in branches:
        pts = np.column_stack([x, y])
        starts.append(pts)
        ends.append(pts)
        a, b = pts[:-1], pts[1:]
        short = np.hypot(*(b - a).T) <= MAX_SEGMENT
        starts.append(a[short])
        ends.append(b[short])
    return np.vstack(starts), np.vstack(ends)


def curve_distances(
    points: FloatArray, branches: Sequence[tuple[FloatArray, FloatArray]]
) -> FloatArray:
    """Distance from each point to the nearest sampled curve segment.

    Every sample counts as a point; consecutive samples are joined only when
    they lie within MAX_SEGMENT of each other.
    """
    a, b = _segments(branches)
    d = b - a
    length_sq = np.maximum((d**2).sum(axis=1), 1e-300)
    out = np.empty(len(points))
    for start in range(0, len(points), CHUNK):
        chunk = points[start : start + CHUNK]
        rel = chunk[:, None, :] - a[None, :, :]
        t = np.clip((rel * d[None, :, :]).sum(axis=2) / length_sq, 0.0, 1.0)
        nearest = a[None, :, :] + t[:, :, None] * d[None, :, :]
        gap = chunk[:, None, :] - nearest
        out[start : start + CHUNK] = np.sqrt((gap**2).sum(axis=2)).min(axis=1)
    return out


def max_curve_deviation(
    points: FloatArray, branches: Sequence[tuple[FloatArray, FloatArray]], N: int
) -> float:
    """Largest distance from the fluid boundary to the curve, in lattice spacings."""
    if len(points) == 0:
        return 0.0
    return float(curve_distances(points, branches).max() * N)
