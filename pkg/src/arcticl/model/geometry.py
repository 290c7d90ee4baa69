"""Lattice and scaled geometry of the L-shaped domain."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from arcticl.config import ArcticError


class GeometryError(ArcticError):
    """Raised for lattice sizes outside the admissible range."""


@dataclass(frozen=True)
class LGeometry:
    """N×N square with an s×(N−r) rectangle removed from the top-left corner.

    Columns j are counted from the right and rows k from the top, both from 1.
    The removed rectangle is rows k ≤ s, columns j > r.
    """

    N: int
    r: int
    s: int = 0

    def __post_init__(self) -> None:
        if self.N < 1:
            raise GeometryError(f"N must be positive, got {self.N}")
        if not 1 <= self.r <= self.N:
            raise GeometryError(f"r must lie in [1, {self.N}], got {self.r}")
        if not 0 <= self.s <= self.N:
            raise GeometryError(f"s must lie in [0, {self.N}], got {self.s}")

    @property
    def q(self) -> int:
        """N − r − s, the Meixner parameter of the log-gas."""
        return self.N - self.r - self.s

    @property
    def cut_area(self) -> int:
        return self.s * (self.N - self.r)

    @property
    def is_admissible(self) -> bool:
        """True when at least one DWBC configuration exists.

        The s top rows each push one up arrow into the r kept columns, so the
        state set is empty exactly when s > r.
        """
        return self.s <= self.r

    def in_cut(self, k: int, j: int) -> bool:
        """Whether vertex (row k from top, column j from right) is removed."""
        return k <= self.s and j > self.r

    def label(self) -> str:
        return f"N={self.N}, r={self.r}, s={self.s}"


@dataclass(frozen=True)
class ScaledGeometry:
    R: float
    Q: float
    xi_x: float
    xi_y: float
    beta: float | None = None

    @classmethod
    def from_ratios(
        cls, R: float, Q: float = 0.0, alpha: float | Fraction | None = None
    ) -> ScaledGeometry:
        """Build the continuum geometry from R = r/s and Q = (N−r−s)/s."""
        if R < 1:
            raise GeometryError(f"R must be at least 1, got {R}")
        if Q < 0:
            raise GeometryError(f"Q must be non-negative, got {Q}")
        total = R + Q + 1
        beta = None
        if Q == 0 and alpha is not None:
            if not 0 < alpha < 1:
                raise GeometryError(f"beta needs alpha in (0, 1), got {alpha}")
            beta = (R - 1) / ((R + 1) * math.sqrt(alpha))
        return cls(R=float(R), Q=float(Q), xi_x=R / total, xi_y=1 / total, beta=beta)

    @property
    def cut_corner(self) -> tuple[float, float]:
        return self.xi_x, self.xi_y


def scale_geometry(geom: LGeometry, alpha: float | Fraction | None = None) -> ScaledGeometry:
    """Continuum parameters of a lattice geometry, using s as the scale."""
    if geom.s == 0:
        raise GeometryError("scaling needs s >= 1")
    R = Fraction(geom.r, geom.s)
    Q = Fraction(geom.q, geom.s)
    if Q < 0:
        raise GeometryError(f"scaling needs r + s <= N ({geom.label()})")
    return ScaledGeometry.from_ratios(float(R), float(Q), alpha)


def R_from_beta(beta: float, alpha: float | Fraction) -> float:
    """Inverse of β = (R−1)/((R+1)√α) on the Q = 0 line."""
    t = math.sqrt(alpha) * beta
    if t >= 1:
        raise GeometryError(f"beta={beta} is outside the admissible range for alpha={alpha}")
    return (1 + t) / (1 - t)
