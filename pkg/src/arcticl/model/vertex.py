"""Six-vertex types and the free-fermion weight parameterization."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum, StrEnum
from fractions import Fraction


class Arrow(StrEnum):
    LEFT = "L"
    RIGHT = "R"
    UP = "U"
    DOWN = "D"


class VertexType(IntEnum):
    """The six ice-rule vertices, numbered as in the usual weight table."""

    ONE = 1
    TWO = 2
    THREE = 3
    FOUR = 4
    FIVE = 5
    SIX = 6

    @property
    def arrows(self) -> tuple[Arrow, Arrow, Arrow, Arrow]:
        """Arrows on the (left, right, bottom, top) edges."""
        return _ARROWS[self]

    @property
    def weight_class(self) -> str:
        """'a' for types 1-2, 'b' for 3-4, 'c' for 5-6."""
        return "abc"[(self - 1) // 2]

    @classmethod
    def from_arrows(cls, left: Arrow, right: Arrow, bottom: Arrow, top: Arrow) -> VertexType:
        key = (left, right, bottom, top)
        for vt, arrows in _ARROWS.items():
            if arrows == key:
                return vt
        raise ValueError(f"arrows {key} violate the ice rule")


L, R, U, D = Arrow.LEFT, Arrow.RIGHT, Arrow.UP, Arrow.DOWN

_ARROWS: dict[VertexType, tuple[Arrow, Arrow, Arrow, Arrow]] = {
    VertexType.ONE: (R, R, U, U),
    VertexType.TWO: (L, L, D, D),
    VertexType.THREE: (R, R, D, D),
    VertexType.FOUR: (L, L, U, U),
    VertexType.FIVE: (R, L, D, U),
    VertexType.SIX: (L, R, U, D),
}


@dataclass(frozen=True)
class FreeFermionWeights:
    """Weights w1=w2=√(1−α), w3=w4=√α, w5=w6=1 at the free-fermion point.

    ``alpha`` is kept exact when given as a Fraction (or int); the squared
    weights are then exact rationals.
    """

    alpha: Fraction | float

    def __post_init__(self) -> None:
        if isinstance(self.alpha, int):
            object.__setattr__(self, "alpha", Fraction(self.alpha))
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, Fraction)

    def squared(self, vt: VertexType) -> Fraction | float:
        """Square of the weight of a vertex type."""
        match vt.weight_class:
            case "a":
                return 1 - self.alpha
            case "b":
                return self.alpha
            case _:
                return Fraction(1) if self.exact else 1.0

    def weight(self, vt: VertexType) -> float:
        return math.sqrt(self.squared(vt))

    def free_fermion_defect(self) -> Fraction | float:
        """w1·w2 + w3·w4 − w5·w6, which vanishes identically."""
        return (1 - self.alpha) + self.alpha - 1
