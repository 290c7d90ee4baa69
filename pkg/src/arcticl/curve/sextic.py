"""Implicit degree-6 form of the arctic curve for a square cut (Q = 0).

In scaled diagonal coordinates Z1 = (x−y)/√α, Z2 = (1−x−y)/√(1−α) the curve
is A = (1−α)²α⁶ Σ C_{n1 n2}(α, β) Z1^n1 Z2^n2 = 0 with β = (R−1)/((R+1)√α).
Only even powers of Z2 occur. The same curve is the non-trivial factor of the
discriminant of the quartic in u obtained by squaring the tangent-line
equation: D(P) = (4/α) (z1 − (1+√α)/2 + ξy)² A.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from arcticl.curve.branches import CurveSet
from arcticl.curve.regime import CurveError, RegimeError, critical_R

logger = logging.getLogger(__name__)

RATIO_TOLERANCE = 1e-8
LINE_EXCLUSION = 1e-6
BETA_SLACK = 1e-12


def sextic_coefficients(a: float, b: float) -> dict[tuple[int, int], float]:
    """The sixteen non-zero C_{n1 n2} at α = a, β = b."""
    t = 4 * (1 - a) ** 2 * b**2 + a * (1 - b) ** 4
    return {
        (6, 0): 64 * (1 - a) ** 2 * (1 - 2 * a * b + a * b**2) ** 2,
        (5, 0): 64 * (1 - a) ** 2 * (
            1 - (5 + 2 * a) * b + 18 * a * b**2 - 2 * a * (4 + 7 * a) * b**3
            + 13 * a**2 * b**4 - 3 * a**2 * b**5
        ),
        (4, 2): 128 * (1 - a) ** 2 * (
            1 + (2 - 6 * a) * b - 2 * (1 - a - 3 * a**2) * b**2 + 2 * (1 - 3 * a) * a * b**3
            + a**2 * b**4
        ),
        (4, 0): 16 * (1 - a) * (
            1 + a - (22 - 18 * a + 8 * a**2) * b + (41 + 13 * a - 32 * a**2 + 8 * a**3) * b**2
            - 4 * a * (36 - 25 * a - a**2) * b**3 + a * (52 + 63 * a - 85 * a**2) * b**4
            - 6 * a**2 * (13 - 11 * a) * b**5 + (15 - 13 * a) * a**2 * b**6
        ),
        (3, 2): 128 * (1 - a) ** 2 * (
            1 - 2 * (2 + a) * b - (4 - 18 * a) * b**2 + (4 - 6 * a - 14 * a**2) * b**3
            - (4 - 13 * a) * a * b**4 - 2 * a**2 * b**5
        ),
        (3, 0): 32 * (1 - a) * (1 - b) * (
            a - (2 + 3 * a + 2 * a**2) * b + (22 - 21 * a + 19 * a**2) * b**2
            - a * (59 - 48 * a + 19 * a**2) * b**3 + a * (22 + 18 * a - 15 * a**2) * b**4
            - a**2 * (28 - 17 * a) * b**5 + a**2 * (5 - 3 * a) * b**6
        ),
        (2, 4): 64 * (1 - a) ** 2 * (
            1 + (8 - 12 * a) * b - 2 * (4 - a - 6 * a**2) * b**2 + 4 * a * (2 - 3 * a) * b**3
            + a**2 * b**4
        ),
        (2, 2): -32 * (1 - a) * (
            1 + (12 - 26 * a + 8 * a**2) * b - (15 - 3 * a - 35 * a**2 + 8 * a**3) * b**2
            - (22 - 96 * a + 90 * a**2 + 4 * a**3) * b**3
            + (12 - 25 * a - 35 * a**2 + 63 * a**3) * b**4
            - 2 * a * (6 - 26 * a + 23 * a**2) * b**5 - a**2 * (6 - 7 * a) * b**6
        ),
        (2, 0): (
            4 * (2 - a) * a - 16 * a * (9 - 8 * a + a**2) * b
            + 4 * (24 + 78 * a - 36 * a**2 - 42 * a**3 + 4 * a**4) * b**2
            - 32 * (26 - 41 * a + 64 * a**2 - 45 * a**3 + 3 * a**4) * b**3
            + 4 * (104 + 286 * a - 438 * a**2 + 322 * a**3 - 204 * a**4) * b**4
            - 16 * a * (105 - 96 * a + 33 * a**2 - 28 * a**3) * b**5
            + 8 * a * (41 + 102 * a - 163 * a**2 + 34 * a**3) * b**6
            - 32 * a**2 * (16 - 20 * a + 5 * a**2) * b**7
            + 4 * a**2 * (15 - 18 * a + 4 * a**2) * b**8
        ),
        (1, 4): 64 * (1 - a) ** 2 * (
            1 - (3 + 2 * a) * b - (8 - 18 * a) * b**2 + 2 * (4 - 2 * a - 7 * a**2) * b**3
            - a * (8 - 13 * a) * b**4 - a**2 * b**5
        ),
        (1, 2): -32 * (1 - a) * (
            2 - a - (6 + 3 * a - 2 * a**2) * b - (16 - 58 * a + 21 * a**2) * b**2
            + (14 - 20 * a - 48 * a**2 + 19 * a**3) * b**3
            + (14 - 53 * a + 78 * a**2 - 4 * a**3) * b**4
            - (4 - 3 * a - 16 * a**2 + 36 * a**3) * b**5
            + a * (4 - 17 * a + 20 * a**2) * b**6 + a**2 * (2 - 3 * a) * b**7
        ),
        (1, 0): 4 * t * (
            a - (4 - a + 2 * a**2) * b + (28 - 30 * a + 12 * a**2) * b**2
            - (8 + 22 * a - 20 * a**2) * b**3 + a * (21 - 16 * a) * b**4 - a * (3 - 2 * a) * b**5
        ),
        (0, 6): 256 * (1 - a) ** 3 * (1 - b) * b * (1 - a * b),
        (0, 4): 16 * (1 - a) ** 2 * (
            1 - (26 - 8 * a) * b + (41 + 30 * a - 8 * a**2) * b**2
            - 4 * (1 + 21 * a + a**2) * b**3 - (8 - 30 * a - 41 * a**2) * b**4
            + 2 * (4 - 13 * a) * a * b**5 + a**2 * b**6
        ),
        (0, 2): -8 * (1 - a) * (1 - b) * (
            2 - a - (18 - 7 * a + 2 * a**2) * b + (32 + 16 * a + a**2 + 2 * a**3) * b**2
            + (24 - 138 * a + 29 * a**2 - 10 * a**3) * b**3
            + (10 - 29 * a + 138 * a**2 - 24 * a**3) * b**4
            - (2 + a + 16 * a**2 + 32 * a**3) * b**5
            + a * (2 - 7 * a + 18 * a**2) * b**6 + a**2 * (1 - 2 * a) * b**7
        ),
        (0, 0): (1 - 6 * b + b**2) * t**2,
    }


def beta_of(R: float, alpha: float) -> float:
    return (R - 1) / ((R + 1) * math.sqrt(alpha))


@dataclass(frozen=True)
class ImplicitSexticQ0:
    alpha: float
    beta: float
    coefficients: dict[tuple[int, int], float] = field(repr=False)

    @property
    def scale(self) -> float:
        """Overall factor (1−α)²α⁶."""
        return (1 - self.alpha) ** 2 * self.alpha**6

    def scaled(self, z1: ArrayLike, z2: ArrayLike) -> tuple[NDArray[np.float64], ...]:
        return (
            np.asarray(z1, dtype=float) / math.sqrt(self.alpha),
            np.asarray(z2, dtype=float) / math.sqrt(1 - self.alpha),
        )

    def reduced(self, Z1: ArrayLike, Z2: ArrayLike) -> NDArray[np.float64]:
        """Σ C_{n1 n2} Z1^n1 Z2^n2 in scaled coordinates."""
        z1, z2 = np.asarray(Z1, dtype=float), np.asarray(Z2, dtype=float)
        return sum(
            (c * z1**n1 * z2**n2 for (n1, n2), c in self.coefficients.items()),
            start=np.zeros(np.broadcast(z1, z2).shape),
        )

    def __call__(self, z1: ArrayLike, z2: ArrayLike) -> NDArray[np.float64]:
        """A(z1, z2) in diagonal coordinates z1 = x−y, z2 = 1−x−y."""
        return self.scale * self.reduced(*self.scaled(z1, z2))

    def at_xy(self, x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
        xx, yy = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        return self(xx - yy, 1 - xx - yy)

    def local_scale(self, z1: ArrayLike, z2: ArrayLike) -> NDArray[np.float64]:
        """Σ |C| |Z1|^n1 |Z2|^n2, the size of the terms that cancel on the curve."""
        s1, s2 = (np.abs(v) for v in self.scaled(z1, z2))
        return self.scale * sum(
            (abs(c) * s1**n1 * s2**n2 for (n1, n2), c in self.coefficients.items()),
            start=np.zeros(np.broadcast(s1, s2).shape),
        )


def implicit_sextic_Q0(alpha: float, R: float) -> ImplicitSexticQ0:
    if not 0 < alpha < 1:
        raise RegimeError(f"alpha must lie in (0, 1), got {alpha}")
    beta = beta_of(R, alpha)
    if not -BETA_SLACK <= beta <= 1 + BETA_SLACK:
        raise RegimeError(
            f"beta={beta:.6g} is outside [0, 1]; R={R} must lie in [1, {critical_R(0, alpha):.6g}]"
        )
    beta = min(max(beta, 0.0), 1.0)
    return ImplicitSexticQ0(alpha, beta, sextic_coefficients(alpha, beta))


def factored_at_beta_one(alpha: float, Z1: ArrayLike, Z2: ArrayLike) -> NDArray[np.float64]:
    """Reduced sextic at β = 1: a double line, the unit circle and a point circle."""
    z1, z2 = np.asarray(Z1, dtype=float), np.asarray(Z2, dtype=float)
    return 64 * (1 - alpha) ** 4 * (z1 - 1) ** 2 * (z1**2 + z2**2 - 1) * ((z1 - 1) ** 2 + z2**2)


def factored_at_beta_zero(alpha: float, Z1: ArrayLike, Z2: ArrayLike) -> NDArray[np.float64]:
    """Reduced sextic at β = 0: a double line times two circles of radius ½."""
    z1, z2 = np.asarray(Z1, dtype=float), np.asarray(Z2, dtype=float)
    c = 1 / (2 * math.sqrt(1 - alpha))
    return (
        16 * (1 - alpha) ** 2 * (2 * z1 + 1) ** 2
        * (z1**2 + (z2 - c) ** 2 - 0.25) * (z1**2 + (z2 + c) ** 2 - 0.25)
    )


# ── Discriminant route ──────────────────────────────────────────


def tangent_quartic(alpha: float, R: float, z1: float, z2: float) -> tuple[float, ...]:
    """Coefficients (P4, …, P0) of P(u) = p(u)² − (u−√α)² q(u).

    p and q come from multiplying x − M y − Φ± by 2u(u−1); P vanishes on
    every tangent line through the point.
    """
    xi_x, xi_y = R / (R + 1), 1 / (R + 1)
    sa = math.sqrt(alpha)
    p2, p1, p0 = z1 - z2 - xi_x + 1, -2 * z1 + xi_x - xi_y - alpha, alpha * (z1 + z2 + xi_y)
    q2 = xi_x**2
    q1 = -(xi_x**2) * (1 + alpha) + xi_y**2 * (1 + sa) ** 2
    q0 = xi_x**2 * alpha
    r2, r1, r0 = 1.0, -2 * sa, alpha
    return (
        p2 * p2 - r2 * q2,
        2 * p2 * p1 - (r2 * q1 + r1 * q2),
        p1 * p1 + 2 * p2 * p0 - (r2 * q0 + r1 * q1 + r0 * q2),
        2 * p1 * p0 - (r1 * q0 + r0 * q1),
        p0 * p0 - r0 * q0,
    )


def quartic_discriminant(coefficients: Iterable[float]) -> float:
    a, b, c, d, e = coefficients
    return (
        256 * a**3 * e**3 - 192 * a**2 * b * d * e**2 - 128 * a**2 * c**2 * e**2
        + 144 * a**2 * c * d**2 * e - 27 * a**2 * d**4 + 144 * a * b**2 * c * e**2
        - 6 * a * b**2 * d**2 * e - 80 * a * b * c**2 * d * e + 18 * a * b * c * d**3
        + 16 * a * c**4 * e - 4 * a * c**3 * d**2 - 27 * b**4 * e**2 + 18 * b**3 * c * d * e
        - 4 * b**3 * d**3 - 4 * b**2 * c**3 * e + b**2 * c**2 * d**2
    )


@dataclass(frozen=True)
class DiscriminantSample:
    z1: float
    z2: float
    discriminant: float
    factored: float

    @property
    def ratio(self) -> float:
        return self.discriminant / self.factored

    @property
    def ok(self) -> bool:
        return abs(self.ratio - 1) < RATIO_TOLERANCE


@dataclass
class DiscriminantReport:
    alpha: float
    R: float
    samples: list[DiscriminantSample]
    curve_residual: float | None = None

    @property
    def ok(self) -> bool:
        on_curve = self.curve_residual is None or self.curve_residual < RATIO_TOLERANCE
        return on_curve and all(s.ok for s in self.samples)

    @property
    def worst_ratio_error(self) -> float:
        return max((abs(s.ratio - 1) for s in self.samples), default=0.0)


def line_factor(alpha: float, R: float, z1: float) -> float:
    return z1 - (1 + math.sqrt(alpha)) / 2 + 1 / (R + 1)


def discriminant_check(
    alpha: float,
    R: float,
    sample_points: Iterable[tuple[float, float]],
    curve: CurveSet | None = None,
) -> DiscriminantReport:
    """Compare D(P) with (4/α)·line²·A at diagonal-coordinate samples.

    With ``curve`` given, also reports max |A| / local scale over its samples.
    """
    sextic = implicit_sextic_Q0(alpha, R)
    samples = []
    for z1, z2 in sample_points:
        line = line_factor(alpha, R, z1)
        if abs(line) < LINE_EXCLUSION:
            raise CurveError("sample lies on the factored line", at=z1)
        disc = quartic_discriminant(tangent_quartic(alpha, R, z1, z2))
        factored = 4 / alpha * line**2 * float(sextic(z1, z2))
        samples.append(DiscriminantSample(z1, z2, disc, factored))
    residual = None
    if curve is not None:
        residual = 0.0
        for branch in curve:
            z1s, z2s = branch.x - branch.y, 1 - branch.x - branch.y
            rel = np.abs(sextic(z1s, z2s)) / sextic.local_scale(z1s, z2s)
            if len(rel):
                residual = max(residual, float(np.max(rel)))
    report = DiscriminantReport(alpha, R, samples, residual)
    logger.info(
        f"discriminant check alpha={alpha:g} R={R:g}: worst ratio error "
        f"{report.worst_ratio_error:.3g}, curve residual {residual}"
    )
    return report
