"""Phase regimes of the L-shaped domain and the support of the equilibrium density.

Regime I (R ≥ Rc) has the arctic ellipse of the square; Regime II (R < Rc)
has a density supported on [a, b] ⊂ [0, R] whose endpoints come from the
root η ∈ [0, 1] of a quartic. Regime II splits into II_A (Q ≤ Qc) and II_B
(Q > Qc), which differ by the sign in front of √a.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize

from arcticl.config import ArcticError
from arcticl.model.geometry import ScaledGeometry

logger = logging.getLogger(__name__)

AB_TOLERANCE = 1e-10
COLLAPSE_TOLERANCE = 1e-12


class RegimeError(ArcticError):
    """Raised for parameters outside the regime a formula is valid in."""


class CurveError(ArcticError):
    """Raised at poles and negative radicands; ``at`` carries the offending w or u."""

    def __init__(self, message: str, *, at: float | None = None) -> None:
        super().__init__(message if at is None else f"{message} (at {at:.12g})")
        self.at = at


class Regime(StrEnum):
    I = "I"
    II_A = "IIA"
    II_B = "IIB"

    @property
    def is_two(self) -> bool:
        return self is not Regime.I


def _check_alpha(alpha: float) -> float:
    a = float(alpha)
    if not 0 < a < 1:
        raise RegimeError(f"alpha must lie in (0, 1), got {alpha}")
    return a


def critical_R(Q: float, alpha: float) -> float:
    """Rc = (1 + √(α(1+Q)))² / (1 − α)."""
    a = _check_alpha(alpha)
    if Q < 0:
        raise RegimeError(f"Q must be non-negative, got {Q}")
    return (1 + math.sqrt(a * (1 + Q))) ** 2 / (1 - a)


def critical_Q(alpha: float) -> float:
    """Qc = 1/α − 1, where the lower endpoint a touches zero."""
    return 1 / _check_alpha(alpha) - 1


@dataclass(frozen=True)
class Classification:
    regime: Regime
    R: float
    Rc: float
    boundary: bool = False

    def __str__(self) -> str:
        return f"{self.regime} (boundary)" if self.boundary else str(self.regime)


def classify_regime(R: float, Q: float, alpha: float) -> Classification:
    if R < 1:
        raise RegimeError(f"R must be at least 1, got {R}")
    Rc = critical_R(Q, alpha)
    if math.isclose(R, Rc, rel_tol=1e-12):
        return Classification(Regime.I, R, Rc, boundary=True)
    if R > Rc:
        return Classification(Regime.I, R, Rc)
    regime = Regime.II_A if Q <= critical_Q(alpha) else Regime.II_B
    return Classification(regime, R, Rc)


# ── Endpoints ───────────────────────────────────────────────────


def eta_quartic(eta: float, R: float, Q: float, alpha: float) -> float:
    """α(1+η)²(1+Q+Rη)(1+(R+Q)η) − (1−η)²(1+Rη)(1+Q+(R+Q)η)."""
    return alpha * (1 + eta) ** 2 * (1 + Q + R * eta) * (1 + (R + Q) * eta) - (1 - eta) ** 2 * (
        1 + R * eta
    ) * (1 + Q + (R + Q) * eta)


def endpoints_from_eta(eta: float, R: float, Q: float) -> tuple[float, float, float, float]:
    """(A+, A−, a, b) with a, b = A+ + A− ∓ 2√(A+A−)."""
    den = (2 + Q + (2 * R + Q) * eta) ** 2
    a_plus = (R + Q + 1) * (1 + eta) * (1 + R * eta) * (1 + (R + Q) * eta) / den
    a_minus = (R - 1) * (1 - eta) * (1 + Q + R * eta) * (1 + Q + (R + Q) * eta) / den
    cross = 2 * math.sqrt(a_plus * a_minus)
    return a_plus, a_minus, a_plus + a_minus - cross, a_plus + a_minus + cross


def square_cut_endpoints(R: float, alpha: float) -> tuple[float, float]:
    """Closed-form a, b for Q = 0: (√(R+1) ∓ √((R−1)√α))² / (2(1+√α))."""
    sa = math.sqrt(_check_alpha(alpha))
    den = 2 * (1 + sa)
    lo = math.sqrt(R + 1) - math.sqrt((R - 1) * sa)
    hi = math.sqrt(R + 1) + math.sqrt((R - 1) * sa)
    return lo**2 / den, hi**2 / den


def regime_one_roots(Q: float, alpha: float) -> tuple[float, float]:
    """Signed (√a, √b) of Regime I; √a turns negative past Qc."""
    a = _check_alpha(alpha)
    t = math.sqrt(a * (1 + Q))
    scale = math.sqrt(1 - a)
    return (1 - t) / scale, (1 + t) / scale


def support_collapsed(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=COLLAPSE_TOLERANCE, abs_tol=COLLAPSE_TOLERANCE)


def ab_residuals(
    a: float, b: float, R: float, Q: float, alpha: float, sign: int = 1
) -> tuple[float, float]:
    """Residuals of the two relations fixing a and b in Regime II.

    When the support collapses to a point (R = 1) the first relation is 0/0 and
    is replaced by its limit as b → a.
    """
    sa = math.sqrt(alpha)
    ra, rb = math.sqrt(R - a), math.sqrt(R - b)
    if support_collapsed(a, b):
        c = (a + b) / 2
        first = sa * math.sqrt(c * (c + Q)) * (1 + sign) / (2 * (R - c)) - 1
    else:
        first = (
            sa * (ra - rb) / (ra + rb) * (math.sqrt(b) + sign * math.sqrt(a))
            / (math.sqrt(b + Q) - math.sqrt(a + Q))
            - 1
        )
    second = (
        (sign * math.sqrt(a * b) + math.sqrt((a + Q) * (b + Q)) - Q) / 2
        + math.sqrt((R - a) * (R - b))
        - 1
    )
    return first, second


# ── K/L chain ───────────────────────────────────────────────────


@dataclass(frozen=True)
class KLChain:
    """Coefficients of u(z) = √α (K2ρ + K1z + K0)/(L2ρ + L1z + L0), ρ = √((z−a)(z−b)).

    Only the ratios K_i : L_j matter. ``width`` is the factor the chain carries
    relative to its b → a limit: b − a normally, 1 for a collapsed support.
    """

    K: tuple[float, float, float]
    L: tuple[float, float, float]
    alpha: float
    width: float = 1.0

    def M(self, u: ArrayLike) -> tuple[NDArray[np.float64], ...]:
        """M_i(u) = L_i u/√α − K_i, for i = 0, 1, 2."""
        uu = np.asarray(u, dtype=float)
        scale = uu / math.sqrt(self.alpha)
        return tuple(li * scale - ki for ki, li in zip(self.K, self.L, strict=True))

    def u_of_z(self, z: ArrayLike, rho: ArrayLike) -> NDArray[np.float64]:
        zz, rr = np.asarray(z, dtype=float), np.asarray(rho, dtype=float)
        k0, k1, k2 = self.K
        l0, l1, l2 = self.L
        return math.sqrt(self.alpha) * (k2 * rr + k1 * zz + k0) / (l2 * rr + l1 * zz + l0)

    def identity_residual(self, u: float) -> float:
        """M2² − M1² − width²(u−α)(u−1)/α, which vanishes identically."""
        _, m1, m2 = self.M(u)
        target = self.width**2 * (u - self.alpha) * (u - 1) / self.alpha
        return float(m2**2 - m1**2 - target)


def _collapsed_chain(c: float, R: float, Q: float, alpha: float, sign: int) -> KLChain:
    # every coefficient is odd under a <-> b, so K/(b-a) and L/(b-a) have finite limits
    if sign != 1:
        raise RegimeError(f"the support collapses to {c:.6g} but Regime II_B needs a band")
    h = 2 * math.sqrt((R - c) * (c + Q))
    m = 2 * math.sqrt((R - c) * c)
    K = ((c * Q - R * c - 2 * R * Q) / h, (2 * c + Q - R) / h, (R + Q) / h)
    L = (R * c / m, (R - 2 * c) / m, R / m)
    return KLChain(K=K, L=L, alpha=alpha)


def kl_chain(a: float, b: float, R: float, Q: float, alpha: float, sign: int = 1) -> KLChain:
    if support_collapsed(a, b):
        return _collapsed_chain((a + b) / 2, R, Q, alpha, sign)
    sq = math.sqrt
    k2 = sq((R - a) * (b + Q)) - sq((R - b) * (a + Q))
    k1 = sq((R - a) * (a + Q)) - sq((R - b) * (b + Q))
    k0 = a * sq((R - b) * (b + Q)) - b * sq((R - a) * (a + Q))
    l2 = sq((R - a) * b) - sign * sq((R - b) * a)
    l1 = sq((R - b) * b) - sign * sq((R - a) * a)
    l0 = sign * b * sq((R - a) * a) - a * sq((R - b) * b)
    return KLChain(K=(k0, k1, k2), L=(l0, l1, l2), alpha=alpha, width=b - a)


# ── Parameters ──────────────────────────────────────────────────


@dataclass(frozen=True)
class RegimeParams:
    regime: Regime
    R: float
    Q: float
    alpha: float
    a: float
    b: float
    eta: float | None = None
    A_plus: float | None = None
    A_minus: float | None = None
    boundary: bool = False

    @property
    def sign(self) -> int:
        """+1 in Regime I and II_A, −1 in II_B."""
        return -1 if self.regime is Regime.II_B else 1

    @property
    def square_cut(self) -> bool:
        return self.Q == 0

    @property
    def geometry(self) -> ScaledGeometry:
        return ScaledGeometry.from_ratios(self.R, self.Q, self.alpha)

    @property
    def kl(self) -> KLChain:
        if not self.regime.is_two:
            raise RegimeError("the K/L chain exists in Regime II only")
        return kl_chain(self.a, self.b, self.R, self.Q, self.alpha, self.sign)

    def residuals(self) -> tuple[float, float]:
        return ab_residuals(self.a, self.b, self.R, self.Q, self.alpha, self.sign)

    def describe(self) -> str:
        base = f"regime {self.regime}{' (boundary)' if self.boundary else ''}"
        support = f"[{self.a:.6g}, {self.b:.6g}]"
        return f"{base}: R={self.R:g}, Q={self.Q:g}, alpha={self.alpha:g}, [a, b]={support}"


def eta_sign_changes(R: float, Q: float, alpha: float, points: int = 400) -> int:
    grid = np.linspace(0.0, 1.0, points)
    values = np.array([eta_quartic(e, R, Q, alpha) for e in grid])
    return int(np.count_nonzero(np.diff(np.sign(values)) != 0))


def solve_eta_ab(R: float, Q: float, alpha: float) -> RegimeParams:
    """Root η ∈ [0, 1] of the quartic and the endpoints a, b it determines."""
    a = _check_alpha(alpha)
    cls = classify_regime(R, Q, a)
    if not cls.regime.is_two:
        raise RegimeError(f"R={R} >= Rc={cls.Rc:.6g}: solve_eta_ab needs Regime II")
    lo, hi = eta_quartic(0.0, R, Q, a), eta_quartic(1.0, R, Q, a)
    if lo * hi > 0:
        raise RegimeError(f"the eta quartic has no bracketed root in [0, 1] (R={R}, Q={Q})")
    if (changes := eta_sign_changes(R, Q, a)) > 1:
        logger.warning(f"eta quartic changes sign {changes} times on [0, 1]; taking the bracket")
    eta = float(optimize.brentq(eta_quartic, 0.0, 1.0, args=(R, Q, a), xtol=1e-15))
    a_plus, a_minus, lower, upper = endpoints_from_eta(eta, R, Q)
    params = RegimeParams(
        regime=cls.regime,
        R=float(R),
        Q=float(Q),
        alpha=a,
        a=max(lower, 0.0),
        b=upper,
        eta=eta,
        A_plus=a_plus,
        A_minus=a_minus,
    )
    residuals = params.residuals()
    if max(abs(r) for r in residuals) > AB_TOLERANCE:
        logger.warning(f"endpoint relations off by {residuals} for {params.describe()}")
    logger.debug(f"eta={eta:.15g} {params.describe()}")
    return params


def regime_params(R: float, Q: float, alpha: float) -> RegimeParams:
    """Parameters for any regime; Regime I carries the squared signed roots as a, b."""
    cls = classify_regime(R, Q, alpha)
    if cls.regime.is_two:
        return solve_eta_ab(R, Q, alpha)
    root_a, root_b = regime_one_roots(Q, alpha)
    return RegimeParams(
        regime=Regime.I,
        R=float(R),
        Q=float(Q),
        alpha=float(alpha),
        a=root_a**2,
        b=root_b**2,
        boundary=cls.boundary,
    )
