"""Tangent-line family x − M(w) y − Φ(w) = 0 and its geometric caustic."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize

from arcticl.curve.regime import CurveError, Regime, RegimeParams
from arcticl.curve.resolvent import z_of_u

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

STEP_SCALE = 1e-3
POLE_TOLERANCE = 1e-12


def special_w(alpha: float) -> tuple[float, float, float]:
    """Finite special parameters: the poles of M and the pole of u(w)."""
    return -(1 - alpha) / alpha, 0.0, 1.0


def _u(w: FloatArray, alpha: float) -> FloatArray:
    return alpha + (1 - alpha) / w


# ── M(w) ────────────────────────────────────────────────────────


def _M(w: FloatArray, alpha: float) -> FloatArray:
    return w / ((w - 1) * (alpha * w + 1 - alpha))


def _M_prime(w: FloatArray, alpha: float) -> FloatArray:
    return -(alpha * w**2 + 1 - alpha) / ((w - 1) ** 2 * (alpha * w + 1 - alpha) ** 2)


def _check_w(w: float, alpha: float) -> None:
    # the pole -(1-alpha)/alpha is rarely representable exactly
    near_one = math.isclose(w, 1.0, rel_tol=POLE_TOLERANCE)
    if near_one or abs(alpha * w + 1 - alpha) <= POLE_TOLERANCE:
        raise CurveError("M(w) has poles at w = 1 and w = -(1-alpha)/alpha", at=w)


def slope_M(w: float, alpha: float) -> float:
    """M(w) = w/((w−1)(αw+1−α)); zero at w = ±∞."""
    if math.isinf(w):
        return 0.0
    _check_w(w, alpha)
    return float(_M(np.float64(w), alpha))


def slope_M_prime(w: float, alpha: float) -> float:
    if math.isinf(w):
        return 0.0
    _check_w(w, alpha)
    return float(_M_prime(np.float64(w), alpha))


# ── Φ(w) ────────────────────────────────────────────────────────


def phi_regime_one(w: ArrayLike, alpha: float) -> FloatArray:
    """Φ = αw/(αw+1−α); R and Q drop out."""
    ww = np.asarray(w, dtype=float)
    return alpha * ww / (alpha * ww + 1 - alpha)


def phi_regime_one_prime(w: ArrayLike, alpha: float) -> FloatArray:
    ww = np.asarray(w, dtype=float)
    return alpha * (1 - alpha) / (alpha * ww + 1 - alpha) ** 2


def phi_square_cut(w: ArrayLike, R: float, alpha: float, branch: int = -1) -> FloatArray:
    """Closed form of Φ± for Q = 0 in Regime II, written with ξx, ξy."""
    ww = np.asarray(w, dtype=float)
    u = _u(ww, alpha)
    xi_x, xi_y = R / (R + 1), 1 / (R + 1)
    sa = math.sqrt(alpha)
    with np.errstate(invalid="ignore", divide="ignore"):
        radicand = xi_x**2 * (u - alpha) * (u - 1) + xi_y**2 * (1 + sa) ** 2 * u
        tail = branch * (u - sa) * np.sqrt(radicand) / (2 * u * (u - 1))
        return alpha / (2 * u) + xi_x / 2 + xi_y * (u - alpha) / (2 * u * (u - 1)) + tail


def phi_square_cut_prime(w: ArrayLike, R: float, alpha: float, branch: int = -1) -> FloatArray:
    """dΦ±/dw of the square-cut closed form, through dΦ/du · du/dw."""
    ww = np.asarray(w, dtype=float)
    u = _u(ww, alpha)
    xi_x, xi_y = R / (R + 1), 1 / (R + 1)
    sa = math.sqrt(alpha)
    with np.errstate(invalid="ignore", divide="ignore"):
        radicand = xi_x**2 * (u - alpha) * (u - 1) + xi_y**2 * (1 + sa) ** 2 * u
        d_radicand = xi_x**2 * (2 * u - 1 - alpha) + xi_y**2 * (1 + sa) ** 2
        root = np.sqrt(radicand)
        den = u * (u - 1)
        d_den = 2 * u - 1
        d_ratio = (-(u**2) + 2 * alpha * u - alpha) / den**2
        d_tail = (root + (u - sa) * d_radicand / (2 * root)) / den
        d_tail -= (u - sa) * root * d_den / den**2
        d_phi = -alpha / (2 * u**2) + xi_y * d_ratio / 2 + branch * d_tail / 2
        return d_phi * -(1 - alpha) / ww**2


def phi_general(w: ArrayLike, params: RegimeParams, branch: int = -1) -> FloatArray:
    """Φ = [Rα + (u−α)/(u−1) + (u−α) z(u)] / ((R+Q+1) u) with z on the given branch."""
    ww = np.asarray(w, dtype=float)
    alpha, R, Q = params.alpha, params.R, params.Q
    u = _u(ww, alpha)
    z = z_of_u(u, params, branch)
    with np.errstate(invalid="ignore", divide="ignore"):
        return (R * alpha + (u - alpha) / (u - 1) + (u - alpha) * z) / ((R + Q + 1) * u)


def phi_values(w: ArrayLike, params: RegimeParams, branch: int = -1) -> FloatArray:
    """Vectorized Φ; NaN where the branch radicand is negative."""
    if params.regime is Regime.I:
        return phi_regime_one(w, params.alpha)
    if params.square_cut:
        return phi_square_cut(w, params.R, params.alpha, branch)
    return phi_general(w, params, branch)


def phi(w: float, params: RegimeParams, branch: int = -1) -> float:
    if not math.isfinite(w):
        raise CurveError("phi is evaluated at finite w only", at=w)
    if w == 0:
        raise CurveError("u(w) has a pole at w = 0", at=w)
    if params.regime.is_two and w == 1:
        raise CurveError("phi has a removable pole at w = 1; use a one-sided limit", at=w)
    value = float(phi_values(w, params, branch))
    if math.isnan(value):
        raise CurveError(f"negative radicand on branch {branch:+d}", at=w)
    return value


def _step(w: FloatArray, alpha: float) -> FloatArray:
    dist = np.min(np.abs(np.subtract.outer(w, np.array(special_w(alpha)))), axis=-1)
    return STEP_SCALE * np.minimum(np.maximum(1.0, np.abs(w)), dist)


def phi_prime(w: ArrayLike, params: RegimeParams, branch: int = -1) -> FloatArray:
    """Φ′(w); closed form in Regime I and for a square cut, five-point stencil otherwise."""
    ww = np.asarray(w, dtype=float)
    if params.regime is Regime.I:
        return phi_regime_one_prime(ww, params.alpha)
    if params.square_cut:
        return phi_square_cut_prime(ww, params.R, params.alpha, branch)
    return phi_stencil(ww, params, branch)


def phi_stencil(w: ArrayLike, params: RegimeParams, branch: int = -1) -> FloatArray:
    """Five-point central difference of Φ with a step shrinking near the special w."""
    ww = np.asarray(w, dtype=float)
    h = _step(ww, params.alpha)

    def f(x: FloatArray) -> FloatArray:
        return phi_values(x, params, branch)

    return (-f(ww + 2 * h) + 8 * f(ww + h) - 8 * f(ww - h) + f(ww - 2 * h)) / (12 * h)


# ── Family and caustic ──────────────────────────────────────────


@dataclass(frozen=True)
class TangentFamily:
    params: RegimeParams
    branch: int = -1

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @property
    def label(self) -> str:
        if self.params.regime is Regime.I:
            return "ellipse"
        return "C-" if self.branch < 0 else "C+"

    @property
    def domain(self) -> str:
        poles = ", ".join(f"{w:g}" for w in special_w(self.alpha))
        return f"w in R minus {{{poles}}}, compactified at infinity"

    def phi(self, w: ArrayLike) -> FloatArray:
        return phi_values(w, self.params, self.branch)

    def phi_prime(self, w: ArrayLike) -> FloatArray:
        return phi_prime(w, self.params, self.branch)

    def M(self, w: ArrayLike) -> FloatArray:
        return _M(np.asarray(w, dtype=float), self.alpha)

    def M_prime(self, w: ArrayLike) -> FloatArray:
        return _M_prime(np.asarray(w, dtype=float), self.alpha)

    def line(self, x: float, y: float, w: float) -> float:
        """x − M(w) y − Φ(w)."""
        return float(x - self.M(w) * y - self.phi(w))

    def caustic(self, w: ArrayLike) -> tuple[FloatArray, FloatArray]:
        """Vectorized envelope: x = −MΦ′/M′ + Φ, y = −Φ′/M′."""
        ww = np.asarray(w, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = self.phi_prime(ww) / self.M_prime(ww)
            return self.phi(ww) - self.M(ww) * ratio, -ratio


def caustic_point(family: TangentFamily, w: float) -> tuple[float, float]:
    _check_w(w, family.alpha)
    if w == 0:
        raise CurveError("u(w) has a pole at w = 0", at=w)
    if slope_M_prime(w, family.alpha) == 0:
        raise CurveError("M'(w) vanishes", at=w)
    x, y = family.caustic(w)
    if not (math.isfinite(float(x)) and math.isfinite(float(y))):
        raise CurveError(f"no caustic point on branch {family.label}", at=w)
    return float(x), float(y)


# ── Distinguished lines ─────────────────────────────────────────


def _corner_line(w: float, family: TangentFamily) -> float:
    xi_x, xi_y = family.params.geometry.cut_corner
    return family.line(xi_x, xi_y, w)


def cutoff_w0(params: RegimeParams) -> float:
    """Parameter of the tangent line through the cut corner (ξx, ξy).

    Regime I takes the larger root of the quadratic obtained by clearing
    denominators. Regime II scans the physical branch on (1, ∞) and returns
    ∞ when the corner line never changes sign.
    """
    alpha = params.alpha
    xi_x, xi_y = params.geometry.cut_corner
    if params.regime is Regime.I:
        qa = alpha * (xi_x - 1)
        qb = xi_x * (1 - 2 * alpha) - xi_y + alpha
        qc = -xi_x * (1 - alpha)
        disc = qb * qb - 4 * qa * qc
        if disc < 0:
            raise CurveError(f"no tangent line through the cut corner ({params.describe()})")
        return max((-qb + s * math.sqrt(disc)) / (2 * qa) for s in (1, -1))
    family = TangentFamily(params, branch=-1)
    grid = 1 + np.logspace(-6, 7, 800)
    values = np.array([_corner_line(float(w), family) for w in grid])
    for lo, hi, g_lo, g_hi in zip(grid[:-1], grid[1:], values[:-1], values[1:], strict=True):
        if np.isfinite(g_lo) and np.isfinite(g_hi) and g_lo * g_hi < 0:
            w0 = float(optimize.brentq(_corner_line, lo, hi, args=(family,), xtol=1e-13))
            logger.debug(f"corner line changes sign at w0={w0:.12g}")
            return w0
    return math.inf


def double_tangent_w(alpha: float) -> float:
    """w = (1+√α)/√α, where u = √α and Φ+ = Φ− for a square cut."""
    return (1 + math.sqrt(alpha)) / math.sqrt(alpha)


def double_tangent_phi(R: float, alpha: float) -> float:
    """Common value (1+√α)/2 − ξy of both branches at the double tangent."""
    return (1 + math.sqrt(alpha)) / 2 - 1 / (R + 1)


# ── Regime I ellipse ────────────────────────────────────────────


def arctic_ellipse(x: ArrayLike, y: ArrayLike, alpha: float) -> FloatArray:
    """(1−x−y)²/(1−α) + (x−y)²/α − 1."""
    xx, yy = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return (1 - xx - yy) ** 2 / (1 - alpha) + (xx - yy) ** 2 / alpha - 1


def regime_one_discriminant(x: ArrayLike, y: ArrayLike, alpha: float) -> FloatArray:
    """Discriminant of P(u) = x u² + (y−x−α) u + α(1−y); equals α(1−α) times the ellipse."""
    xx, yy = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return (yy - xx - alpha) ** 2 - 4 * alpha * xx * (1 - yy)


def ellipse_point(w: ArrayLike, alpha: float) -> tuple[FloatArray, FloatArray]:
    """Closed-form Regime I caustic."""
    ww = np.asarray(w, dtype=float)
    den = alpha * ww**2 + 1 - alpha
    return alpha * ww**2 / den, alpha * (1 - alpha) * (ww - 1) ** 2 / den
