"""Resolvent W(z) of the log-gas density and its functional inverse z(u).

On the principal sheet z > b; the second sheet flips the sign of √(z−b)
(of √((z−a)(z−b)) in the K/L form). The inverse branch "−" lands on the
principal sheet and the branch "+" on the second one, where exp(−W) = u too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from arcticl.curve.regime import CurveError, Regime, RegimeParams, support_collapsed


def _check_sign(value: int, name: str) -> None:
    if value not in (1, -1):
        raise ValueError(f"{name} must be +1 or -1, got {value}")


# ── W(z) ────────────────────────────────────────────────────────


def _regime_one_u(z: float, params: RegimeParams, sheet: int) -> float:
    alpha, Q = params.alpha, params.Q
    t = math.sqrt(alpha * (1 + Q))
    root_a = (1 - t) / math.sqrt(1 - alpha)
    root_b = (1 + t) / math.sqrt(1 - alpha)
    a, b = root_a**2, root_b**2
    zb = sheet * math.sqrt(z - b)
    za = math.sqrt(z - a)
    norm = math.sqrt((b - a) * z)
    t1 = (root_a * zb + root_b * za) / norm
    t2 = (math.sqrt(a + Q) * zb + math.sqrt(b + Q) * za) / norm
    return math.sqrt(alpha) * t1 * t2


def _square_cut_u(z: float, params: RegimeParams, sheet: int) -> float:
    R, a, b = params.R, params.a, params.b
    za = math.sqrt(z - a)
    zb = sheet * math.sqrt(z - b)
    ra, rb = math.sqrt(R - a), math.sqrt(R - b)
    num = (ra * zb - rb * za) * (math.sqrt(b) * za + math.sqrt(a) * zb)
    den = (ra * zb + rb * za) * (math.sqrt(b) * za - math.sqrt(a) * zb)
    return math.sqrt(params.alpha) * num / den


def exp_minus_resolvent(z: float, params: RegimeParams, sheet: int = 1) -> float:
    """exp(−W(z)) for real z > b on the chosen sheet."""
    _check_sign(sheet, "sheet")
    if not z > params.b:
        support = f"[{params.a:.6g}, {params.b:.6g}]"
        raise CurveError(f"z must lie to the right of the support {support}", at=z)
    if params.regime is Regime.I:
        return _regime_one_u(z, params, sheet)
    if params.square_cut and not support_collapsed(params.a, params.b):
        return _square_cut_u(z, params, sheet)
    rho = sheet * math.sqrt((z - params.a) * (z - params.b))
    return float(params.kl.u_of_z(z, rho))


def resolvent(z: float, params: RegimeParams, sheet: int = 1) -> float:
    u = exp_minus_resolvent(z, params, sheet)
    if u <= 0:
        raise CurveError("exp(-W) is not positive on this sheet", at=z)
    return -math.log(u)


def resolvent_kl(z: float, params: RegimeParams, sheet: int = 1) -> float:
    """W(z) through the K/L form, valid for every Q in Regime II."""
    _check_sign(sheet, "sheet")
    if not z > params.b:
        raise CurveError("z must lie to the right of the support", at=z)
    rho = sheet * math.sqrt((z - params.a) * (z - params.b))
    return -math.log(float(params.kl.u_of_z(z, rho)))


# ── z(u) ────────────────────────────────────────────────────────


def branch_radicand(u: ArrayLike, params: RegimeParams) -> NDArray[np.float64]:
    """Quantity under the square root of the inverse; zero where both branches meet."""
    uu = np.asarray(u, dtype=float)
    alpha = params.alpha
    if params.regime is Regime.I:
        return np.ones_like(uu)
    if params.square_cut:
        return params.R**2 * (uu - alpha) * (uu - 1) + (1 + math.sqrt(alpha)) ** 2 * uu
    a, b = params.a, params.b
    m0, m1, m2 = params.kl.M(uu)
    return (a * m1 + m0) * (b * m1 + m0) + ((b - a) / 2) ** 2 * m2**2


def z_of_u(u: ArrayLike, params: RegimeParams, branch: int = -1) -> NDArray[np.float64]:
    """Vectorized inverse; NaN where the radicand is negative or u is a pole."""
    _check_sign(branch, "branch")
    uu = np.asarray(u, dtype=float)
    alpha, Q, R = params.alpha, params.Q, params.R
    with np.errstate(invalid="ignore", divide="ignore"):
        if params.regime is Regime.I:
            c = 1 - alpha * (1 + Q)
            z = -(c * uu + alpha * Q) / ((uu - 1) * (uu - alpha))
        elif params.square_cut:
            d = 2 * (uu - alpha) * (uu - 1)
            root = np.sqrt(branch_radicand(uu, params))
            z = R / 2 - (1 - alpha) * uu / d + branch * (uu - math.sqrt(alpha)) * root / d
        else:
            a, b = params.a, params.b
            m0, m1, m2 = params.kl.M(uu)
            root = np.sqrt(branch_radicand(uu, params))
            z = (m0 * m1 + (a + b) / 2 * m2**2 + branch * m2 * root) / (m2**2 - m1**2)
    return np.where(np.isfinite(z), z, np.nan)


@dataclass(frozen=True)
class ResolventRoot:
    u: float
    z: float
    branch: int
    sheet: int


def _regime_one_sheet(u: float, params: RegimeParams) -> int:
    # sign of dz/du, with z = −N/D
    alpha, Q = params.alpha, params.Q
    c = 1 - alpha * (1 + Q)
    n = c * u + alpha * Q
    d = (u - 1) * (u - alpha)
    return 1 if n * (2 * u - 1 - alpha) - c * d > 0 else -1


def inverse_resolvent(u: float, params: RegimeParams, branch: int = -1) -> ResolventRoot:
    _check_sign(branch, "branch")
    if u == 1 or u == params.alpha:
        raise CurveError("z(u) has simple poles at u = 1 and u = alpha", at=u)
    if params.regime.is_two and (rad := float(branch_radicand(u, params))) < 0:
        raise CurveError(f"negative radicand {rad:.6g} in z(u) for {params.describe()}", at=u)
    z = float(z_of_u(u, params, branch))
    if math.isnan(z):
        raise CurveError("z(u) is undefined", at=u)
    sheet = _regime_one_sheet(u, params) if params.regime is Regime.I else -branch
    return ResolventRoot(u=float(u), z=z, branch=branch, sheet=sheet)
