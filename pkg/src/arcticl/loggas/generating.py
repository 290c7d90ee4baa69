"""Determinant formulas for the EFP and the boundary generating function.

With q = N − r − s and the Meixner weight μ(m) = α^m C(q+m, q) on
m = 0..r−1, the emptiness formation probability is a Hankel determinant
of moments of μ, and F(w) = Σ_l (G^(l,r,…,r) − G^(l−1,r,…,r)) w^(l−1) is the
same determinant with its last column replaced by moments of μ(m) u^(−m),
where u = (αw + 1 − α)/w. The boundary generating function is h = F(w)/F(1).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from arcticl.config import ArcticError
from arcticl.loggas.linalg import bareiss_det, interpolate
from arcticl.loggas.meixner import power_sums

logger = logging.getLogger(__name__)

Rational = Fraction | int | float


class LogGasError(ArcticError):
    """Raised for geometries or arguments outside the log-gas formulas."""


def _exact(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _check(N: int, r: int, s: int, alpha: Fraction) -> int:
    if not 0 < alpha < 1:
        raise LogGasError(f"alpha must lie in (0, 1), got {alpha}")
    if s < 1:
        raise LogGasError(f"the log-gas formulas need s >= 1, got s={s}")
    if not 1 <= r <= N:
        raise LogGasError(f"r must lie in [1, {N}], got {r}")
    q = N - r - s
    if q < 0:
        raise LogGasError(f"the log-gas formulas need r + s <= N (N={N}, r={r}, s={s})")
    return q


# ── u ↔ w ───────────────────────────────────────────────────────


def u_w_map(alpha: Rational, w: Rational) -> Fraction | float:
    """u = (αw + 1 − α)/w; w = ±inf maps to u = α."""
    if isinstance(w, float) and math.isinf(w):
        return float(alpha)
    if w == 0:
        raise LogGasError("u(w) has a pole at w = 0")
    if isinstance(alpha, float) or isinstance(w, float):
        return (float(alpha) * w + 1 - float(alpha)) / w
    a, ww = _exact(alpha), _exact(w)
    return (a * ww + 1 - a) / ww


def w_of_u(alpha: Rational, u: Rational) -> Fraction | float:
    """Inverse map w = (1 − α)/(u − α)."""
    if u == alpha:
        raise LogGasError("w(u) has a pole at u = alpha")
    if isinstance(alpha, float) or isinstance(u, float):
        return (1 - float(alpha)) / (float(u) - float(alpha))
    a, uu = _exact(alpha), _exact(u)
    return (1 - a) / (uu - a)


# ── Moment matrices ─────────────────────────────────────────────


@dataclass(frozen=True)
class MomentMatrix:
    """s×s matrix of Meixner moments.

    ``u is None`` gives the Hankel matrix Σ μ m^(j+k); otherwise the last
    column is replaced by Σ μ m^j u^(−m).
    """

    entries: tuple[tuple[Fraction, ...], ...]
    u: Fraction | None = None

    @classmethod
    def build(
        cls, q: int, alpha: Fraction, r: int, s: int, u: Fraction | None = None
    ) -> MomentMatrix:
        hankel = power_sums(q, alpha, r, 2 * s - 2)
        rows = []
        if u is None:
            for j in range(s):
                rows.append(tuple(hankel[j + k] for k in range(s)))
        else:
            biased = power_sums(q, alpha, r, s - 1, u)
            for j in range(s):
                rows.append(tuple(hankel[j + k] for k in range(s - 1)) + (biased[j],))
        return cls(entries=tuple(rows), u=u)

    def det(self) -> Fraction:
        return bareiss_det(self.entries)


def _base_prefactor(q: int, s: int, alpha: Fraction) -> Fraction:
    """(1−α)^(s(s+q)) / α^(s(s−1)/2) · (q!)^s / Π_{j<s} (q+j)!"""
    pref = Fraction(math.factorial(q) ** s)
    for j in range(s):
        pref /= math.factorial(q + j)
    return pref * (1 - alpha) ** (s * (s + q)) / alpha ** (s * (s - 1) // 2)


def hankel_moment_det(N: int, r: int, s: int, alpha: Rational) -> Fraction:
    """Determinant of the Hankel moment matrix entering F(1)."""
    a = _exact(alpha)
    q = _check(N, r, s, a)
    return MomentMatrix.build(q, a, r, s).det()


def F_at_one(N: int, r: int, s: int, alpha: Rational) -> Fraction:
    """F_{N,r,s}(1), the emptiness formation probability G_N^(r,…,r)."""
    a = _exact(alpha)
    if r == N:
        return Fraction(1)
    q = _check(N, r, s, a)
    pref = _base_prefactor(q, s, a)
    for j in range(s):
        pref /= math.factorial(j)
    return pref * MomentMatrix.build(q, a, r, s).det()


def F_at_w(N: int, r: int, s: int, alpha: Rational, w: Rational) -> Fraction:
    """F_{N,r,s}(w); the point u = 1 (w = 1) takes the Hankel branch."""
    a = _exact(alpha)
    ww = _exact(w)
    if ww == 0:
        raise LogGasError("F(w) is evaluated at w != 0 only")
    q = _check(N, r, s, a)
    u = _exact(u_w_map(a, ww))
    if u == 1:
        return F_at_one(N, r, s, a)
    pref = _base_prefactor(q, s, a)
    for j in range(s - 1):
        pref /= math.factorial(j)
    pref *= ww ** (r - 1) * u ** (r + s - 2) / (1 - u) ** (s - 1)
    return pref * MomentMatrix.build(q, a, r, s, u).det()


def h_generating(N: int, r: int, s: int, alpha: Rational, w: Rational) -> Fraction:
    """h_{N,r,s}(w) = Σ_l H^(l) w^(l−1), normalized so that h(1) = 1."""
    total = F_at_one(N, r, s, alpha)
    if total == 0:
        raise LogGasError(f"no admissible states for N={N}, r={r}, s={s}")
    return F_at_w(N, r, s, alpha, w) / total


def h_coefficients(N: int, r: int, s: int, alpha: Rational) -> list[Fraction]:
    """Boundary distribution H^(1..r) extracted by exact interpolation of h."""
    xs = [Fraction(k) for k in range(1, r + 1)]
    coefficients = interpolate(xs, [h_generating(N, r, s, alpha, x) for x in xs])
    if any(c < 0 for c in coefficients):
        raise LogGasError(f"negative boundary probability for N={N}, r={r}, s={s}")
    logger.debug(f"h coefficients N={N} r={r} s={s}: {[str(c) for c in coefficients]}")
    return coefficients


@dataclass(frozen=True)
class GeneratingEval:
    w: Fraction
    u: Fraction
    value: Fraction

    @classmethod
    def at(cls, N: int, r: int, s: int, alpha: Rational, w: Rational) -> GeneratingEval:
        ww = _exact(w)
        return cls(
            w=ww,
            u=_exact(u_w_map(_exact(alpha), ww)),
            value=h_generating(N, r, s, alpha, ww),
        )
