"""Meixner site weight of the discrete log-gas and its moment tables."""

from __future__ import annotations

from fractions import Fraction


def binomials(q: int, count: int) -> list[int]:
    """C(q+m, q) for m = 0..count-1, built by incremental multiplication."""
    out: list[int] = []
    value = 1
    for m in range(count):
        out.append(value)
        value = value * (q + m + 1) // (m + 1)
    return out


def meixner_weight(q: int, alpha: Fraction, m: int) -> Fraction:
    """μ_q^α(m) = α^m C(q+m, q)."""
    if q < 0 or m < 0:
        raise ValueError(f"Meixner weight needs q, m >= 0, got q={q}, m={m}")
    return Fraction(alpha) ** m * binomials(q, m + 1)[m]


def meixner_weights(q: int, alpha: Fraction, r: int) -> list[Fraction]:
    """μ(0), ..., μ(r-1)."""
    a = Fraction(alpha)
    power = Fraction(1)
    out = []
    for c in binomials(q, r):
        out.append(power * c)
        power *= a
    return out


def power_sums(
    q: int, alpha: Fraction, r: int, max_power: int, u: Fraction | None = None
) -> list[Fraction]:
    """Σ_{m<r} μ(m) m^p u^{-m} for p = 0..max_power (u = None means u = 1)."""
    mu = meixner_weights(q, alpha, r)
    if u is not None:
        inv = 1 / Fraction(u)
        mu = [weight * inv**m for m, weight in enumerate(mu)]
    sums = []
    for p in range(max_power + 1):
        # 0 ** 0 == 1 keeps the m = 0 site in the p = 0 moment
        sums.append(sum((weight * m**p for m, weight in enumerate(mu)), Fraction(0)))
    return sums
