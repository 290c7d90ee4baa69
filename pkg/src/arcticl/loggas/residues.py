"""Direct log-gas sum with the extra contour integral resolved by residues."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from arcticl.loggas.generating import LogGasError, Rational, _check, _exact, u_w_map
from arcticl.loggas.meixner import meixner_weights

MAX_S = 3
MAX_R = 6


def _vandermonde_sq(ms: tuple[int, ...]) -> int:
    out = 1
    for i, j in combinations(range(len(ms)), 2):
        out *= (ms[j] - ms[i]) ** 2
    return out


def loggas_I(N: int, r: int, s: int, alpha: Rational, u: Rational) -> Fraction:
    """I_{N,r,s}(u) summed over configurations of s distinct sites in 0..r−1.

    At u ≠ 1 each configuration carries Σ_p σ(u, m_p) / Π_{j≠p}(m_p − m_j)
    with σ(u, m) = (s−1)! u^(r+s−m−2) / (1−u)^(s−1); at u = 1 that factor is 1.
    """
    a = _exact(alpha)
    q = _check(N, r, s, a)
    if s > MAX_S or r > MAX_R:
        raise LogGasError(f"loggas_I is limited to s <= {MAX_S}, r <= {MAX_R}")
    uu = _exact(u)
    if uu == 0:
        raise LogGasError("loggas_I needs u != 0")
    mu = meixner_weights(q, a, r)
    scale = Fraction(math.factorial(s - 1)) / (1 - uu) ** (s - 1) if uu != 1 else Fraction(1)
    total = Fraction(0)
    for ms in combinations(range(r), s):
        weight = Fraction(_vandermonde_sq(ms))
        for m in ms:
            weight *= mu[m]
        if uu == 1:
            total += weight
            continue
        residue = Fraction(0)
        for p, mp in enumerate(ms):
            denom = 1
            for j, mj in enumerate(ms):
                if j != p:
                    denom *= mp - mj
            residue += uu ** (r + s - mp - 2) / denom
        total += weight * scale * residue
    return total


def h_from_loggas(N: int, r: int, s: int, alpha: Rational, w: Rational) -> Fraction:
    """w^(r−1) I(u) / I(1), the log-gas form of the generating function."""
    ww = _exact(w)
    u = _exact(u_w_map(_exact(alpha), ww))
    norm = loggas_I(N, r, s, alpha, 1)
    if norm == 0:
        raise LogGasError(f"no admissible states for N={N}, r={r}, s={s}")
    return ww ** (r - 1) * loggas_I(N, r, s, alpha, u) / norm
