"""Exact six-vertex oracle: row-transfer enumeration and direct sums.

Rows are walked top to bottom and columns left to right. The state carried
between rows is a bitmask over columns (bit c set when the vertical edge in
column c+1 counted from the left points up). Domain wall boundary conditions
fix the top edges down, the bottom edges up, the left edges left and the
right edges right. Removed corner vertices are kept in the grid as frozen
type-2 vertices (the "frame") but never contribute a weight.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from arcticl.config import ArcticError
from arcticl.model.geometry import GeometryError, LGeometry
from arcticl.model.vertex import Arrow, FreeFermionWeights, VertexType

logger = logging.getLogger(__name__)

MAX_ENUMERATION_N = 7

Number = Fraction | float
Monomials = Counter[tuple[int, int]]


class TransferError(ArcticError):
    """Raised when an enumeration request exceeds the size guard."""


_CANDIDATES: dict[tuple[Arrow, Arrow], tuple[VertexType, ...]] = {}
for _vt in VertexType:
    _left, _right, _bottom, _top = _vt.arrows
    _CANDIDATES.setdefault((_left, _top), ())
    _CANDIDATES[(_left, _top)] += (_vt,)


@lru_cache(maxsize=None)
def _row_configs(
    N: int, top: int, n_forced: int, left_at: int = -1
) -> tuple[tuple[int, tuple[VertexType, ...]], ...]:
    """All fillings of one row compatible with the vertical edges above it.

    ``n_forced`` leftmost columns are frozen to type 2. When ``left_at`` is
    a column index, the horizontal edge on that column's left must point left.
    Returns (bottom mask, types) pairs in canonical (lexicographic) order.
    """
    found: list[tuple[int, tuple[VertexType, ...]]] = []

    def walk(c: int, left: Arrow, bottom: int, types: tuple[VertexType, ...]) -> None:
        if c == left_at and left is not Arrow.LEFT:
            return
        if c == N:
            if left is Arrow.RIGHT:
                found.append((bottom, types))
            return
        top_arrow = Arrow.UP if top >> c & 1 else Arrow.DOWN
        if c < n_forced:
            options: tuple[VertexType, ...] = (
                (VertexType.TWO,) if (left, top_arrow) == (Arrow.LEFT, Arrow.DOWN) else ()
            )
        else:
            options = _CANDIDATES.get((left, top_arrow), ())
        for vt in options:
            _, right, down, _ = vt.arrows
            walk(c + 1, right, bottom | (int(down is Arrow.UP) << c), types + (vt,))

    walk(0, Arrow.LEFT, 0, ())
    return tuple(found)


def _forced(geom: LGeometry, k: int) -> int:
    return geom.N - geom.r if k <= geom.s else 0


def _guard(N: int, max_n: int) -> None:
    if N > max_n:
        raise TransferError(f"enumeration is limited to N <= {max_n}, got N={N}")


def _half_power(base: Number, twice: int) -> Number:
    """base ** (twice / 2), exact whenever that is a rational number."""
    if twice % 2 == 0:
        return base ** (twice // 2)
    if isinstance(base, Fraction):
        num, den = base.numerator, base.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            return Fraction(rn, rd) ** twice
    return float(base) ** (twice / 2)


def _class_counts(types: Sequence[VertexType], skip: int = 0) -> tuple[int, int]:
    """Number of a-type (1, 2) and b-type (3, 4) vertices past the first ``skip``."""
    na = nb = 0
    for vt in types[skip:]:
        if vt <= VertexType.TWO:
            na += 1
        elif vt <= VertexType.FOUR:
            nb += 1
    return na, nb


def _evaluate(monomials: Monomials, w: FreeFermionWeights, frame: int = 0) -> Number:
    """Sum of weight monomials; ``frame`` adds that many frozen a-type vertices."""
    zero: Number = Fraction(0) if w.exact else 0.0
    total = zero
    for (na, nb), mult in sorted(monomials.items()):
        total += mult * _half_power(1 - w.alpha, na + frame) * _half_power(w.alpha, nb)
    return total


def _warn_inexact(value: Number, w: FreeFermionWeights, what: str) -> None:
    if w.exact and isinstance(value, float):
        logger.warning(
            f"{what}: alpha={w.alpha} needs an odd power of a non-square rational; "
            f"falling back to double precision"
        )


# ── States ──────────────────────────────────────────────────────


@dataclass(frozen=True)
class SixVertexState:
    """One DWBC configuration on the L-shaped domain.

    ``grid[k-1][c-1]`` holds the vertex in row k from the top and column c
    from the left; cut vertices hold the frozen type 2.
    """

    geom: LGeometry
    grid: tuple[tuple[VertexType, ...], ...]

    def at(self, j: int, k: int) -> VertexType:
        """Vertex in column j from the right, row k from the top."""
        return self.grid[k - 1][self.geom.N - j]

    def monomial(self) -> tuple[int, int]:
        na = nb = 0
        for k, row in enumerate(self.grid, start=1):
            a, b = _class_counts(row, _forced(self.geom, k))
            na += a
            nb += b
        return na, nb

    def weight(self, w: FreeFermionWeights) -> Number:
        na, nb = self.monomial()
        return _half_power(1 - w.alpha, na) * _half_power(w.alpha, nb)

    def frame_weight(self, w: FreeFermionWeights) -> Number:
        """Weight with the frozen corner counted too; always rational for rational α."""
        na, nb = self.monomial()
        return _half_power(1 - w.alpha, na + self.geom.cut_area) * _half_power(w.alpha, nb)

    def first_row_up(self) -> int:
        """Position l (from the right) of the sole up arrow below the first row."""
        row = self.grid[0]
        for c, vt in enumerate(row):
            if vt.arrows[2] is Arrow.UP:
                return self.geom.N - c
        raise TransferError("first row carries no up arrow")

    def horizontal_left(self, k: int, j: int) -> bool:
        """Whether the edge on the left of vertex (j, k) points left."""
        return self.at(j, k).arrows[0] is Arrow.LEFT

    def is_valid(self) -> bool:
        """Check the ice rule, edge consistency and the boundary conditions."""
        N = self.geom.N
        if len(self.grid) != N or any(len(row) != N for row in self.grid):
            return False
        for k, row in enumerate(self.grid, start=1):
            if row[0].arrows[0] is not Arrow.LEFT or row[-1].arrows[1] is not Arrow.RIGHT:
                return False
            for c in range(N - 1):
                if row[c].arrows[1] is not row[c + 1].arrows[0]:
                    return False
            for c, vt in enumerate(row):
                if self.geom.in_cut(k, N - c) and vt is not VertexType.TWO:
                    return False
        for c in range(N):
            if self.grid[0][c].arrows[3] is not Arrow.DOWN:
                return False
            if self.grid[-1][c].arrows[2] is not Arrow.UP:
                return False
            for k in range(N - 1):
                if self.grid[k][c].arrows[2] is not self.grid[k + 1][c].arrows[3]:
                    return False
        return True


def iter_states(
    geom: LGeometry,
    *,
    max_n: int = MAX_ENUMERATION_N,
    left_edges: Sequence[int] | None = None,
) -> Iterator[SixVertexState]:
    """Yield every admissible state in canonical order.

    ``left_edges`` optionally gives, per row from the top, a 0-based column
    whose left horizontal edge must point left.
    """
    _guard(geom.N, max_n)
    N = geom.N
    full = (1 << N) - 1
    rows: list[tuple[VertexType, ...]] = []

    def descend(k: int, mask: int) -> Iterator[SixVertexState]:
        if k > N:
            if mask == full:
                yield SixVertexState(geom, tuple(rows))
            return
        left_at = -1
        if left_edges is not None and k <= len(left_edges):
            left_at = left_edges[k - 1]
        for bottom, types in _row_configs(N, mask, _forced(geom, k), left_at):
            rows.append(types)
            yield from descend(k + 1, bottom)
            rows.pop()

    yield from descend(1, 0)


def enumerate_states(geom: LGeometry, max_n: int = MAX_ENUMERATION_N) -> list[SixVertexState]:
    """Every admissible DWBC state on the L-shape, each exactly once."""
    states = list(iter_states(geom, max_n=max_n))
    logger.debug(f"enumerated {len(states)} states for {geom.label()}")
    return states


# ── Transfer sums ───────────────────────────────────────────────


def _transfer(
    geom: LGeometry,
    *,
    tag_first_row: bool = False,
    left_edges: Sequence[int] | None = None,
    max_n: int = MAX_ENUMERATION_N,
) -> dict[int, Monomials]:
    """Row dynamic programme returning, per tag, the weight monomials.

    The tag is the column l (from the right) of the up arrow below row 1 when
    ``tag_first_row`` is set, else 0.
    """
    _guard(geom.N, max_n)
    N = geom.N
    dp: dict[tuple[int, int], Monomials] = {(0, 0): Counter({(0, 0): 1})}
    for k in range(1, N + 1):
        n_forced = _forced(geom, k)
        left_at = -1
        if left_edges is not None and k <= len(left_edges):
            left_at = left_edges[k - 1]
        nxt: dict[tuple[int, int], Monomials] = {}
        for (mask, tag), monos in dp.items():
            for bottom, types in _row_configs(N, mask, n_forced, left_at):
                na, nb = _class_counts(types, n_forced)
                new_tag = tag
                if k == 1 and tag_first_row:
                    new_tag = N - (bottom.bit_length() - 1)
                bucket = nxt.setdefault((bottom, new_tag), Counter())
                for (a, b), mult in monos.items():
                    bucket[(a + na, b + nb)] += mult
        dp = nxt
    full = (1 << N) - 1
    return {tag: monos for (mask, tag), monos in dp.items() if mask == full}


def _all_monomials(geom: LGeometry, max_n: int) -> Monomials:
    total: Monomials = Counter()
    for monos in _transfer(geom, max_n=max_n).values():
        total.update(monos)
    return total


def partition_function(
    geom: LGeometry, w: FreeFermionWeights, max_n: int = MAX_ENUMERATION_N
) -> Number:
    """Z_{N,r,s}: sum over states of the product of vertex weights."""
    if not geom.is_admissible:
        return Fraction(0) if w.exact else 0.0
    value = _evaluate(_all_monomials(geom, max_n), w)
    _warn_inexact(value, w, f"Z({geom.label()})")
    return value


def framed_partition_function(
    geom: LGeometry, w: FreeFermionWeights, max_n: int = MAX_ENUMERATION_N
) -> Number:
    """Z_{N,r,s} times the frozen-frame weight (1−α)^{s(N−r)/2}.

    This is the emptiness formation probability of the N×N square and stays
    exact for every rational α.
    """
    if not geom.is_admissible:
        return Fraction(0) if w.exact else 0.0
    value = _evaluate(_all_monomials(geom, max_n), w, geom.cut_area)
    _warn_inexact(value, w, f"framed Z({geom.label()})")
    return value


def boundary_distribution(
    geom: LGeometry, w: FreeFermionWeights, max_n: int = MAX_ENUMERATION_N
) -> list[Number]:
    """H^(l), l = 1..r (l = 1..N when s = 0): position of the up arrow below row 1."""
    if not geom.is_admissible:
        raise GeometryError(f"no admissible states for {geom.label()}")
    width = geom.r if geom.s >= 1 else geom.N
    per_tag = _transfer(geom, tag_first_row=True, max_n=max_n)
    values = {tag: _evaluate(monos, w, geom.cut_area) for tag, monos in per_tag.items()}
    Z = sum(values.values())
    zero: Number = Fraction(0) if w.exact else 0.0
    dist = [values.get(l, zero) / Z for l in range(1, width + 1)]
    if any(tag > width for tag in values):
        raise TransferError("up arrow found inside the removed corner")
    return dist


def gefp_bruteforce(
    N: int,
    s: int,
    r_list: Sequence[int],
    w: FreeFermionWeights,
    max_n: int = MAX_ENUMERATION_N,
) -> Number:
    """Probability that the left edges of columns r_1..r_s (rows 1..s) point left.

    Computed by summing explicit N×N states; columns are counted from the
    right, so r_k = N imposes nothing.
    """
    if len(r_list) != s:
        raise GeometryError(f"expected {s} entries in r_list, got {len(r_list)}")
    if any(not 1 <= rk <= N for rk in r_list):
        raise GeometryError(f"r_list entries must lie in [1, {N}]")
    if any(a > b for a, b in zip(r_list, r_list[1:])):
        raise GeometryError(f"r_list must be weakly increasing, got {tuple(r_list)}")
    square = LGeometry(N, N, 0)
    zero: Number = Fraction(0) if w.exact else 0.0
    total = hit = zero
    for state in iter_states(square, max_n=max_n):
        weight = state.weight(w)
        total += weight
        if all(state.horizontal_left(k, rk) for k, rk in enumerate(r_list, start=1)):
            hit += weight
    value = hit / total
    _warn_inexact(value, w, f"GEFP(N={N}, r={tuple(r_list)})")
    return value


def efp_transfer(geom: LGeometry, w: FreeFermionWeights, max_n: int = MAX_ENUMERATION_N) -> Number:
    """EFP G_N^(r,...,r) from the row programme with left-edge constraints."""
    square = LGeometry(geom.N, geom.N, 0)
    column = geom.N - geom.r
    total: Monomials = Counter()
    for monos in _transfer(square, left_edges=[column] * geom.s, max_n=max_n).values():
        total.update(monos)
    return _evaluate(total, w)


def vertex_marginals(
    geom: LGeometry, w: FreeFermionWeights, max_n: int = MAX_ENUMERATION_N
) -> dict[tuple[int, int], dict[VertexType, Number]]:
    """Probability of each vertex type at every (j, k) of the L-shape."""
    if not geom.is_admissible:
        raise GeometryError(f"no admissible states for {geom.label()}")
    zero: Number = Fraction(0) if w.exact else 0.0
    sums: dict[tuple[int, int], dict[VertexType, Number]] = {}
    Z = zero
    for state in iter_states(geom, max_n=max_n):
        weight = state.frame_weight(w)
        Z += weight
        for k in range(1, geom.N + 1):
            for j in range(1, geom.N + 1):
                if geom.in_cut(k, j):
                    continue
                cell = sums.setdefault((j, k), {vt: zero for vt in VertexType})
                cell[state.at(j, k)] += weight
    return {key: {vt: v / Z for vt, v in cell.items()} for key, cell in sums.items()}
