"""Sampled arctic-curve branches annotated with boundary contacts and cusps."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
from numpy.typing import NDArray
from scipy import optimize

from arcticl.curve.regime import Regime, RegimeParams, regime_params
from arcticl.curve.tangent import (
    FloatArray,
    TangentFamily,
    cutoff_w0,
    ellipse_point,
    special_w,
)

logger = logging.getLogger(__name__)

CONTACT_TOL = 1e-4
EXCLUSION = 1e-6
LIMIT_OFFSET = 1e-5
LIMIT_FAR = 1e6


class PointKind(StrEnum):
    CONTACT = "contact"
    TANGENCY = "tangency"
    CUSP = "cusp"


@dataclass(frozen=True)
class SpecialPoint:
    w: float
    x: float
    y: float
    kind: PointKind
    branch: str
    side: str | None = None

    def distance(self, other: SpecialPoint) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass
class CurveBranch:
    label: str
    w: FloatArray
    x: FloatArray
    y: FloatArray
    special: list[SpecialPoint] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.w)

    @property
    def points(self) -> FloatArray:
        return np.column_stack([self.x, self.y])

    @property
    def contacts(self) -> list[SpecialPoint]:
        return [p for p in self.special if p.kind is PointKind.CONTACT]

    @property
    def cusps(self) -> list[SpecialPoint]:
        return [p for p in self.special if p.kind is PointKind.CUSP]


def _unique(points: Iterator[SpecialPoint]) -> list[SpecialPoint]:
    kept: list[SpecialPoint] = []
    for p in points:
        if all(p.distance(q) > CONTACT_TOL for q in kept):
            kept.append(p)
    return kept


@dataclass
class CurveSet:
    params: RegimeParams
    branches: tuple[CurveBranch, ...]
    w0: float

    def __iter__(self) -> Iterator[CurveBranch]:
        return iter(self.branches)

    def branch(self, label: str) -> CurveBranch:
        for b in self.branches:
            if b.label == label:
                return b
        raise KeyError(label)

    @property
    def contacts(self) -> list[SpecialPoint]:
        """Distinct boundary contacts over all branches."""
        return _unique(p for b in self.branches for p in b.contacts)

    @property
    def cusps(self) -> list[SpecialPoint]:
        return _unique(p for b in self.branches for p in b.cusps)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.branches)


# ── Domain ──────────────────────────────────────────────────────


def in_domain(
    x: FloatArray, y: FloatArray, corner: tuple[float, float], tol: float = 1e-9
) -> NDArray[np.bool_]:
    """Closed unit square minus the open cut rectangle (ξx, 1] × [0, ξy)."""
    xi_x, xi_y = corner
    inside = (x >= -tol) & (x <= 1 + tol) & (y >= -tol) & (y <= 1 + tol)
    in_cut = (x > xi_x + tol) & (y < xi_y - tol)
    return inside & ~in_cut


def boundary_side(
    x: float, y: float, corner: tuple[float, float], tol: float = CONTACT_TOL
) -> str | None:
    """Name of the domain side through (x, y), if any."""
    xi_x, xi_y = corner
    sides = (
        ("bottom", abs(y) < tol and -tol <= x <= xi_x + tol),
        ("left", abs(x) < tol and -tol <= y <= 1 + tol),
        ("top", abs(y - 1) < tol and -tol <= x <= 1 + tol),
        ("right", abs(x - 1) < tol and xi_y - tol <= y <= 1 + tol),
        ("cut-side", abs(x - xi_x) < tol and -tol <= y <= xi_y + tol),
        ("cut-top", abs(y - xi_y) < tol and xi_x - tol <= x <= 1 + tol),
    )
    return next((name for name, hit in sides if hit), None)


def compact_grid(n: int) -> FloatArray:
    """n parameters w = tan(θπ/2), θ uniform in (−1, 1)."""
    theta = np.linspace(-1.0, 1.0, n + 2)[1:-1]
    return np.tan(theta * np.pi / 2)


# ── Special points ──────────────────────────────────────────────


def _caustic(family: TangentFamily, w: FloatArray) -> tuple[FloatArray, FloatArray]:
    if family.params.regime is Regime.I:
        return ellipse_point(w, family.alpha)
    return family.caustic(w)


def _limits(family: TangentFamily, corner: tuple[float, float]) -> list[SpecialPoint]:
    found: list[SpecialPoint] = []
    targets = [*special_w(family.alpha), math.inf]
    for w_star in targets:
        if math.isinf(w_star):
            ends = np.array([-LIMIT_FAR, LIMIT_FAR])
        else:
            offset = LIMIT_OFFSET * max(1.0, abs(w_star))
            ends = np.array([w_star - offset, w_star + offset])
        xs, ys = _caustic(family, ends)
        for x, y in zip(xs, ys, strict=True):
            if not (np.isfinite(x) and np.isfinite(y)):
                continue
            side = boundary_side(float(x), float(y), corner)
            kind = PointKind.CONTACT if side else PointKind.TANGENCY
            point = SpecialPoint(w_star, float(x), float(y), kind, family.label, side)
            if all(point.distance(p) > CONTACT_TOL for p in found):
                found.append(point)
    return found


def _dy_dw(w: float, family: TangentFamily) -> float:
    h = 1e-4 * max(1.0, abs(w))
    _, y = _caustic(family, np.array([w - h, w + h]))
    return float((y[1] - y[0]) / (2 * h))


def find_cusps(
    family: TangentFamily, w: FloatArray, x: FloatArray, y: FloatArray
) -> list[SpecialPoint]:
    """Cusps: zeros of dy/dw where the sampled path reverses direction."""
    specials = np.array(special_w(family.alpha))
    d = np.diff(np.column_stack([x, y]), axis=0)
    lengths = np.hypot(d[:, 0], d[:, 1])
    cusps: list[SpecialPoint] = []
    for i in range(1, len(d)):
        if min(lengths[i - 1], lengths[i]) < 1e-10:
            continue
        if np.dot(d[i - 1], d[i]) > -0.5 * lengths[i - 1] * lengths[i]:
            continue
        lo, hi = float(w[i - 1]), float(w[i + 1])
        if np.any((specials >= lo) & (specials <= hi)):
            continue
        try:
            wc = float(optimize.brentq(_dy_dw, lo, hi, args=(family,), xtol=1e-12))
        except ValueError:
            wc = float(w[i])
        xc, yc = _caustic(family, np.array([wc]))
        cusps.append(SpecialPoint(wc, float(xc[0]), float(yc[0]), PointKind.CUSP, family.label))
    return cusps


# ── Assembly ────────────────────────────────────────────────────


def _excluded(w: FloatArray, alpha: float) -> NDArray[np.bool_]:
    mask = np.zeros_like(w, dtype=bool)
    for w_star in special_w(alpha):
        mask |= np.abs(w - w_star) < EXCLUSION * max(1.0, abs(w_star))
    return mask


def sample_branch(family: TangentFamily, n_samples: int) -> CurveBranch:
    corner = family.params.geometry.cut_corner
    w = compact_grid(n_samples)
    w = w[~_excluded(w, family.alpha)]
    x, y = _caustic(family, w)
    finite = np.isfinite(x) & np.isfinite(y)
    w, x, y = w[finite], x[finite], y[finite]
    special = _limits(family, corner) + find_cusps(family, w, x, y)
    keep = in_domain(x, y, corner)
    if dropped := int(np.count_nonzero(~keep)) + int(np.count_nonzero(~finite)):
        logger.debug(f"{family.label}: dropped {dropped} samples outside the domain")
    return CurveBranch(family.label, w[keep], x[keep], y[keep], special)


def curve_branches(R: float, Q: float, alpha: float, n_samples: int = 2000) -> CurveSet:
    """Both branches of the arctic curve; Regime I collapses to the ellipse."""
    params = regime_params(R, Q, alpha)
    w0 = cutoff_w0(params)
    if params.regime is Regime.I:
        branches: tuple[CurveBranch, ...] = (sample_branch(TangentFamily(params), n_samples),)
    else:
        branches = tuple(sample_branch(TangentFamily(params, s), n_samples) for s in (-1, 1))
    curves = CurveSet(params, branches, w0)
    logger.info(
        f"{params.describe()}: {curves.size} samples, {len(curves.contacts)} contacts, "
        f"{len(curves.cusps)} cusps, w0={w0:.6g}"
    )
    return curves
