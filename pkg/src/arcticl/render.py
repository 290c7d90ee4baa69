"""CSV, JSON and SVG writers for curves, probability grids and samples."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from matplotlib import rc_context
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from numpy.typing import NDArray

from arcticl import __version__
from arcticl.config import ArcticError, RunConfig
from arcticl.curve.branches import CurveSet, compact_grid
from arcticl.curve.tangent import ellipse_point
from arcticl.shuffling.order import OrderParameterField, plaquette_centres
from arcticl.shuffling.probabilities import PlaquetteProbabilities
from arcticl.shuffling.sampler import TilingSample

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json", "svg")
EDGE_NAMES = ("NW", "NE", "SW", "SE")


class RenderError(ArcticError):
    """Raised when an output cannot be produced or written."""


def _num(value: float) -> float | None:
    """JSON-safe float: non-finite values become null."""
    v = float(value)
    return v if math.isfinite(v) else None


def metadata(config: RunConfig, **provenance: Any) -> dict[str, Any]:
    """Top-level metadata object shared by every JSON output."""
    return {
        "version": __version__,
        "config": config.echo(),
        "provenance": dict(sorted(provenance.items())),
    }


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(text: str, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise RenderError(f"cannot write {path}: {e}") from e
    logger.info(f"wrote {path} ({len(text)} bytes)")
    return path


# ── Curves ──────────────────────────────────────────────────────


def curve_csv(curves: CurveSet) -> str:
    rows = (
        (b.label, repr(float(w)), repr(float(x)), repr(float(y)))
        for b in curves
        for w, x, y in zip(b.w, b.x, b.y)
    )
    return _csv(("branch", "w", "x", "y"), rows)


def curve_json(curves: CurveSet, config: RunConfig) -> str:
    params = curves.params
    doc = {
        "metadata": metadata(config, source="tangent-method caustic"),
        "regime": str(params.regime),
        "parameters": {
            "R": params.R,
            "Q": params.Q,
            "alpha": params.alpha,
            "a": params.a,
            "b": params.b,
            "eta": params.eta,
            "w0": _num(curves.w0),
            "xi": list(params.geometry.cut_corner),
        },
        "branches": [
            {
                "label": b.label,
                "w": [float(v) for v in b.w],
                "x": [float(v) for v in b.x],
                "y": [float(v) for v in b.y],
            }
            for b in curves
        ],
        "special_points": [
            {
                "branch": p.branch,
                "kind": str(p.kind),
                "side": p.side,
                "w": _num(p.w),
                "x": _num(p.x),
                "y": _num(p.y),
            }
            for b in curves
            for p in b.special
        ],
    }
    return _json(doc)


# ── Probability grids ───────────────────────────────────────────

GRID_COLUMNS = ("i", "j", "x", "y", "p", "q", "r", "s", "order_x", "z_re", "z_im", "fluid")


def _grid_rows(
    probs: PlaquetteProbabilities, fld: OrderParameterField
) -> Iterable[tuple[Any, ...]]:
    cx, cy = plaquette_centres(probs.N)
    for i in range(probs.N):
        for j in range(probs.N):
            z = fld.z[i, j]
            yield (
                i,
                j,
                repr(float(cx[i, j])),
                repr(float(cy[i, j])),
                *(repr(float(v)) for v in probs.quadruple(i, j)),
                repr(float(fld.x[i, j])),
                repr(float(z.real)),
                repr(float(z.imag)),
                int(fld.mask[i, j]),
            )


def grid_csv(probs: PlaquetteProbabilities, fld: OrderParameterField) -> str:
    return _csv(GRID_COLUMNS, _grid_rows(probs, fld))


def grid_json(
    probs: PlaquetteProbabilities,
    fld: OrderParameterField,
    config: RunConfig,
    **provenance: Any,
) -> str:
    doc = {
        "metadata": metadata(config, **provenance),
        "N": probs.N,
        "eps": fld.eps,
        "fluid_fraction": fld.fluid_fraction,
        "p": probs.p.tolist(),
        "q": probs.q.tolist(),
        "r": probs.r.tolist(),
        "s": probs.s.tolist(),
        "order_x": fld.x.tolist(),
        "z_re": fld.z.real.tolist(),
        "z_im": fld.z.imag.tolist(),
        "fluid": fld.mask.astype(int).tolist(),
    }
    return _json(doc)


# ── Samples ─────────────────────────────────────────────────────


def _occupied_cells(sample: TilingSample) -> Iterable[tuple[int, int, str]]:
    a, b = np.nonzero(sample.occupied)
    for row, col in zip(a.tolist(), b.tolist()):
        yield row // 2, col // 2, EDGE_NAMES[2 * (row % 2) + (col % 2)]


def samples_csv(samples: Iterable[TilingSample]) -> str:
    rows = (
        (sample.index, sample.seed, i, j, edge)
        for sample in samples
        for i, j, edge in _occupied_cells(sample)
    )
    return _csv(("sample", "seed", "i", "j", "edge"), rows)


def samples_json(samples: Iterable[TilingSample], config: RunConfig) -> str:
    entries = [
        {**sample.metadata(), "edges": [list(cell) for cell in _occupied_cells(sample)]}
        for sample in samples
    ]
    return _json({"metadata": metadata(config, source="domino shuffling"), "samples": entries})


# ── Figures ─────────────────────────────────────────────────────


@dataclass
class FigureSpec:
    """Layers of one figure in scaled (x, y) coordinates.

    x grows leftward from the right edge and y downward from the top edge;
    every layer goes through :meth:`to_screen`.
    """

    title: str
    alpha: float
    cut_corner: tuple[float, float] | None = None
    heat: NDArray[np.float64] | None = None
    mask: NDArray[np.bool_] | None = None
    branches: list[tuple[str, NDArray[np.float64], NDArray[np.float64]]] = field(
        default_factory=list
    )
    reference_ellipse: bool = True

    @staticmethod
    def to_screen(x: Any, y: Any) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return 1 - np.asarray(x, dtype=float), 1 - np.asarray(y, dtype=float)

    @property
    def layers(self) -> list[str]:
        present = [
            ("heat", self.heat is not None),
            ("mask", self.mask is not None),
            ("branches", bool(self.branches)),
            ("ellipse", self.reference_ellipse),
            ("cut", self.cut_corner is not None),
        ]
        return [name for name, on in present if on]

    def add_curves(self, curves: CurveSet) -> None:
        self.branches.extend((b.label, b.x, b.y) for b in curves)


_BRANCH_STYLE = {"C-": "tab:blue", "C+": "tab:red", "ellipse": "tab:purple"}


def _draw(spec: FigureSpec) -> Figure:
    fig = Figure(figsize=(6, 6))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot()
    if spec.heat is not None:
        ax.imshow(
            spec.heat,
            extent=(0, 1, 0, 1),
            origin="upper",
            cmap="viridis",
            vmin=0,
            vmax=1,
            interpolation="nearest",
        )
    if spec.mask is not None:
        N = spec.mask.shape[0]
        cx, cy = plaquette_centres(N)
        sx, sy = spec.to_screen(cx, cy)
        if spec.mask.any() and not spec.mask.all():
            ax.contour(
                sx, sy, spec.mask.astype(float), levels=[0.5], colors="white", linewidths=0.8
            )
    if spec.reference_ellipse:
        ex, ey = ellipse_point(compact_grid(2000), spec.alpha)
        ax.plot(*spec.to_screen(ex, ey), "--", color="0.5", linewidth=0.8, label="ellipse")
    for label, x, y in spec.branches:
        color = _BRANCH_STYLE.get(label)
        ax.plot(*spec.to_screen(x, y), ".", markersize=1.5, color=color, label=label)
    if spec.cut_corner is not None:
        xi_x, xi_y = spec.cut_corner
        corner_x, corner_y = spec.to_screen(
            [1.0, xi_x, xi_x, 1.0, 1.0], [0.0, 0.0, xi_y, xi_y, 0.0]
        )
        ax.fill(corner_x, corner_y, color="0.85", zorder=3)
        ax.plot(corner_x, corner_y, color="black", linewidth=1.0, zorder=4)
        ax.set_xticks([0.0, 1 - xi_x, 1.0], ["1", f"ξx={xi_x:.3g}", "0"])
        ax.set_yticks([0.0, 1 - xi_y, 1.0], ["1", f"ξy={xi_y:.3g}", "0"])
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_aspect("equal")
    ax.set_xlabel("x (from the right edge)")
    ax.set_ylabel("y (from the top edge)")
    ax.set_title(spec.title)
    if spec.branches or spec.reference_ellipse:
        ax.legend(loc="lower left", fontsize="small", markerscale=4)
    return fig


def render_svg(spec: FigureSpec) -> str:
    """Self-contained SVG; identical specs give identical bytes."""
    buf = io.StringIO()
    with rc_context({"svg.hashsalt": "arcticl", "svg.fonttype": "path"}):
        fig = _draw(spec)
        try:
            fig.savefig(buf, format="svg", metadata={"Date": None})
        except (ValueError, RuntimeError) as e:
            raise RenderError(f"cannot render {spec.title!r}: {e}") from e
    logger.debug(f"rendered {spec.title!r} with layers {spec.layers}")
    return buf.getvalue()
