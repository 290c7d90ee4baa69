"""Tests for the CSV, JSON and SVG writers."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from arcticl import __version__
from arcticl.config import RunConfig
from arcticl.curve.branches import CurveSet, curve_branches
from arcticl.render import (
    GRID_COLUMNS,
    FigureSpec,
    RenderError,
    curve_csv,
    curve_json,
    grid_csv,
    grid_json,
    metadata,
    render_svg,
    samples_csv,
    samples_json,
    write_text,
)
from arcticl.shuffling.order import order_parameters
from arcticl.shuffling.probabilities import edge_probabilities
from arcticl.shuffling.sampler import sample_tilings
from arcticl.shuffling.weights import build_weights
from arcticl.verify import verify_curve_document


@pytest.fixture(scope="module")
def two_branch() -> CurveSet:
    return curve_branches(1.5, 0.0, 0.3, n_samples=300)


@pytest.fixture
def curve_run() -> RunConfig:
    return RunConfig("curve", 0.3, R=1.5, Q=0.0, fmt="json", n_curve=300)


class TestMetadata:
    def test_fields(self) -> None:
        run = RunConfig("probs", Fraction(1, 2), N=4, r=3, s=1)
        meta = metadata(run, source="test", b=1)
        assert meta["version"] == __version__
        assert meta["config"] == run.echo()
        assert list(meta["provenance"]) == ["b", "source"]


class TestCurveOutput:
    def test_csv_header_and_rows(self, two_branch: CurveSet) -> None:
        rows = list(csv.reader(io.StringIO(curve_csv(two_branch))))
        assert rows[0] == ["branch", "w", "x", "y"]
        assert len(rows) == 1 + two_branch.size
        assert {row[0] for row in rows[1:]} == {"C-", "C+"}

    def test_json_document(self, two_branch: CurveSet, curve_run: RunConfig) -> None:
        doc = json.loads(curve_json(two_branch, curve_run))
        assert doc["metadata"]["config"]["R"] == 1.5
        assert doc["regime"] == str(two_branch.params.regime)
        assert [b["label"] for b in doc["branches"]] == ["C-", "C+"]
        assert doc["parameters"]["xi"] == pytest.approx([0.6, 0.4])
        assert doc["special_points"]

    def test_json_round_trips_through_the_verifier(
        self, two_branch: CurveSet, curve_run: RunConfig
    ) -> None:
        doc = json.loads(curve_json(two_branch, curve_run))
        result = verify_curve_document(doc)
        assert result.passed
        assert result.measured == 0.0

    def test_tampered_document_fails(self, two_branch: CurveSet, curve_run: RunConfig) -> None:
        doc = json.loads(curve_json(two_branch, curve_run))
        doc["branches"][0]["x"][5] += 1e-6
        assert not verify_curve_document(doc).passed

    def test_deterministic(self, curve_run: RunConfig) -> None:
        a = curve_json(curve_branches(1.5, 0.0, 0.3, n_samples=300), curve_run)
        b = curve_json(curve_branches(1.5, 0.0, 0.3, n_samples=300), curve_run)
        assert a == b


class TestGridOutput:
    def test_csv(self) -> None:
        probs = edge_probabilities(build_weights(4, 3, 1, 0.5))
        fld = order_parameters(probs)
        rows = list(csv.reader(io.StringIO(grid_csv(probs, fld))))
        assert tuple(rows[0]) == GRID_COLUMNS
        assert len(rows) == 1 + 16
        first = dict(zip(rows[0], rows[1]))
        assert (first["i"], first["j"]) == ("0", "0")
        assert float(first["x"]) == 0.875
        # (0, 0) lies in the cut
        assert float(first["p"]) == pytest.approx(1.0)
        assert first["fluid"] == "0"

    def test_json(self) -> None:
        run = RunConfig("probs", Fraction(1, 2), N=4, r=3, s=1, fmt="json")
        probs = edge_probabilities(build_weights(4, 3, 1, Fraction(1, 2)))
        doc = json.loads(grid_json(probs, order_parameters(probs), run, source="test"))
        assert doc["N"] == 4
        assert np.array(doc["p"]).shape == (4, 4)
        assert doc["metadata"]["provenance"] == {"source": "test"}
        total = sum(np.array(doc[k]).sum() for k in ("p", "q", "r", "s"))
        assert total == pytest.approx(20)


class TestSampleOutput:
    def test_csv_lists_every_edge(self) -> None:
        wg = build_weights(5, 4, 1, 0.4)
        tilings = list(sample_tilings(wg, 3, 2))
        rows = list(csv.reader(io.StringIO(samples_csv(tilings))))
        assert rows[0] == ["sample", "seed", "i", "j", "edge"]
        assert len(rows) == 1 + 2 * 30
        assert {row[4] for row in rows[1:]} <= {"NW", "NE", "SW", "SE"}

    def test_json_carries_seed_metadata(self) -> None:
        run = RunConfig("sample", 0.4, N=5, r=4, s=1, seed=3, samples=2, fmt="json")
        tilings = list(sample_tilings(build_weights(5, 4, 1, 0.4), 3, 2))
        doc = json.loads(samples_json(tilings, run))
        assert [s["index"] for s in doc["samples"]] == [0, 1]
        assert all(s["seed"] == 3 and s["generator"] == "PCG64" for s in doc["samples"])
        assert len(doc["samples"][0]["edges"]) == 30


class TestFigure:
    def test_screen_transform(self) -> None:
        sx, sy = FigureSpec.to_screen([0.0, 1.0, 0.25], [0.0, 1.0, 0.75])
        np.testing.assert_allclose(sx, [1.0, 0.0, 0.75])
        np.testing.assert_allclose(sy, [1.0, 0.0, 0.25])

    def test_layers(self, two_branch: CurveSet) -> None:
        spec = FigureSpec("t", 0.3, cut_corner=(0.6, 0.4))
        assert spec.layers == ["ellipse", "cut"]
        spec.add_curves(two_branch)
        spec.heat = np.zeros((4, 4))
        spec.mask = np.zeros((4, 4), dtype=bool)
        assert spec.layers == ["heat", "mask", "branches", "ellipse", "cut"]

    def test_svg_is_deterministic(self, two_branch: CurveSet) -> None:
        probs = edge_probabilities(build_weights(12, 7, 5, 0.3))
        fld = order_parameters(probs)

        def draw() -> str:
            spec = FigureSpec(
                "overlay", 0.3, cut_corner=(7 / 12, 5 / 12), heat=fld.x, mask=fld.mask
            )
            spec.add_curves(two_branch)
            return render_svg(spec)

        first = draw()
        assert first.lstrip().startswith("<?xml")
        assert "<svg" in first
        assert first == draw()


class TestWriteText:
    def test_creates_parents(self, tmp_path: Path) -> None:
        path = write_text("a,b\n", tmp_path / "deep" / "out.csv")
        assert path.read_text() == "a,b\n"

    def test_unwritable(self, tmp_path: Path) -> None:
        blocker = tmp_path / "file"
        blocker.write_text("")
        with pytest.raises(RenderError):
            write_text("x", blocker / "out.csv")
