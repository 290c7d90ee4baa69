"""Tests for sampled branches, boundary contacts and cusp detection."""

import math

import numpy as np
import pytest

from arcticl.curve.branches import (
    CurveSet,
    PointKind,
    boundary_side,
    compact_grid,
    curve_branches,
    in_domain,
)
from arcticl.curve.regime import Regime
from arcticl.curve.tangent import TangentFamily, arctic_ellipse

CORNER = (0.6, 0.4)


def _near(points: list, x: float, y: float, tol: float = 1e-4) -> bool:
    return any(math.hypot(p.x - x, p.y - y) < tol for p in points)


@pytest.fixture(scope="module")
def square_cut_curves() -> CurveSet:
    return curve_branches(1.5, 0.0, 0.3)


class TestDomain:
    def test_in_domain(self) -> None:
        x = np.array([0.3, 0.6, 0.8, 1.1, 0.9])
        y = np.array([0.3, 0.2, 0.2, 0.5, 0.4])
        assert in_domain(x, y, CORNER).tolist() == [True, True, False, False, True]

    @pytest.mark.parametrize(
        ("x", "y", "side"),
        [
            (0.3, 0.0, "bottom"),
            (0.0, 0.7, "left"),
            (0.5, 1.0, "top"),
            (1.0, 0.8, "right"),
            (0.6, 0.2, "cut-side"),
            (0.8, 0.4, "cut-top"),
            (0.5, 0.5, None),
            (0.8, 0.0, None),
        ],
    )
    def test_boundary_side(self, x: float, y: float, side: str | None) -> None:
        assert boundary_side(x, y, CORNER) == side

    def test_compact_grid(self) -> None:
        np.testing.assert_allclose(compact_grid(3), [-1.0, 0.0, 1.0], atol=1e-15)
        grid = compact_grid(200)
        assert len(grid) == 200
        assert np.all(np.diff(grid) > 0)
        np.testing.assert_allclose(grid, -grid[::-1])


class TestRegimeOne:
    def test_single_ellipse(self) -> None:
        curves = curve_branches(4.0, 0.0, 0.3, n_samples=500)
        assert curves.params.regime is Regime.I
        (branch,) = curves.branches
        assert branch.label == "ellipse"
        assert len(branch) > 400
        assert np.all(np.abs(arctic_ellipse(branch.x, branch.y, 0.3)) < 1e-12)

    def test_four_contacts_no_cusps(self) -> None:
        curves = curve_branches(4.0, 0.0, 0.3, n_samples=500)
        assert len(curves.contacts) == 4
        for x, y in ((0.3, 0.0), (0.0, 0.3), (0.7, 1.0), (1.0, 0.7)):
            assert _near(curves.contacts, x, y)
        assert curves.cusps == []
        assert curves.w0 > 1


class TestSquareCut:
    def test_two_branches(self, square_cut_curves: CurveSet) -> None:
        assert [b.label for b in square_cut_curves] == ["C-", "C+"]
        assert math.isinf(square_cut_curves.w0)
        with pytest.raises(KeyError):
            square_cut_curves.branch("ellipse")

    def test_samples_stay_in_domain(self, square_cut_curves: CurveSet) -> None:
        for branch in square_cut_curves:
            assert len(branch) > 1000
            assert np.all(in_domain(branch.x, branch.y, CORNER))

    def test_six_contacts(self, square_cut_curves: CurveSet) -> None:
        contacts = square_cut_curves.contacts
        assert len(contacts) == 6
        expected = {
            "bottom": (0.22443, 0.0),
            "left": (0.0, 0.24961),
            "cut-side": (0.6, 0.32443),
            "top": (0.75038, 1.0),
            "cut-top": (0.67557, 0.4),
            "right": (1.0, 0.77557),
        }
        assert {p.side for p in contacts} == set(expected)
        for p in contacts:
            x, y = expected[p.side]
            assert (p.x, p.y) == (pytest.approx(x, abs=1e-4), pytest.approx(y, abs=1e-4))

    def test_tangencies_with_the_cut_lines(self, square_cut_curves: CurveSet) -> None:
        lower = square_cut_curves.branch("C-")
        tangencies = [p for p in lower.special if p.kind is PointKind.TANGENCY]
        assert _near(tangencies, 0.54962, 0.4)
        assert _near(tangencies, 0.6, 0.45038)

    def test_two_cusps_on_the_physical_branch(self, square_cut_curves: CurveSet) -> None:
        cusps = square_cut_curves.cusps
        assert len(cusps) == 2
        assert all(p.branch == "C-" for p in cusps)
        assert _near(cusps, 0.546662, 0.399781, tol=1e-5)
        assert _near(cusps, 0.600219, 0.453338, tol=1e-5)
        assert sorted(p.w for p in cusps) == [
            pytest.approx(-1.8714, abs=1e-3),
            pytest.approx(-0.16085, abs=1e-4),
        ]


class TestGeneric:
    def test_samples_lie_on_their_tangents(self) -> None:
        curves = curve_branches(1.5, 0.4, 0.3, n_samples=400)
        assert len(curves.branches) == 2
        for branch in curves:
            family = TangentFamily(curves.params, -1 if branch.label == "C-" else 1)
            assert len(branch) > 0
            for i in range(0, len(branch), 37):
                w, x, y = branch.w[i], branch.x[i], branch.y[i]
                assert family.line(x, y, w) == pytest.approx(0.0, abs=1e-10)


class TestCollapsedSupport:
    # R = 1: the lower family is the square's ellipse shrunk into [0, ξx] × [0, ξy]
    @pytest.mark.parametrize("Q", [0.0, 0.4])
    def test_lower_branch_is_a_scaled_ellipse(self, Q: float) -> None:
        curves = curve_branches(1.0, Q, 0.3, n_samples=400)
        assert curves.params.a == curves.params.b
        lower = curves.branch("C-")
        positive_u = 0.3 + 0.7 / lower.w > 0
        assert np.count_nonzero(positive_u) > 20
        k = 2 + Q
        residual = arctic_ellipse(k * lower.x[positive_u], k * lower.y[positive_u], 0.3)
        np.testing.assert_allclose(residual, 0.0, atol=1e-6)

    def test_both_branches_sampled(self) -> None:
        curves = curve_branches(1.0, 0.4, 0.3, n_samples=400)
        assert [b.label for b in curves] == ["C-", "C+"]
        assert all(np.all(np.isfinite(b.x)) and np.all(np.isfinite(b.y)) for b in curves)
        assert curves.size > 0
