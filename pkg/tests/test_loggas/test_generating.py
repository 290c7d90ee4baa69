"""Tests for the determinant formulas and their agreement with the lattice oracle."""

from fractions import Fraction

import pytest

from arcticl.loggas.generating import (
    F_at_one,
    F_at_w,
    GeneratingEval,
    LogGasError,
    MomentMatrix,
    h_coefficients,
    h_generating,
    u_w_map,
    w_of_u,
)
from arcticl.loggas.linalg import polyval
from arcticl.model.geometry import LGeometry
from arcticl.model.transfer import boundary_distribution, gefp_bruteforce
from arcticl.model.vertex import FreeFermionWeights

F = Fraction
ALPHAS = [F(1, 4), F(1, 3), F(1, 2), F(2, 3)]
ORACLE_CASES = [
    (N, r, s)
    for N in range(2, 6)
    for r in range(1, N + 1)
    for s in range(1, N - r + 1)
    if s <= r
]


class TestUWMap:
    def test_normalization_point(self) -> None:
        assert u_w_map(F(1, 3), 1) == 1

    def test_infinity(self) -> None:
        assert u_w_map(0.4, float("inf")) == pytest.approx(0.4)

    def test_inverse(self) -> None:
        assert w_of_u(F(1, 2), F(3, 4)) == 2
        assert u_w_map(F(2, 5), w_of_u(F(2, 5), F(7, 9))) == F(7, 9)

    def test_poles(self) -> None:
        with pytest.raises(LogGasError):
            u_w_map(F(1, 2), 0)
        with pytest.raises(LogGasError):
            w_of_u(F(1, 2), F(1, 2))


class TestFAtOne:
    def test_single_column_single_row(self) -> None:
        for q in range(4):
            assert F_at_one(q + 2, 1, 1, F(1, 3)) == F(2, 3) ** (q + 1)

    def test_full_width(self) -> None:
        assert F_at_one(5, 5, 3, F(1, 3)) == 1

    @pytest.mark.parametrize("case", [(3, 2, 1), (4, 2, 2), (5, 3, 2), (5, 2, 1), (5, 2, 3)])
    def test_matches_brute_force_efp(self, case: tuple[int, int, int]) -> None:
        N, r, s = case
        alpha = F(1, 2)
        expected = gefp_bruteforce(N, s, [r] * s, FreeFermionWeights(alpha))
        assert F_at_one(N, r, s, alpha) == expected

    def test_rejects_overfull_geometry(self) -> None:
        with pytest.raises(LogGasError):
            F_at_one(4, 3, 2, F(1, 2))

    def test_moment_matrix_is_hankel(self) -> None:
        m = MomentMatrix.build(1, F(1, 3), 4, 3)
        assert all(m.entries[j][k] == m.entries[k][j] for j in range(3) for k in range(3))
        assert m.entries[0][2] == m.entries[1][1]


class TestFAtW:
    def test_w_one_uses_hankel_branch(self) -> None:
        assert F_at_w(5, 2, 2, F(1, 3), 1) == F_at_one(5, 2, 2, F(1, 3))

    def test_single_term_when_r_is_one(self) -> None:
        assert F_at_w(4, 1, 1, F(1, 3), F(7, 2)) == F_at_one(4, 1, 1, F(1, 3))

    def test_hand_formula_s_one(self) -> None:
        alpha, w = F(1, 3), F(5)
        expected = (1 - alpha) * (2 * alpha * w + 1 - alpha)
        assert F_at_w(3, 2, 1, alpha, w) == expected

    def test_hand_formula_square_cut(self) -> None:
        alpha, w = F(1, 2), F(2)
        u = u_w_map(alpha, w)
        assert F_at_w(4, 2, 2, alpha, w) == (1 - alpha) ** 4 * w * u

    def test_continuity_at_one(self) -> None:
        exact = float(F_at_one(5, 3, 2, F(1, 3)))
        for k in (4, 6):
            for sign in (1, -1):
                w = 1 + sign * F(1, 10**k)
                assert float(F_at_w(5, 3, 2, F(1, 3), w)) == pytest.approx(exact, rel=1e-3)

    def test_contracted_boundary_distribution(self, third: FreeFermionWeights) -> None:
        dist = boundary_distribution(LGeometry(4, 2, 1), third)
        expected = (dist[0] + dist[1] * 2) * F_at_one(4, 2, 1, F(1, 3))
        assert F_at_w(4, 2, 1, F(1, 3), 2) == expected

    def test_rejects_zero(self) -> None:
        with pytest.raises(LogGasError):
            F_at_w(4, 2, 1, F(1, 3), 0)


class TestHGenerating:
    def test_normalized(self) -> None:
        assert h_generating(6, 3, 2, F(2, 3), 1) == 1

    def test_degenerate_distribution(self) -> None:
        assert h_generating(2, 1, 1, F(1, 3), F(9, 4)) == 1

    def test_evaluation_record(self) -> None:
        ev = GeneratingEval.at(4, 2, 1, F(1, 3), 3)
        assert ev.u == F(1, 3) + F(2, 9)
        assert ev.value == h_generating(4, 2, 1, F(1, 3), 3)

    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("case", ORACLE_CASES)
    def test_oracle_equality(self, case: tuple[int, int, int], alpha: Fraction) -> None:
        N, r, s = case
        oracle = boundary_distribution(LGeometry(N, r, s), FreeFermionWeights(alpha))
        assert h_coefficients(N, r, s, alpha) == oracle
        w = F(3, 2)
        assert h_generating(N, r, s, alpha, w) == polyval(oracle, w)

    def test_coefficients_sum_to_one(self) -> None:
        assert sum(h_coefficients(7, 4, 2, F(2, 5))) == 1
