"""Tests for the exact six-vertex oracle."""

from fractions import Fraction

import pytest

from arcticl.model.geometry import GeometryError, LGeometry
from arcticl.model.transfer import (
    TransferError,
    boundary_distribution,
    efp_transfer,
    enumerate_states,
    framed_partition_function,
    gefp_bruteforce,
    partition_function,
    vertex_marginals,
)
from arcticl.model.vertex import FreeFermionWeights, VertexType

ALPHAS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)]


def _geometries(max_n: int) -> list[LGeometry]:
    return [
        LGeometry(N, r, s)
        for N in range(1, max_n + 1)
        for r in range(1, N + 1)
        for s in range(0, N - r + 1)
    ]


class TestEnumerateStates:
    @pytest.mark.parametrize(
        ("geom", "count"),
        [
            (LGeometry(1, 1, 0), 1),
            (LGeometry(2, 2, 0), 2),
            (LGeometry(2, 1, 1), 1),
            (LGeometry(3, 3, 0), 7),
            (LGeometry(4, 4, 0), 42),
            (LGeometry(5, 5, 0), 429),
        ],
    )
    def test_state_counts(self, geom: LGeometry, count: int) -> None:
        assert len(enumerate_states(geom)) == count

    def test_two_by_two_states(self) -> None:
        grids = {state.grid for state in enumerate_states(LGeometry(2, 2, 0))}
        T = VertexType
        assert grids == {((T.TWO, T.SIX), (T.SIX, T.ONE)), ((T.SIX, T.THREE), (T.FOUR, T.SIX))}

    @pytest.mark.parametrize("geom", _geometries(4))
    def test_every_state_obeys_ice_rule(self, geom: LGeometry) -> None:
        for state in enumerate_states(geom):
            assert state.is_valid()

    def test_first_row_has_one_up_arrow(self) -> None:
        for state in enumerate_states(LGeometry(5, 3, 2)):
            ups = [vt for vt in state.grid[0] if vt.arrows[2] == "U"]
            assert len(ups) == 1
            assert 1 <= state.first_row_up() <= 3

    @pytest.mark.parametrize("geom", [LGeometry(4, 2, 2), LGeometry(5, 3, 1), LGeometry(5, 2, 2)])
    def test_cut_corner_matches_filtered_square(self, geom: LGeometry) -> None:
        square = enumerate_states(LGeometry(geom.N, geom.N, 0))
        frozen = [
            st.grid
            for st in square
            if all(
                st.at(j, k) is VertexType.TWO
                for k in range(1, geom.s + 1)
                for j in range(geom.r + 1, geom.N + 1)
            )
        ]
        assert [st.grid for st in enumerate_states(geom)] == frozen

    def test_order_is_canonical(self) -> None:
        first = [st.grid for st in enumerate_states(LGeometry(4, 3, 1))]
        assert first == [st.grid for st in enumerate_states(LGeometry(4, 3, 1))]
        assert first == sorted(first)

    def test_size_guard(self) -> None:
        with pytest.raises(TransferError):
            enumerate_states(LGeometry(8, 8, 0))

    def test_inadmissible_geometry_is_empty(self) -> None:
        assert enumerate_states(LGeometry(4, 1, 2)) == []


class TestPartitionFunction:
    @pytest.mark.parametrize("N", range(1, 8))
    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_square_is_normalized(self, N: int, alpha: Fraction) -> None:
        assert partition_function(LGeometry(N, N, 0), FreeFermionWeights(alpha)) == 1

    def test_two_by_two_contributions(self, third: FreeFermionWeights) -> None:
        weights = sorted(st.weight(third) for st in enumerate_states(LGeometry(2, 2, 0)))
        assert weights == [Fraction(1, 3), Fraction(2, 3)]

    @pytest.mark.parametrize("geom", [g for g in _geometries(5) if g.s >= 1])
    def test_relation_to_efp(self, geom: LGeometry, three_quarters: FreeFermionWeights) -> None:
        Z = partition_function(geom, three_quarters)
        assert isinstance(Z, Fraction)
        frame = Fraction(1, 2) ** geom.cut_area
        efp = gefp_bruteforce(geom.N, geom.s, [geom.r] * geom.s, three_quarters)
        assert Z * frame == efp

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_transfer_efp_matches_brute_force(self, alpha: Fraction) -> None:
        w = FreeFermionWeights(alpha)
        for geom in _geometries(4):
            if geom.s >= 1:
                brute = gefp_bruteforce(geom.N, geom.s, [geom.r] * geom.s, w)
                assert efp_transfer(geom, w) == brute

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_framed_partition_function_is_the_efp(self, alpha: Fraction) -> None:
        w = FreeFermionWeights(alpha)
        for geom in _geometries(5):
            if geom.s >= 1 and geom.is_admissible:
                framed = framed_partition_function(geom, w)
                assert isinstance(framed, Fraction)
                assert framed == efp_transfer(geom, w)

    def test_deep_cut_still_has_states(self) -> None:
        alpha = Fraction(1, 4)
        geom = LGeometry(3, 2, 2)
        assert len(list(enumerate_states(geom))) == 2
        # one state weighs alpha(1 - alpha), the other (1 - alpha)^2
        expected = alpha * (1 - alpha) + (1 - alpha) ** 2
        assert expected == Fraction(3, 4)
        assert partition_function(geom, FreeFermionWeights(alpha)) == expected

    def test_inadmissible_is_zero(self, half: FreeFermionWeights) -> None:
        assert partition_function(LGeometry(4, 1, 2), half) == 0

    def test_odd_half_power_falls_back_to_float(self, half: FreeFermionWeights) -> None:
        Z = partition_function(LGeometry(2, 1, 1), half)
        assert isinstance(Z, float)
        assert Z == pytest.approx(0.5**0.5)

    def test_float_alpha(self) -> None:
        assert partition_function(LGeometry(4, 4, 0), FreeFermionWeights(0.37)) == pytest.approx(1)


class TestBoundaryDistribution:
    def test_single_column(self, half: FreeFermionWeights) -> None:
        assert boundary_distribution(LGeometry(2, 1, 1), half) == [1]

    def test_two_by_two(self, third: FreeFermionWeights) -> None:
        assert boundary_distribution(LGeometry(2, 2, 0), third) == [Fraction(2, 3), Fraction(1, 3)]

    @pytest.mark.parametrize("geom", [g for g in _geometries(5) if g.s >= 1 and g.is_admissible])
    def test_sums_to_one(self, geom: LGeometry, third: FreeFermionWeights) -> None:
        dist = boundary_distribution(geom, third)
        assert len(dist) == geom.r
        assert sum(dist) == 1
        assert all(h >= 0 for h in dist)

    @pytest.mark.parametrize("geom", [LGeometry(4, 2, 1), LGeometry(5, 3, 2), LGeometry(4, 3, 1)])
    def test_lattice_derivative_of_gefp(self, geom: LGeometry, third: FreeFermionWeights) -> None:
        N, r, s = geom.N, geom.r, geom.s
        rest = [r] * (s - 1)
        G = [Fraction(0)] + [gefp_bruteforce(N, s, [l, *rest], third) for l in range(1, r + 1)]
        expected = [(G[l] - G[l - 1]) / G[r] for l in range(1, r + 1)]
        assert boundary_distribution(geom, third) == expected

    def test_inadmissible_raises(self, half: FreeFermionWeights) -> None:
        with pytest.raises(GeometryError):
            boundary_distribution(LGeometry(4, 1, 2), half)


class TestGefpBruteforce:
    def test_full_width_is_certain(self, third: FreeFermionWeights) -> None:
        assert gefp_bruteforce(4, 3, [4, 4, 4], third) == 1

    def test_single_edge(self, third: FreeFermionWeights) -> None:
        assert gefp_bruteforce(2, 1, [1], third) == Fraction(2, 3)

    def test_probability_range(self, half: FreeFermionWeights) -> None:
        value = gefp_bruteforce(5, 2, [2, 4], half)
        assert 0 < value < 1

    def test_rejects_decreasing_list(self, half: FreeFermionWeights) -> None:
        with pytest.raises(GeometryError):
            gefp_bruteforce(4, 2, [3, 2], half)

    def test_rejects_wrong_length(self, half: FreeFermionWeights) -> None:
        with pytest.raises(GeometryError):
            gefp_bruteforce(4, 2, [3], half)


class TestVertexMarginals:
    def test_rows_are_distributions(self, third: FreeFermionWeights) -> None:
        geom = LGeometry(4, 2, 1)
        marginals = vertex_marginals(geom, third)
        assert len(marginals) == 16 - geom.cut_area
        for cell in marginals.values():
            assert sum(cell.values()) == 1

    def test_frozen_corner_neighbour(self, half: FreeFermionWeights) -> None:
        marginals = vertex_marginals(LGeometry(2, 1, 1), half)
        assert marginals[(1, 1)][VertexType.SIX] == 1
        assert marginals[(2, 2)][VertexType.SIX] == 1
