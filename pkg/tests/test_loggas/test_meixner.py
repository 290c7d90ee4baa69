"""Tests for Meixner weights and moment tables."""

from fractions import Fraction

import pytest

from arcticl.loggas.meixner import binomials, meixner_weight, power_sums


class TestMeixnerWeight:
    def test_origin_is_one(self) -> None:
        for q in range(5):
            assert meixner_weight(q, Fraction(2, 7), 0) == 1

    def test_q_zero_is_geometric(self) -> None:
        assert meixner_weight(0, Fraction(1, 3), 4) == Fraction(1, 81)

    def test_hand_value(self) -> None:
        assert meixner_weight(2, Fraction(1, 2), 1) == Fraction(3, 2)

    def test_rejects_negative(self) -> None:
        with pytest.raises(ValueError):
            meixner_weight(-1, Fraction(1, 2), 0)


class TestPowerSums:
    def test_binomial_row(self) -> None:
        assert binomials(3, 5) == [1, 4, 10, 20, 35]

    def test_moments(self) -> None:
        alpha = Fraction(1, 2)
        sums = power_sums(1, alpha, 3, 2)
        mu = [1, Fraction(2, 2), Fraction(3, 4)]
        assert sums == [sum(mu), mu[1] + 2 * mu[2], mu[1] + 4 * mu[2]]

    def test_biased_moments(self) -> None:
        sums = power_sums(0, Fraction(1, 2), 2, 1, u=Fraction(3, 4))
        assert sums == [1 + Fraction(1, 2) / Fraction(3, 4), Fraction(2, 3)]
