"""Shared test fixtures."""

from fractions import Fraction

import pytest

from arcticl.curve.regime import RegimeParams, solve_eta_ab
from arcticl.model.vertex import FreeFermionWeights


@pytest.fixture
def half() -> FreeFermionWeights:
    """Weights at α = 1/2, where the Aztec measure is uniform."""
    return FreeFermionWeights(Fraction(1, 2))


@pytest.fixture
def third() -> FreeFermionWeights:
    return FreeFermionWeights(Fraction(1, 3))


@pytest.fixture
def three_quarters() -> FreeFermionWeights:
    """1 − α = 1/4 is a square, so every half power stays rational."""
    return FreeFermionWeights(Fraction(3, 4))


@pytest.fixture
def plot_params() -> RegimeParams:
    """Regime II, Q = 0 at α = 0.3, R = 1.5 (the two-branch example)."""
    return solve_eta_ab(1.5, 0.0, 0.3)


@pytest.fixture
def generic_params() -> RegimeParams:
    """Regime IIA with a rectangular cut: α = 0.3, R = 1.5, Q = 0.4."""
    return solve_eta_ab(1.5, 0.4, 0.3)
