"""Arctic curve: regimes, resolvents, tangent family and the implicit sextic."""

from arcticl.curve.regime import Regime, RegimeError, RegimeParams, solve_eta_ab

__all__ = ["Regime", "RegimeError", "RegimeParams", "solve_eta_ab"]
