"""Domino shuffling on the cut Aztec diamond: exact probabilities and samples."""

from arcticl.shuffling.order import OrderParameterField, order_parameters
from arcticl.shuffling.probabilities import PlaquetteProbabilities, edge_probabilities
from arcticl.shuffling.sampler import TilingSample, sample_tiling
from arcticl.shuffling.weights import AztecWeightGrid, ShufflingError, build_weights

__all__ = [
    "AztecWeightGrid",
    "OrderParameterField",
    "PlaquetteProbabilities",
    "ShufflingError",
    "TilingSample",
    "build_weights",
    "edge_probabilities",
    "order_parameters",
    "sample_tiling",
]
