"""Determinant and log-gas formulas for the boundary correlation functions."""
