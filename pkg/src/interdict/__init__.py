"""Budget-constrained interdiction solvers with exact rational arithmetic."""

__version__ = "0.1.0"
