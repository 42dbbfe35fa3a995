"""Frequency-domain identification toolkit for linearized DSGE models."""

__version__ = "0.1.0"

from . import errors
from .lre import CanonicalForm, Determinacy, SolutionSet, Verdict, impulse_response, simulate, solve_linear_re

__all__ = [
    "errors",
    "CanonicalForm",
    "Determinacy",
    "SolutionSet",
    "Verdict",
    "impulse_response",
    "simulate",
    "solve_linear_re",
]
