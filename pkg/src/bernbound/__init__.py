"""Bernstein operators, the Ditzian-Totik modulus and explicit converse-estimate checks."""

from .bernstein import approx_error_norm, bernstein_eval, sample, voronovskaja_residual, voronovskaja_residual_norm
from .funcmodel import DegenerateInputError, FunctionSpec, HypothesisError, builtin, builtin_corpus
from .numerics import GridConfig, NormEstimate
from .parser import ParseError, parse, render
from .smoothness import classical_modulus, dt_modulus2, kfunctional_bounds, phi, weighted_norm
from .theorems import (
    BoundReport,
    ThresholdResult,
    an_bracket,
    an_value,
    corollary1_check,
    corollary1_threshold,
    example_thresholds,
    find_n0,
    find_n1,
    lambda_estimate,
    remark3_n2,
    sandwich_check,
    theorem3_check,
    theorem4_check,
    theoremE_check,
)

__version__ = "0.1.0"
