"""Exact construction, verification and classification of weight-zero Rota-Baxter operators on Q[x]."""

from .exact_poly import Poly, X, as_rational, parse_poly
from .linear_op import (
    Compose,
    EvalAt,
    IntegralFrom,
    J,
    LinComb,
    MultiplyBy,
    PreconditionError,
    RBReport,
    Zero,
    apply,
    check_compatible,
    check_consistent,
    check_rb,
    rb_form,
    star,
)

__all__ = [
    "Compose", "EvalAt", "IntegralFrom", "J", "LinComb", "MultiplyBy", "Poly",
    "PreconditionError", "RBReport", "X", "Zero", "apply", "as_rational", "check_compatible",
    "check_consistent", "check_rb", "parse_poly", "rb_form", "star",
]
