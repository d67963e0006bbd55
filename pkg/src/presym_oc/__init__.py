"""Presymplectic analysis toolkit for optimal control problems.

Pipeline: declare a control problem (dynamics + running cost), build its
control-parametrized Hamiltonian system, classify it as regular or singular,
run the constraint ladder, verify infinitesimal symmetries and their
conserved momenta, analyse momentum level sets, and integrate the extremal
flow with conservation monitoring.
"""

from .expr import (
    Binary,
    Constant,
    EvalError,
    Expr,
    ExprError,
    ParseError,
    Unary,
    Variable,
    VariableTable,
    diff,
    evaluate,
    format_expr,
    numerically_zero,
    parse,
    simplify,
    substitute,
)
from .model import (
    ControlProblem,
    PhasePoint,
    PontryaginSystem,
    RegularityReport,
    autonomize,
    build_pontryagin,
    classify_regularity,
    validate,
)

__version__ = "0.1.0"
