"""Corrected quadrature with certified error bounds, and numerical audits of
the inequalities built on the same three-branch kernel."""

from .errors import (
    ConvergenceError,
    DomainError,
    MissingInputError,
    NonConvergenceError,
    PeanoQuadError,
    UnknownNameError,
)
from .integrands import Flag, Integrand, builtin
from .kernel import Interval, KernelNorms, RuleParams, kernel_eval, kernel_norms, params_symmetric
from .oracle import OracleResult, check_derivatives, integrate_reference, probe_convexity
from .quadrature import CertKind, Certificate, QuadratureResult, certify, corrected_rule
from .quadrature import integrate_adaptive, integrate_composite

__version__ = "0.1.0"
