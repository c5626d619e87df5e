"""Both sides of the kernel identity and the even/odd machinery.

For admissible ``(x, alpha, beta)`` and ``f`` with integrable ``f''``::

    2*int_a^b f - (beta-alpha)[f(x) + f(a+b-x)]
      + (b-beta)^2 f'(b) - (a-alpha)^2 f'(a) + 2(a-alpha) f(a) - 2(b-beta) f(b)
      + (beta-alpha)[(x - (3alpha+beta)/4) f'(x) + (a+b-x - (alpha+3beta)/4) f'(a+b-x)]
    = int_a^b k(t) f''(t) dt
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .integrands import Evaluator, Integrand
from .kernel import Interval, RuleParams, kernel_breakpoints, kernel_function
from .oracle import integrate_reference

Oracle = Callable[..., object]


@dataclass(frozen=True)
class EvenOddParts:
    even: Evaluator
    odd: Evaluator
    base: Evaluator


def decompose(g: Evaluator, interval: Interval) -> EvenOddParts:
    s = interval.a + interval.b
    return EvenOddParts(
        even=lambda t: 0.5 * (g(t) + g(s - t)),
        odd=lambda t: 0.5 * (g(t) - g(s - t)),
        base=g,
    )


def integral_of(fn: Integrand, interval: Interval, rel_tol: float = 1e-10, oracle=integrate_reference):
    """``(value, source)`` where source is ``"analytic"`` or ``"oracle"``."""
    fn.require_within(interval)
    if fn.analytic_integral is not None:
        return fn.analytic_integral(interval.a, interval.b), "analytic"
    return oracle(fn.f, interval, rel_tol).value, "oracle"


def _boundary_terms(fn: Integrand, interval: Interval, params: RuleParams) -> float:
    """Everything on the left side except ``2*int f``."""
    a, b = interval.a, interval.b
    x, al, be = params.x, params.alpha, params.beta
    r = interval.reflect(x)
    d = be - al
    terms = [
        -d * (fn.f(x) + fn.f(r)),
        (b - be) ** 2 * fn.df(b),
        -((a - al) ** 2) * fn.df(a),
        2 * (a - al) * fn.f(a),
        -2 * (b - be) * fn.f(b),
        d * ((x - (3 * al + be) / 4) * fn.df(x) + (r - (al + 3 * be) / 4) * fn.df(r)),
    ]
    return math.fsum(terms)


def identity_lhs(
    fn: Integrand, interval: Interval, params: RuleParams, rel_tol: float = 1e-10, oracle=integrate_reference
) -> float:
    params.check(interval)
    integral, _ = integral_of(fn, interval, rel_tol, oracle)
    return 2 * integral + _boundary_terms(fn, interval, params)


def identity_rhs(
    fn: Integrand, interval: Interval, params: RuleParams, rel_tol: float = 1e-10, oracle=integrate_reference
) -> float:
    fn.require_within(interval)
    k = kernel_function(interval, params)
    res = oracle(
        lambda t: k(t) * fn.d2f(t),
        interval,
        rel_tol,
        breakpoints=kernel_breakpoints(interval, params),
    )
    return res.value


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    integral_source: str

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def tolerance(self) -> float:
        return 1e-8 * (1.0 + abs(self.lhs))

    @property
    def ok(self) -> bool:
        return self.residual <= self.tolerance


def identity_check(
    fn: Integrand, interval: Interval, params: RuleParams, rel_tol: float = 1e-10, oracle=integrate_reference
) -> IdentityCheck:
    params.check(interval)
    integral, source = integral_of(fn, interval, rel_tol, oracle)
    lhs = 2 * integral + _boundary_terms(fn, interval, params)
    rhs = identity_rhs(fn, interval, params, rel_tol, oracle)
    return IdentityCheck(lhs=lhs, rhs=rhs, integral_source=source)


def identity_residual(
    fn: Integrand, interval: Interval, params: RuleParams, rel_tol: float = 1e-10, oracle=integrate_reference
) -> float:
    return identity_check(fn, interval, params, rel_tol, oracle).residual


def corollary1_lhs(fn: Integrand, interval: Interval, x: float, rel_tol: float = 1e-10) -> float:
    """Left side specialised to alpha = a, beta = b."""
    a, b = interval.a, interval.b
    RuleParams.corollary1(interval, x).check(interval)
    r = interval.reflect(x)
    integral, _ = integral_of(fn, interval, rel_tol)
    return math.fsum([
        2 * integral,
        -(b - a) * (fn.f(x) + fn.f(r)),
        (b - a) * (x - (3 * a + b) / 4) * (fn.df(x) - fn.df(r)),
    ])


def corollary2_lhs(fn: Integrand, interval: Interval, rel_tol: float = 1e-10) -> float:
    """Left side specialised to alpha = beta = (a+b)/2."""
    a, b = interval.a, interval.b
    integral, _ = integral_of(fn, interval, rel_tol)
    return math.fsum([
        2 * integral,
        (b - a) ** 2 / 4 * (fn.df(b) - fn.df(a)),
        -(b - a) * (fn.f(a) + fn.f(b)),
    ])
