"""Auditable encodings of the published inequalities.

Every claim evaluates its printed left and right sides literally and
reports the signed slack ``rhs - lhs``. Hypotheses are recorded, never
enforced, so claims can be probed outside their stated assumptions.

Claim ids: T1, T2 (general theorems), P6, H1, P7, H2, P11, R12 (quadrature
specialisations), HH (Hermite-Hadamard positive control). Means claims
M1-M5 and CHAIN live in :mod:`peanoquad.means`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .identity import identity_lhs, integral_of
from .integrands import Integrand
from .kernel import Interval, RuleParams, kernel_norms

NORM_CHOICES = ("sup", "l1", "half_range")
VARIANTS = ("literal", "corrected")


def tol_audit(rhs: float) -> float:
    return 1e-10 * (1.0 + abs(rhs))


@dataclass
class BoundAudit:
    claim_id: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    norm_choice: str = "n/a"
    variant: str = "literal"
    integrand: str = ""
    a: float | None = None
    b: float | None = None
    x: float | None = None
    alpha: float | None = None
    beta: float | None = None
    hypothesis_flags: dict[str, bool | None] = field(default_factory=dict)
    tol: float = 0.0

    @property
    def hypotheses_hold(self) -> bool:
        return all(v is True for v in self.hypothesis_flags.values())


def make_audit(claim_id, lhs, rhs, *, tol=None, interval=None, params=None, **kw) -> BoundAudit:
    tol = tol_audit(rhs) if tol is None else tol
    slack = rhs - lhs
    if interval is not None:
        kw.setdefault("a", interval.a)
        kw.setdefault("b", interval.b)
    if params is not None:
        kw.setdefault("x", params.x)
        kw.setdefault("alpha", params.alpha)
        kw.setdefault("beta", params.beta)
    return BoundAudit(claim_id, lhs, rhs, slack, slack >= -tol, tol=tol, **kw)


def _close(u: float, v: float) -> bool:
    return abs(u - v) <= 1e-12 * (1.0 + abs(u) + abs(v))


def bracket_fprime(fn: Integrand, interval: Interval) -> float:
    """f'(a) + f'(b) - 2 f'((a+b)/2)."""
    return math.fsum([fn.df(interval.a), fn.df(interval.b), -2 * fn.df(interval.mid)])


def bracket_f2(fn: Integrand, interval: Interval) -> float:
    """|f''(a)| + |f''(b)| + |f''((a+b)/2)|."""
    return abs(fn.d2f(interval.a)) + abs(fn.d2f(interval.b)) + abs(fn.d2f(interval.mid))


def _check_choice(norm_choice: str, variant: str) -> None:
    if norm_choice not in NORM_CHOICES:
        raise DomainError(f"unknown norm choice {norm_choice!r}; choose from {NORM_CHOICES}")
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; choose from {VARIANTS}")


def _mean(fn, interval):
    integral, _ = integral_of(fn, interval)
    return integral / interval.width


def _trap_corrected(fn, interval):
    """(1/(b-a)) int f - (f(a)+f(b))/2 + ((b-a)/8)[f'(b) - f'(a)]."""
    a, b = interval.a, interval.b
    return math.fsum([
        _mean(fn, interval),
        -0.5 * (fn.f(a) + fn.f(b)),
        (b - a) / 8 * (fn.df(b) - fn.df(a)),
    ])


def _flags(fn: Integrand, *names: str) -> dict[str, bool | None]:
    return {n: getattr(fn, n).as_bool() for n in names}


def claim_theorem1(
    fn: Integrand, interval: Interval, params: RuleParams, norm_choice: str = "sup", variant: str = "literal"
) -> BoundAudit:
    """|identity lhs| <= norm * bracket.

    ``literal`` uses f'(a)+f'(b)-2f'(m); ``corrected`` uses f'(b)-f'(a),
    which is the rigorous bound for convex f with the sup norm.
    """
    _check_choice(norm_choice, variant)
    lhs = abs(identity_lhs(fn, interval, params))
    if variant == "literal":
        bracket = bracket_fprime(fn, interval)
    else:
        bracket = fn.df(interval.b) - fn.df(interval.a)
    rhs = kernel_norms(interval, params).get(norm_choice) * bracket
    return make_audit(
        "T1", lhs, rhs, interval=interval, params=params, norm_choice=norm_choice, variant=variant,
        integrand=fn.label, hypothesis_flags=_flags(fn, "fprime_convex"),
    )


def claim_theorem2(
    fn: Integrand, interval: Interval, params: RuleParams, norm_choice: str = "sup", bracket_variant: str = "literal"
) -> BoundAudit:
    """|identity lhs| <= ((b-a)/4) * norm * bracket.

    ``corrected`` adds a second |f''(m)|, as the half-interval
    Hermite-Hadamard step actually produces.
    """
    _check_choice(norm_choice, bracket_variant)
    lhs = abs(identity_lhs(fn, interval, params))
    bracket = bracket_f2(fn, interval)
    if bracket_variant == "corrected":
        bracket += abs(fn.d2f(interval.mid))
    rhs = interval.width / 4 * kernel_norms(interval, params).get(norm_choice) * bracket
    return make_audit(
        "T2", lhs, rhs, interval=interval, params=params, norm_choice=norm_choice, variant=bracket_variant,
        integrand=fn.label, hypothesis_flags=_flags(fn, "abs_f2_convex"),
    )


def claim_prop1(fn: Integrand, interval: Interval, x: float) -> BoundAudit:
    params = RuleParams.corollary1(interval, x)
    params.check(interval)
    a, b, m = interval.a, interval.b, interval.mid
    r = interval.reflect(x)
    integral, _ = integral_of(fn, interval)
    lhs = abs(math.fsum([
        integral,
        -(b - a) / 2 * (fn.f(x) + fn.f(r)),
        (b - a) / 2 * (x - (3 * a + b) / 4) * (fn.df(x) - fn.df(r)),
    ]))
    rhs = ((x - a) ** 3 + (m - x) ** 3) / 3 * bracket_fprime(fn, interval)
    return make_audit(
        "P6", lhs, rhs, interval=interval, params=params, integrand=fn.label,
        hypothesis_flags=_flags(fn, "fprime_convex"),
    )


def claim_midpoint_h1(fn: Integrand, interval: Interval) -> BoundAudit:
    lhs = abs(_mean(fn, interval) - fn.f(interval.mid))
    rhs = interval.width**2 / 24 * bracket_fprime(fn, interval)
    return make_audit(
        "H1", lhs, rhs, interval=interval, integrand=fn.label, hypothesis_flags=_flags(fn, "fprime_convex"),
    )


def claim_prop2(fn: Integrand, interval: Interval) -> BoundAudit:
    lhs = abs(_trap_corrected(fn, interval))
    rhs = interval.width**2 / 48 * bracket_fprime(fn, interval)
    return make_audit(
        "P7", lhs, rhs, interval=interval, integrand=fn.label, hypothesis_flags=_flags(fn, "fprime_convex"),
    )


def _equal_slopes(fn, interval):
    return _close(fn.df(interval.a), fn.df(interval.b))


def claim_trapezoid_h2(fn: Integrand, interval: Interval) -> BoundAudit:
    a, b = interval.a, interval.b
    lhs = abs(_mean(fn, interval) - 0.5 * (fn.f(a) + fn.f(b)))
    rhs = interval.width**2 / 24 * (fn.df(b) - fn.df(interval.mid))
    flags = _flags(fn, "fprime_convex")
    flags["fprime_equal_endpoints"] = _equal_slopes(fn, interval)
    return make_audit("H2", lhs, rhs, interval=interval, integrand=fn.label, hypothesis_flags=flags)


def claim_prop3(fn: Integrand, interval: Interval) -> BoundAudit:
    lhs = abs(_trap_corrected(fn, interval))
    rhs = interval.width**3 / 192 * bracket_f2(fn, interval)
    return make_audit(
        "P11", lhs, rhs, interval=interval, integrand=fn.label, hypothesis_flags=_flags(fn, "abs_f2_convex"),
    )


def claim_remark12(fn: Integrand, interval: Interval) -> BoundAudit:
    a, b = interval.a, interval.b
    lhs = abs(_mean(fn, interval) - 0.5 * (fn.f(a) + fn.f(b)))
    rhs = interval.width**3 / 192 * bracket_f2(fn, interval)
    flags = _flags(fn, "abs_f2_convex")
    flags["fprime_equal_endpoints"] = _equal_slopes(fn, interval)
    flags["f2_endpoint_sum_equals_mid"] = _close(
        abs(fn.d2f(a)) + abs(fn.d2f(b)), abs(fn.d2f(interval.mid))
    )
    return make_audit("R12", lhs, rhs, interval=interval, integrand=fn.label, hypothesis_flags=flags)


def claim_hermite_hadamard(fn: Integrand, interval: Interval) -> BoundAudit:
    """Two-sided check encoded as ``lhs = worst gap <= 0 = rhs``.

    The gap is ``max(f(m) - mean, mean - (f(a)+f(b))/2)``.
    """
    mean = _mean(fn, interval)
    lower = fn.f(interval.mid)
    upper = 0.5 * (fn.f(interval.a) + fn.f(interval.b))
    gap = max(lower - mean, mean - upper)
    tol = 1e-10 * (1.0 + abs(mean))
    return make_audit(
        "HH", gap, 0.0, tol=tol, interval=interval, integrand=fn.label, hypothesis_flags=_flags(fn, "f_convex"),
    )
