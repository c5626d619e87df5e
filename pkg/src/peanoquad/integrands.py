"""Integrands with analytic derivatives, integrals and convexity metadata."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, UnknownNameError
from .kernel import Interval

Evaluator = Callable[[float], float]


class Flag(str, Enum):
    ASSERTED = "asserted"
    DENIED = "denied"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, holds: bool | None) -> "Flag":
        if holds is None:
            return cls.UNKNOWN
        return cls.ASSERTED if holds else cls.DENIED

    def as_bool(self) -> bool | None:
        return {Flag.ASSERTED: True, Flag.DENIED: False}.get(self)


@dataclass(frozen=True)
class Integrand:
    """A twice-differentiable function on ``domain`` plus what is known about it.

    ``analytic_integral(lo, hi)`` and ``d2f_absmax(lo, hi)`` (an upper
    bound for ``|f''|`` on ``[lo, hi]``) are optional.
    """

    f: Evaluator
    df: Evaluator
    d2f: Evaluator
    domain: Interval
    label: str
    f_convex: Flag = Flag.UNKNOWN
    fprime_convex: Flag = Flag.UNKNOWN
    abs_f2_convex: Flag = Flag.UNKNOWN
    analytic_integral: Optional[Callable[[float, float], float]] = None
    d2f_absmax: Optional[Callable[[float, float], float]] = None

    def require_within(self, interval: Interval) -> None:
        if not self.domain.contains(interval):
            raise DomainError(
                f"[{interval.a}, {interval.b}] is outside the domain "
                f"[{self.domain.a}, {self.domain.b}] of {self.label}"
            )

    def with_domain(self, domain: Interval) -> "Integrand":
        return replace(self, domain=domain)


def _positive_domain(name: str, domain: Interval) -> None:
    if domain.a <= 0:
        raise DomainError(f"{name} needs a domain inside (0, inf), got [{domain.a}, {domain.b}]")


def _fmt(v: float) -> str:
    return f"{v:g}"


def power(domain: Interval, p: float = 3.0, label: str | None = None) -> Integrand:
    _positive_domain("power", domain)
    p = float(p)
    c2 = p * (p - 1.0)
    c3 = c2 * (p - 2.0)

    def integral(lo, hi):
        if p == -1.0:
            return math.log(hi / lo)
        q = p + 1.0
        # hi**q - lo**q without cancellation in the ratio
        return hi**q * -math.expm1(q * math.log(lo / hi)) / q

    def absmax(lo, hi):
        return abs(c2) * max(lo ** (p - 2.0), hi ** (p - 2.0))

    abs_f2 = c2 == 0.0 or (p - 2.0) * (p - 3.0) >= 0.0
    return Integrand(
        f=lambda t: t**p,
        df=lambda t: p * t ** (p - 1.0),
        d2f=lambda t: c2 * t ** (p - 2.0),
        domain=domain,
        label=label or f"t^{_fmt(p)}",
        f_convex=Flag.of(c2 >= 0.0),
        fprime_convex=Flag.of(c3 >= 0.0),
        abs_f2_convex=Flag.of(abs_f2),
        analytic_integral=integral,
        d2f_absmax=absmax,
    )


def recip(domain: Interval, label: str | None = None) -> Integrand:
    _positive_domain("recip", domain)
    return Integrand(
        f=lambda t: 1.0 / t,
        df=lambda t: -1.0 / (t * t),
        d2f=lambda t: 2.0 / t**3,
        domain=domain,
        label=label or "1/t",
        f_convex=Flag.ASSERTED,
        fprime_convex=Flag.DENIED,
        abs_f2_convex=Flag.ASSERTED,
        analytic_integral=lambda lo, hi: math.log(hi / lo),
        d2f_absmax=lambda lo, hi: 2.0 / lo**3,
    )


def negrecip(domain: Interval, label: str | None = None) -> Integrand:
    _positive_domain("negrecip", domain)
    return Integrand(
        f=lambda t: -1.0 / t,
        df=lambda t: 1.0 / (t * t),
        d2f=lambda t: -2.0 / t**3,
        domain=domain,
        label=label or "-1/t",
        f_convex=Flag.DENIED,
        fprime_convex=Flag.ASSERTED,
        abs_f2_convex=Flag.ASSERTED,
        analytic_integral=lambda lo, hi: -math.log(hi / lo),
        d2f_absmax=lambda lo, hi: 2.0 / lo**3,
    )


def neglog(domain: Interval, label: str | None = None) -> Integrand:
    _positive_domain("neglog", domain)

    def anti(t):
        return t * math.log(t) - t

    return Integrand(
        f=lambda t: -math.log(t),
        df=lambda t: -1.0 / t,
        d2f=lambda t: 1.0 / (t * t),
        domain=domain,
        label=label or "-ln t",
        f_convex=Flag.ASSERTED,
        fprime_convex=Flag.DENIED,
        abs_f2_convex=Flag.ASSERTED,
        analytic_integral=lambda lo, hi: -(anti(hi) - anti(lo)),
        d2f_absmax=lambda lo, hi: 1.0 / (lo * lo),
    )


def exp(domain: Interval, label: str | None = None) -> Integrand:
    return Integrand(
        f=math.exp,
        df=math.exp,
        d2f=math.exp,
        domain=domain,
        label=label or "e^t",
        f_convex=Flag.ASSERTED,
        fprime_convex=Flag.ASSERTED,
        abs_f2_convex=Flag.ASSERTED,
        analytic_integral=lambda lo, hi: math.exp(lo) * math.expm1(hi - lo),
        d2f_absmax=lambda lo, hi: math.exp(hi),
    )


def _horner(coeffs: Sequence[float]) -> Evaluator:
    rev = list(reversed(coeffs))

    def value(t):
        acc = 0.0
        for c in rev:
            acc = acc * t + c
        return acc

    return value


def _deriv(coeffs: Sequence[float]) -> list[float]:
    return [k * c for k, c in enumerate(coeffs)][1:] or [0.0]


def _poly_range(coeffs: Sequence[float], lo: float, hi: float) -> tuple[float, float]:
    """Exact (up to root finding) min and max of a polynomial on [lo, hi]."""
    value = _horner(coeffs)
    cands = [lo, hi]
    d = np.trim_zeros(np.asarray(_deriv(coeffs), dtype=float), "b")
    if d.size > 1:
        for r in np.polynomial.polynomial.polyroots(d):
            if abs(r.imag) < 1e-12 and lo < r.real < hi:
                cands.append(float(r.real))
    vals = [value(t) for t in cands]
    return min(vals), max(vals)


def poly(domain: Interval, coeffs: Sequence[float] = (0.0, 1.0), label: str | None = None) -> Integrand:
    """Polynomial with coefficients in ascending order: ``c0 + c1 t + ...``."""
    coeffs = [float(c) for c in coeffs] or [0.0]
    d1 = _deriv(coeffs)
    d2 = _deriv(d1)
    d3 = _deriv(d2)
    d4 = _deriv(d3)
    anti = _horner([0.0] + [c / (k + 1) for k, c in enumerate(coeffs)])

    a, b = domain.a, domain.b
    f2_lo, f2_hi = _poly_range(d2, a, b)
    f3_lo, _ = _poly_range(d3, a, b)
    if len(coeffs) <= 4:
        abs_f2 = True  # |f''| is |linear|
    elif f2_lo >= 0.0 or f2_hi <= 0.0:
        sign = 1.0 if f2_lo >= 0.0 else -1.0
        f4_lo, _ = _poly_range([sign * c for c in d4], a, b)
        abs_f2 = f4_lo >= 0.0
    else:
        abs_f2 = None

    def absmax(lo, hi):
        rlo, rhi = _poly_range(d2, lo, hi)
        return max(abs(rlo), abs(rhi))

    return Integrand(
        f=_horner(coeffs),
        df=_horner(d1),
        d2f=_horner(d2),
        domain=domain,
        label=label or "poly(" + ",".join(_fmt(c) for c in coeffs) + ")",
        f_convex=Flag.of(f2_lo >= 0.0),
        fprime_convex=Flag.of(f3_lo >= 0.0),
        abs_f2_convex=Flag.of(abs_f2),
        analytic_integral=lambda lo, hi: anti(hi) - anti(lo),
        d2f_absmax=absmax,
    )


def quartic(domain: Interval, c: float | None = None, label: str | None = None) -> Integrand:
    """``(t - c)**4``; ``c`` defaults to the domain midpoint (symmetric quartic)."""
    c = domain.mid if c is None else float(c)
    return Integrand(
        f=lambda t: (t - c) ** 4,
        df=lambda t: 4.0 * (t - c) ** 3,
        d2f=lambda t: 12.0 * (t - c) ** 2,
        domain=domain,
        label=label or f"(t-{_fmt(c)})^4",
        f_convex=Flag.ASSERTED,
        fprime_convex=Flag.of(domain.a >= c),
        abs_f2_convex=Flag.ASSERTED,
        analytic_integral=lambda lo, hi: ((hi - c) ** 5 - (lo - c) ** 5) / 5.0,
        d2f_absmax=lambda lo, hi: 12.0 * max((lo - c) ** 2, (hi - c) ** 2),
    )


BUILTINS = {
    "power": power,
    "recip": recip,
    "negrecip": negrecip,
    "neglog": neglog,
    "exp": exp,
    "poly": poly,
    "quartic": quartic,
}


def builtin(name: str, domain: Interval, **params) -> Integrand:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise UnknownNameError(f"unknown integrand {name!r}; choose from {sorted(BUILTINS)}") from None
    return factory(domain, **params)


def parse_integrand(spec: str, domain: Interval) -> Integrand:
    """Build an integrand from a CLI string such as ``exp``, ``power:3``,
    ``poly:0,1`` or ``quartic:0.5``."""
    name, _, arg = spec.partition(":")
    name = name.strip()
    try:
        if name == "power":
            return power(domain, float(arg) if arg else 3.0)
        if name == "poly":
            return poly(domain, [float(c) for c in arg.split(",")] if arg else (0.0, 1.0))
        if name == "quartic":
            return quartic(domain, float(arg) if arg else None)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad integrand parameters in {spec!r}") from None
    if arg:
        raise DomainError(f"integrand {name!r} takes no parameters")
    return builtin(name, domain)
