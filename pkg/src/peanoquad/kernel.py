"""The three-branch quadratic kernel and its closed-form norms.

For an interval ``[a, b]`` and parameters ``x in [a, (a+b)/2]``,
``a <= alpha <= beta <= b`` the kernel is::

    (t - alpha)**2              a <= t < x
    (t - (alpha + beta)/2)**2   x <= t <= a + b - x
    (t - beta)**2               a + b - x < t <= b

Each branch is a convex quadratic, so its maximum over a subinterval is
attained (or approached) at an endpoint and its integral follows from the
antiderivative ``(t - c)**3 / 3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"interval endpoints must be finite, got [{a}, {b}]")
        if not a < b:
            raise DomainError(f"interval requires a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def mid(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def width(self) -> float:
        return self.b - self.a

    def reflect(self, t: float) -> float:
        """Mirror image of ``t`` about the midpoint."""
        return self.a + self.b - t

    def contains(self, other: "Interval") -> bool:
        return self.a <= other.a and other.b <= self.b

    def split(self, n: int) -> list["Interval"]:
        h = self.width / n
        edges = [self.a + i * h for i in range(n)] + [self.b]
        return [Interval(edges[i], edges[i + 1]) for i in range(n)]


@dataclass(frozen=True)
class RuleParams:
    x: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("x", "alpha", "beta"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def check(self, interval: Interval) -> None:
        a, b = interval.a, interval.b
        if not all(math.isfinite(v) for v in (self.x, self.alpha, self.beta)):
            raise DomainError("rule parameters must be finite")
        if not a <= self.alpha <= self.beta <= b:
            raise DomainError(
                f"need a <= alpha <= beta <= b, got alpha={self.alpha}, beta={self.beta} "
                f"on [{a}, {b}]"
            )
        if not a <= self.x <= interval.mid:
            raise DomainError(f"need a <= x <= (a+b)/2, got x={self.x} on [{a}, {b}]")

    @classmethod
    def corollary1(cls, interval: Interval, x: float) -> "RuleParams":
        """alpha = a, beta = b."""
        return cls(x, interval.a, interval.b)

    @classmethod
    def corollary2(cls, interval: Interval, x: float | None = None) -> "RuleParams":
        """alpha = beta = (a+b)/2; the kernel no longer depends on x."""
        return cls(interval.a if x is None else x, interval.mid, interval.mid)


@dataclass(frozen=True)
class KernelNorms:
    sup: float
    l1: float
    half_range: float

    def get(self, choice: str) -> float:
        if choice not in ("sup", "l1", "half_range"):
            raise DomainError(f"unknown norm choice {choice!r}")
        return getattr(self, choice)


def _branches(interval: Interval, params: RuleParams):
    """(lo, hi, centre) for the three branches; empty branches are dropped."""
    a, b = interval.a, interval.b
    x, r = params.x, interval.reflect(params.x)
    centre = 0.5 * (params.alpha + params.beta)
    out = []
    if x > a:
        out.append((a, x, params.alpha))
    out.append((x, r, centre))
    if r < b:
        out.append((r, b, params.beta))
    return out


def kernel_breakpoints(interval: Interval, params: RuleParams) -> list[float]:
    """Interior points where the kernel may jump."""
    x, r = params.x, interval.reflect(params.x)
    return sorted({p for p in (x, r) if interval.a < p < interval.b})


def kernel_eval(interval: Interval, params: RuleParams, t: float) -> float:
    params.check(interval)
    if not interval.a <= t <= interval.b:
        raise DomainError(f"t={t} outside [{interval.a}, {interval.b}]")
    return _kernel_unchecked(interval, params, t)


def _kernel_unchecked(interval: Interval, params: RuleParams, t: float) -> float:
    if t < params.x:
        c = params.alpha
    elif t <= interval.a + interval.b - params.x:
        c = 0.5 * (params.alpha + params.beta)
    else:
        c = params.beta
    return (t - c) ** 2


def kernel_function(interval: Interval, params: RuleParams):
    """Validated ``t -> k(t)`` closure for repeated evaluation."""
    params.check(interval)
    return lambda t: _kernel_unchecked(interval, params, t)


def _cube_integral(lo: float, hi: float, c: float) -> float:
    return ((hi - c) ** 3 - (lo - c) ** 3) / 3.0


def kernel_norms(interval: Interval, params: RuleParams) -> KernelNorms:
    params.check(interval)
    m = interval.mid
    sup = 0.0
    l1 = []
    half = []
    for lo, hi, c in _branches(interval, params):
        sup = max(sup, (lo - c) ** 2, (hi - c) ** 2)
        l1.append(_cube_integral(lo, hi, c))
        clo = max(lo, m)
        if hi > clo:
            half.append(_cube_integral(clo, hi, c))
    return KernelNorms(sup=sup, l1=math.fsum(l1), half_range=math.fsum(half))


def symmetry_tolerance(interval: Interval) -> float:
    return 1e-12 * (1.0 + abs(interval.a) + abs(interval.b))


def params_symmetric(interval: Interval, params: RuleParams) -> bool:
    gap = (params.alpha + params.beta) - (interval.a + interval.b)
    return abs(gap) <= symmetry_tolerance(interval)
