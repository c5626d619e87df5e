"""Special means of two positive numbers and the means inequalities.

Logarithmic, identric and p-logarithmic means are evaluated in log space
with ``log1p``/``expm1`` so that nearly equal arguments keep full relative
accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import BoundAudit, VARIANTS, make_audit
from .errors import DomainError, UnknownNameError

LIMIT_WINDOW = 1e-6
CHAIN_RTOL = 1e-12
MEANS_CLAIMS = ("M1", "M2", "M3", "M4", "M5")


def _canonical(a: float, b: float) -> tuple[float, float]:
    a, b = float(a), float(b)
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"means need finite a, b > 0, got ({a}, {b})")
    return (a, b) if a <= b else (b, a)


def arithmetic(a: float, b: float) -> float:
    return 0.5 * (a + b)


def geometric(a: float, b: float) -> float:
    return math.sqrt(a) * math.sqrt(b)


def harmonic(a: float, b: float) -> float:
    return 2 * a * b / (a + b)


def logarithmic(a: float, b: float) -> float:
    a, b = _canonical(a, b)
    if a == b:
        return a
    u = (b - a) / a
    return a * u / math.log1p(u)


def log_identric(a: float, b: float) -> float:
    a, b = _canonical(a, b)
    if a == b:
        return math.log(a)
    u = (b - a) / a
    # (b ln b - a ln a)/(b-a) - 1 rewritten as ln b - 1 + ln(1+u)/u
    return math.log(b) - 1.0 + math.log1p(u) / u


def identric(a: float, b: float) -> float:
    return math.exp(log_identric(a, b))


def _log_lp_power(a: float, b: float, p: float) -> float:
    """ln of (b^(p+1) - a^(p+1)) / ((p+1)(b-a)), for a < b and p != -1."""
    q = p + 1.0
    r = -math.log1p((b - a) / a)  # ln(a/b)
    return q * math.log(b) + math.log(-math.expm1(q * r) / q) - math.log(b - a)


def p_logarithmic(a: float, b: float, p: float) -> float:
    a, b = _canonical(a, b)
    if a == b:
        return a
    if abs(p) < LIMIT_WINDOW:
        return identric(a, b)
    if abs(p + 1.0) < LIMIT_WINDOW:
        return logarithmic(a, b)
    return math.exp(_log_lp_power(a, b, p) / p)


def lp_power(a: float, b: float, p: float) -> float:
    """``L_p(a, b) ** p`` evaluated without the outer root."""
    a, b = _canonical(a, b)
    if a == b:
        return a**p
    if abs(p + 1.0) < LIMIT_WINDOW:
        return logarithmic(a, b) ** p
    if abs(p) < LIMIT_WINDOW:
        return 1.0
    return math.exp(_log_lp_power(a, b, p))


@dataclass(frozen=True)
class MeanSet:
    a: float
    b: float
    A: float
    G: float
    H: float
    L: float
    I: float

    def Lp(self, p: float) -> float:
        return p_logarithmic(self.a, self.b, p)


def means_compute(a: float, b: float) -> MeanSet:
    a, b = _canonical(a, b)
    if a == b:
        return MeanSet(a, b, a, a, a, a, a)
    return MeanSet(
        a=a, b=b,
        A=arithmetic(a, b),
        G=geometric(a, b),
        H=harmonic(a, b),
        L=logarithmic(a, b),
        I=identric(a, b),
    )


def chain_check(a: float, b: float) -> BoundAudit:
    """H <= G <= L <= I <= A as a single audit.

    ``lhs`` is the largest relative step-down along the chain, ``rhs`` is 0.
    """
    ms = means_compute(a, b)
    chain = [ms.H, ms.G, ms.L, ms.I, ms.A]
    worst = max((lo - hi) / hi for lo, hi in zip(chain[:-1], chain[1:]))
    return make_audit("CHAIN", worst, 0.0, tol=CHAIN_RTOL, a=ms.a, b=ms.b, integrand="means")


def _inv_h(u: float, v: float) -> float:
    """1 / H(u, v)."""
    return 0.5 * (1.0 / u + 1.0 / v)


def claim_means(claim: str, a: float, b: float, p: float | None = None, variant: str = "literal") -> BoundAudit:
    """Evaluate one of the printed means inequalities M1-M5.

    M3 and M4 have a ``corrected`` variant equal to what the underlying
    quadrature inequality gives for ``x**p`` and ``-ln x``; the other claims
    ignore ``variant``.
    """
    if claim not in MEANS_CLAIMS:
        raise UnknownNameError(f"unknown means claim {claim!r}; choose from {MEANS_CLAIMS}")
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    a, b = _canonical(a, b)
    ms = means_compute(a, b)
    A, G, H, L = ms.A, ms.G, ms.H, ms.L
    w = b - a
    label = "means"
    if claim in ("M1", "M3"):
        if p is None or not p > 1.0:
            raise DomainError(f"{claim} needs p > 1, got {p}")
        p = float(p)
        label = f"x^{p:g}"
    if claim not in ("M3", "M4"):
        variant = "literal"

    if claim == "M1":
        lhs = abs(lp_power(a, b, p) - A**p)
        rhs = p * w**2 / 12 * (arithmetic(a ** (p - 1), b ** (p - 1)) - A ** (p - 1))
    elif claim == "M2":
        label = "-1/x"
        lhs = abs(1.0 / A - 1.0 / L)
        rhs = w**2 / 12 * (_inv_h(a * a, b * b) - A**-2)
    elif claim == "M3":
        rhs = p * w**2 / 24 * (arithmetic(a ** (p - 1), b ** (p - 1)) - A ** (p - 1))
        if variant == "literal":
            lhs = abs(lp_power(a, b, p) - A**p + p * (p - 1) * w**2 / 8 * ms.Lp(p) ** (p - 2))
        else:
            lhs = abs(math.fsum([
                lp_power(a, b, p),
                -arithmetic(a**p, b**p),
                w / 8 * p * (b ** (p - 1) - a ** (p - 1)),
            ]))
    elif claim == "M4":
        label = "-ln x"
        rhs = w**3 / 96 * (_inv_h(a * a, b * b) + 0.5 * A**-2)
        ln_g = 0.5 * (math.log(a) + math.log(b))
        ln_i = log_identric(a, b)
        corr = w**2 / 8 / (G * G)
        if variant == "literal":
            lhs = abs(ln_i + ln_g + corr)
        else:
            lhs = abs(ln_g - ln_i + corr)
    else:
        label = "1/x"
        lhs = abs(1.0 / L - 1.0 / H)
        rhs = w**3 / 48 * (_inv_h(a**3, b**3) + 0.5 * A**-3)

    return make_audit(claim, lhs, rhs, a=a, b=b, integrand=label, variant=variant)
