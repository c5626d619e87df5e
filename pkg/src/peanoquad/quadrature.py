"""Corrected quadrature rules with rigorous error certificates.

Rearranging the kernel identity gives ``int f - Q = (1/2) int k f''`` with
the rule ``Q`` below. Because ``k >= 0``, Hoelder's inequality yields two
certificates:

* ``sup_f2``: ``|int f - Q| <= (1/2) * int k * sup|f''|``
* ``l1_f2``:  ``|int f - Q| <= (1/2) * sup k * int |f''|``
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Union

from .errors import DomainError, MissingInputError, NonConvergenceError
from .identity import _boundary_terms
from .integrands import Flag, Integrand
from .kernel import Interval, RuleParams, kernel_norms

DEFAULT_MAX_PANELS = 2**16


class CertKind(str, Enum):
    SUP_F2 = "sup_f2"
    L1_F2 = "l1_f2"


class InputSource(str, Enum):
    USER_ASSERTED = "user_asserted"
    CONVEXITY_DERIVED = "convexity_derived"
    DECLARED_RANGE = "declared_range"  # the integrand's own |f''| bound


@dataclass(frozen=True)
class Certificate:
    kind: CertKind
    input_value: float
    bound: float
    input_source: InputSource


@dataclass(frozen=True)
class PanelRecord:
    a: float
    b: float
    estimate: float
    bound: float


@dataclass
class QuadratureResult:
    estimate: float
    certified_error: float
    panel_records: list[PanelRecord] = field(default_factory=list)

    @property
    def panels(self) -> int:
        return len(self.panel_records)


def corrected_rule(fn: Integrand, interval: Interval, params: RuleParams) -> float:
    params.check(interval)
    fn.require_within(interval)
    return -0.5 * _boundary_terms(fn, interval, params)


def certify(
    fn: Integrand,
    interval: Interval,
    params: RuleParams,
    kind: CertKind | str = CertKind.SUP_F2,
    value: float | None = None,
) -> Certificate:
    """Rigorous bound on ``|int f - corrected_rule(...)|``.

    ``value`` is the caller's ``sup|f''|`` (``sup_f2``) or ``int|f''|``
    (``l1_f2``) on ``interval``; when omitted it is taken from the
    integrand's declared ``|f''|`` bound or, for ``l1_f2``, from asserted
    convexity (``int|f''| = f'(b) - f'(a)``).
    """
    kind = CertKind(kind)
    norms = kernel_norms(interval, params)
    if value is not None:
        if not value >= 0.0:
            raise DomainError(f"certificate input must be >= 0, got {value}")
        source = InputSource.USER_ASSERTED
    elif kind is CertKind.SUP_F2:
        if fn.d2f_absmax is None:
            raise MissingInputError(f"sup_f2 needs sup|f''| for {fn.label}; none supplied or declared")
        fn.require_within(interval)
        value = fn.d2f_absmax(interval.a, interval.b)
        source = InputSource.DECLARED_RANGE
    else:
        if fn.f_convex is not Flag.ASSERTED:
            raise MissingInputError(f"l1_f2 needs int|f''| or asserted convexity for {fn.label}")
        fn.require_within(interval)
        value = max(fn.df(interval.b) - fn.df(interval.a), 0.0)
        source = InputSource.CONVEXITY_DERIVED
    factor = norms.l1 if kind is CertKind.SUP_F2 else norms.sup
    return Certificate(kind=kind, input_value=value, bound=0.5 * factor * value, input_source=source)


PolicyFn = Callable[[Interval], RuleParams]
Policy = Union[str, PolicyFn]


def _default_policy(panel: Interval) -> RuleParams:
    return RuleParams(panel.mid, panel.a, panel.b)


def _corollary2_policy(panel: Interval) -> RuleParams:
    return RuleParams.corollary2(panel)


POLICIES: dict[str, PolicyFn] = {"default": _default_policy, "corollary2": _corollary2_policy}


def resolve_policy(policy: Policy) -> PolicyFn:
    if callable(policy):
        return policy
    try:
        return POLICIES[policy]
    except KeyError:
        raise DomainError(f"unknown params policy {policy!r}; choose from {sorted(POLICIES)}") from None


def _panel(fn, panel: Interval, policy: PolicyFn, kind, m2) -> PanelRecord:
    params = policy(panel)
    q = corrected_rule(fn, panel, params)
    cert = certify(fn, panel, params, kind, value=m2 if kind is CertKind.SUP_F2 else None)
    return PanelRecord(panel.a, panel.b, q, cert.bound)


def _collect(records: list[PanelRecord]) -> QuadratureResult:
    records = sorted(records, key=lambda r: r.a)
    return QuadratureResult(
        estimate=math.fsum(r.estimate for r in records),
        certified_error=math.fsum(r.bound for r in records),
        panel_records=records,
    )


def integrate_composite(
    fn: Integrand,
    interval: Interval,
    n: int,
    policy: Policy = "default",
    kind: CertKind | str = CertKind.SUP_F2,
    m2: float | None = None,
) -> QuadratureResult:
    """Corrected rule on ``n`` equal panels.

    ``m2`` is an optional global bound on ``|f''|`` used on every panel
    (``sup_f2`` only); otherwise each panel uses the integrand's declared
    bound or, for ``l1_f2``, its convexity.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    kind = CertKind(kind)
    fn.require_within(interval)
    pol = resolve_policy(policy)
    return _collect([_panel(fn, p, pol, kind, m2) for p in interval.split(n)])


def integrate_adaptive(
    fn: Integrand,
    interval: Interval,
    tol: float,
    policy: Policy = "default",
    kind: CertKind | str = CertKind.SUP_F2,
    max_panels: int = DEFAULT_MAX_PANELS,
    m2: float | None = None,
) -> QuadratureResult:
    """Bisect the panel with the largest certified bound until the bounds
    sum to at most ``tol``. Ties go to the leftmost panel."""
    if not tol > 0.0:
        raise DomainError(f"tol must be > 0, got {tol}")
    if max_panels < 1:
        raise DomainError("max_panels must be >= 1")
    kind = CertKind(kind)
    fn.require_within(interval)
    pol = resolve_policy(policy)

    first = _panel(fn, interval, pol, kind, m2)
    heap = [(-first.bound, first.a, first)]
    total = first.bound
    while True:
        if total <= tol:
            # the running sum drifts; confirm with an exact sum before stopping
            total = math.fsum(item[2].bound for item in heap)
            if total <= tol:
                return _collect([item[2] for item in heap])
        if len(heap) >= max_panels:
            partial = _collect([item[2] for item in heap])
            raise NonConvergenceError(
                f"certified error {partial.certified_error:.3e} > tol {tol:.3e} "
                f"after {partial.panels} panels",
                partial,
            )
        _, _, worst = heapq.heappop(heap)
        mid = 0.5 * (worst.a + worst.b)
        if not worst.a < mid < worst.b:
            heapq.heappush(heap, (-worst.bound, worst.a, worst))
            partial = _collect([item[2] for item in heap])
            raise NonConvergenceError("panel width reached floating-point resolution", partial)
        total -= worst.bound
        for lo, hi in ((worst.a, mid), (mid, worst.b)):
            rec = _panel(fn, Interval(lo, hi), pol, kind, m2)
            total += rec.bound
            heapq.heappush(heap, (-rec.bound, rec.a, rec))
