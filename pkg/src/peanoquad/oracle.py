"""Reference integration and consistency probes.

The integrator is a globally adaptive 7-point Gauss / 15-point Kronrod
scheme. The Kronrod sum is the returned value (exact for polynomials of
degree <= 22); ``|K15 - G7|`` is used as a deliberately pessimistic local
error estimate.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError
from .kernel import Interval

Evaluator = Callable[[float], float]

_EPS = np.finfo(float).eps
PANEL_BUDGET = 100_000

# abscissae on [0, 1], largest first; odd-indexed entries are the Gauss nodes
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class OracleResult:
    value: float
    error_estimate: float
    evaluations: int


def _gk15(g: Evaluator, lo: float, hi: float):
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fc = float(g(centre))
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    resabs = abs(kron)
    for j in range(7):
        dx = half * _XGK[j]
        f1 = float(g(centre - dx))
        f2 = float(g(centre + dx))
        kron += _WGK[j] * (f1 + f2)
        resabs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            gauss += _WG[j // 2] * (f1 + f2)
    value = kron * half
    err = abs((kron - gauss) * half)
    resabs *= abs(half)
    if not math.isfinite(value):
        raise DomainError(f"integrand is not finite on [{lo}, {hi}]")
    # below roundoff the estimate carries no information
    if err <= 50 * _EPS * resabs:
        err = 0.0
    return value, err, resabs


def integrate_reference(
    g: Evaluator,
    interval: Interval,
    rel_tol: float = 1e-12,
    breakpoints: Sequence[float] = (),
    max_panels: int = PANEL_BUDGET,
) -> OracleResult:
    """Integrate ``g`` over ``interval`` to ``rel_tol * (1 + |value|)``.

    ``breakpoints`` seed the initial partition so that known
    discontinuities never sit inside a panel.
    """
    if not rel_tol >= 1e-13:
        raise DomainError(f"rel_tol must be >= 1e-13, got {rel_tol}")
    for p in breakpoints:
        if not interval.a <= p <= interval.b:
            raise DomainError(f"breakpoint {p} outside [{interval.a}, {interval.b}]")
    edges = sorted({interval.a, interval.b, *map(float, breakpoints)})

    heap = []
    frozen = []  # panels too narrow to bisect further
    resabs_total = []
    evaluations = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e, r = _gk15(g, lo, hi)
        evaluations += 15
        heapq.heappush(heap, (-e, lo, hi, v, r))

    while True:
        values = [item[3] for item in heap] + [item[0] for item in frozen]
        errs = [-item[0] for item in heap] + [item[1] for item in frozen]
        total = math.fsum(values)
        err_total = math.fsum(errs)
        if err_total <= rel_tol * (1.0 + abs(total)):
            break
        if not heap or heap[0][0] == 0.0:
            raise ConvergenceError(
                f"reference integration stalled at error {err_total:.3e} "
                f"(tolerance {rel_tol * (1.0 + abs(total)):.3e})"
            )
        if len(heap) + len(frozen) >= max_panels:
            raise ConvergenceError(
                f"reference integration exceeded {max_panels} panels "
                f"(error {err_total:.3e})"
            )
        neg_e, lo, hi, v, r = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            frozen.append((v, -neg_e))
            continue
        for plo, phi in ((lo, mid), (mid, hi)):
            pv, pe, pr = _gk15(g, plo, phi)
            evaluations += 15
            heapq.heappush(heap, (-pe, plo, phi, pv, pr))

    resabs_total = math.fsum(item[4] for item in heap)
    err_report = err_total + 50 * _EPS * resabs_total
    return OracleResult(value=total, error_estimate=err_report, evaluations=evaluations)


# --- derivative and convexity probes -------------------------------------


@dataclass
class DerivativeReport:
    checked: int
    failures: list[tuple[str, float, float, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _probe_points(interval: Interval, n_points: int) -> list[float]:
    pad = 1.01e-4 * (1.0 + max(abs(interval.a), abs(interval.b)))
    lo, hi = interval.a + pad, interval.b - pad
    if not lo < hi:
        lo, hi = interval.a + 0.25 * interval.width, interval.b - 0.25 * interval.width
    return list(np.linspace(lo, hi, n_points))


def check_derivatives(fn, n_points: int = 11) -> DerivativeReport:
    """Compare ``fn.df`` and ``fn.d2f`` with central differences.

    Steps are scale-relative, ``(1+|t|)*1e-6`` for the first derivative and
    ``(1+|t|)*1e-4`` for the second.
    """
    if n_points < 3:
        raise DomainError("check_derivatives needs n_points >= 3")
    report = DerivativeReport(checked=n_points)
    for t in _probe_points(fn.domain, n_points):
        t = float(t)
        ft = fn.f(t)
        h1 = (1.0 + abs(t)) * 1e-6
        fd1 = (fn.f(t + h1) - fn.f(t - h1)) / (2 * h1)
        d1 = fn.df(t)
        scale1 = 1.0 + abs(d1) + abs(ft) / (1.0 + abs(t))
        if not abs(fd1 - d1) <= 1e-7 * scale1:
            report.failures.append(("df", t, fd1, d1))
        h2 = (1.0 + abs(t)) * 1e-4
        fd2 = (fn.f(t + h2) - 2 * ft + fn.f(t - h2)) / (h2 * h2)
        d2 = fn.d2f(t)
        scale2 = 1.0 + abs(d2) + abs(ft) / (1.0 + abs(t)) ** 2
        if not abs(fd2 - d2) <= 1e-5 * scale2:
            report.failures.append(("d2f", t, fd2, d2))
    return report


class Convexity(str, Enum):
    CONSISTENT = "consistent"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


def probe_convexity(
    g: Evaluator, interval: Interval, n_triples: int = 200, seed: int = 0
) -> Convexity:
    """Sampled midpoint-convexity test on seeded random pairs.

    Advisory only: passing does not prove convexity.
    """
    rng = np.random.default_rng(seed)
    pts = rng.uniform(interval.a, interval.b, size=(n_triples, 2))
    for u, v in pts:
        gu, gv, gm = g(float(u)), g(float(v)), g(float(0.5 * (u + v)))
        if not all(math.isfinite(z) for z in (gu, gv, gm)):
            return Convexity.INCONCLUSIVE
        tol = 1e-12 * (1.0 + abs(gu) + abs(gv))
        if gm > 0.5 * (gu + gv) + tol:
            return Convexity.VIOLATED
    return Convexity.CONSISTENT
