"""Seeded batch audits and report serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import bounds, integrands
from .bounds import BoundAudit, NORM_CHOICES, VARIANTS
from .errors import DomainError, UnknownNameError
from .integrands import Integrand
from .kernel import Interval, RuleParams
from .means import MEANS_CLAIMS, chain_check, claim_means

QUADRATURE_CLAIMS = ("T1", "T2", "P6", "H1", "P7", "H2", "P11", "R12", "HH")
CLAIM_IDS = QUADRATURE_CLAIMS + MEANS_CLAIMS + ("CHAIN",)

COLUMNS = (
    "claim_id", "lhs", "rhs", "slack", "satisfied", "norm_choice", "variant", "integrand",
    "a", "b", "x", "alpha", "beta", "hypothesis_flags", "seed",
)


# --- families ----------------------------------------------------------------

Builder = Callable[[np.random.Generator, Interval], Integrand]


@dataclass(frozen=True)
class Member:
    build: Builder
    interval: Interval | None = None  # fixed interval, else drawn per sample


def _fixed(build, a, b):
    return Member(build, Interval(a, b))


def _linear(rng, iv):
    return integrands.poly(iv, rng.uniform(-2, 2, size=2))


def _quadratic(rng, iv):
    c0, c1 = rng.uniform(-2, 2, size=2)
    return integrands.poly(iv, [c0, c1, rng.uniform(0.1, 2)])


def _power_random(rng, iv):
    return integrands.power(iv, rng.uniform(1.5, 4.0))


def _broken_cubic(rng, iv):
    # deliberately wrong first derivative, for exercising the defect path
    good = integrands.power(iv, 3.0)
    return Integrand(
        f=good.f, df=lambda t: 2.0 * t * t, d2f=good.d2f, domain=iv, label="t^3 (broken df)",
        analytic_integral=good.analytic_integral, d2f_absmax=good.d2f_absmax,
    )


def _named(name, **kw):
    return lambda rng, iv: integrands.builtin(name, iv, **kw)


def _poly_fixed(coeffs, label):
    return lambda rng, iv: integrands.poly(iv, coeffs, label=label)


_CUBIC = _named("power", p=3.0)
_CONVEX = [
    Member(_quadratic), Member(_CUBIC), Member(_named("exp")), Member(_named("recip")),
    Member(_named("neglog")), Member(_power_random), Member(_named("quartic")),
]

FAMILIES: dict[str, list[Member]] = {
    "linear": [Member(_linear)],
    "quadratic": [Member(_quadratic)],
    "cubic": [Member(_CUBIC)],
    "power": [Member(_power_random)],
    "exp": [Member(_named("exp"))],
    "recip": [Member(_named("recip"))],
    "negrecip": [Member(_named("negrecip"))],
    "neglog": [Member(_named("neglog"))],
    "quartic": [Member(_named("quartic"))],
    "convex-all": _CONVEX,
    "builtin": _CONVEX[:4] + [Member(_named("negrecip"))] + _CONVEX[4:],
    "identity-suite": [
        _fixed(_poly_fixed([0, 0, 1], "t^2"), 0, 1),
        _fixed(_poly_fixed([0, 0, 0, 1], "t^3"), 0, 1),
        _fixed(_named("exp"), 0, 1),
        _fixed(_named("power", p=2.0), 1, 2),
        _fixed(_named("power", p=3.0), 1, 2),
        _fixed(_named("power", p=4.0), 1, 2),
        _fixed(_named("recip"), 1, 2),
        _fixed(_named("neglog"), 1, 2),
    ],
    "broken-cubic": [Member(_broken_cubic)],
}
FAMILIES["builtin-convex"] = FAMILIES["convex-all"]


def family_members(name: str) -> list[Member]:
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnknownNameError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None


@dataclass(frozen=True)
class Sample:
    integrand: Integrand
    interval: Interval
    params: RuleParams
    p: float


def random_params(rng: np.random.Generator, iv: Interval) -> RuleParams:
    x = rng.uniform(iv.a, iv.mid)
    lo, hi = sorted(rng.uniform(iv.a, iv.b, size=2))
    return RuleParams(float(x), float(lo), float(hi))


def draw_sample(rng: np.random.Generator, member: Member, interval: Interval | None = None) -> Sample:
    """One (integrand, interval, params, p) tuple; consumes a fixed number of draws."""
    a0, width = rng.uniform(0.2, 4.0), rng.uniform(0.1, 3.0)
    iv = interval or member.interval or Interval(a0, a0 + width)
    fn = member.build(rng, iv)
    params = random_params(rng, iv)
    p = float(rng.uniform(1.5, 4.0))
    return Sample(fn, iv, params, p)


def generate_samples(family: str, n_samples: int, seed: int, interval: Interval | None = None) -> list[Sample]:
    if n_samples < 1:
        raise DomainError(f"n_samples must be >= 1, got {n_samples}")
    members = family_members(family)
    rng = np.random.default_rng(seed)
    return [draw_sample(rng, members[i % len(members)], interval) for i in range(n_samples)]


# --- evaluation ----------------------------------------------------------------


def evaluate_claim(
    claim_id: str, sample: Sample, norms: Sequence[str] = ("sup",), variants: Sequence[str] = ("literal",)
) -> list[BoundAudit]:
    fn, iv, params = sample.integrand, sample.interval, sample.params
    if claim_id == "T1":
        return [bounds.claim_theorem1(fn, iv, params, n, v) for n in norms for v in variants]
    if claim_id == "T2":
        return [bounds.claim_theorem2(fn, iv, params, n, v) for n in norms for v in variants]
    if claim_id == "P6":
        return [bounds.claim_prop1(fn, iv, params.x)]
    single = {
        "H1": bounds.claim_midpoint_h1,
        "P7": bounds.claim_prop2,
        "H2": bounds.claim_trapezoid_h2,
        "P11": bounds.claim_prop3,
        "R12": bounds.claim_remark12,
        "HH": bounds.claim_hermite_hadamard,
    }
    if claim_id in single:
        return [single[claim_id](fn, iv)]
    if claim_id in ("M3", "M4"):
        return [claim_means(claim_id, iv.a, iv.b, sample.p, v) for v in variants]
    if claim_id in MEANS_CLAIMS:
        return [claim_means(claim_id, iv.a, iv.b, sample.p)]
    if claim_id == "CHAIN":
        return [chain_check(iv.a, iv.b)]
    raise UnknownNameError(f"unknown claim id {claim_id!r}; choose from {CLAIM_IDS}")


@dataclass
class ClaimSummary:
    evaluated: int = 0
    satisfied: int = 0
    violated: int = 0
    max_slack: float = 0.0  # largest positive slack
    max_violation: float = 0.0  # largest -slack among violations

    def add(self, audit: BoundAudit) -> None:
        self.evaluated += 1
        if audit.satisfied:
            self.satisfied += 1
        else:
            self.violated += 1
            self.max_violation = max(self.max_violation, -audit.slack)
        self.max_slack = max(self.max_slack, audit.slack)


@dataclass
class AuditReport:
    audits: list[BoundAudit]
    seed: int
    family: str
    summary: dict[str, ClaimSummary] = field(default_factory=dict)

    def __post_init__(self):
        if not self.summary:
            for audit in self.audits:
                self.summary.setdefault(audit.claim_id, ClaimSummary()).add(audit)


def audit_run(
    claim_ids: Sequence[str],
    family: str,
    n_samples: int,
    seed: int,
    interval: Interval | None = None,
    norms: Sequence[str] = ("sup",),
    variants: Sequence[str] = ("literal",),
) -> AuditReport:
    """Evaluate ``claim_ids`` on ``n_samples`` pre-generated seeded samples.

    Rows are ordered by sample, then by claim as given.
    """
    for c in claim_ids:
        if c not in CLAIM_IDS:
            raise UnknownNameError(f"unknown claim id {c!r}; choose from {CLAIM_IDS}")
    for n in norms:
        if n not in NORM_CHOICES:
            raise DomainError(f"unknown norm choice {n!r}")
    for v in variants:
        if v not in VARIANTS:
            raise DomainError(f"unknown variant {v!r}")
    samples = generate_samples(family, n_samples, seed, interval)
    audits = [a for s in samples for c in claim_ids for a in evaluate_claim(c, s, norms, variants)]
    return AuditReport(audits=audits, seed=seed, family=family)


# --- serialisation ---------------------------------------------------------------


def _num(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else repr(v)


def audit_row(audit: BoundAudit, seed: int | None = None) -> dict:
    return {
        "claim_id": audit.claim_id,
        "lhs": _num(audit.lhs),
        "rhs": _num(audit.rhs),
        "slack": _num(audit.slack),
        "satisfied": bool(audit.satisfied),
        "norm_choice": audit.norm_choice,
        "variant": audit.variant,
        "integrand": audit.integrand,
        "a": _num(audit.a),
        "b": _num(audit.b),
        "x": _num(audit.x),
        "alpha": _num(audit.alpha),
        "beta": _num(audit.beta),
        "hypothesis_flags": dict(sorted(audit.hypothesis_flags.items())),
        "seed": seed,
    }


def report_to_json(report: AuditReport) -> str:
    doc = {
        "family": report.family,
        "seed": report.seed,
        "summary": {k: vars(v) for k, v in report.summary.items()},
        "audits": [audit_row(a, report.seed) for a in report.audits],
    }
    return json.dumps(doc, indent=2) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, dict):
        return ";".join(f"{k}={_csv_cell(x) or 'unknown'}" for k, x in v.items())
    return str(v)


def rows_to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in columns])
    return buf.getvalue()


def report_to_csv(report: AuditReport) -> str:
    return rows_to_csv([audit_row(a, report.seed) for a in report.audits], COLUMNS)


def report_to_text(report: AuditReport) -> str:
    lines = [f"family={report.family} seed={report.seed} audits={len(report.audits)}"]
    for cid, s in report.summary.items():
        lines.append(
            f"{cid:6s} evaluated={s.evaluated} satisfied={s.satisfied} violated={s.violated} "
            f"max_slack={s.max_slack:.6g} max_violation={s.max_violation:.6g}"
        )
    return "\n".join(lines) + "\n"
