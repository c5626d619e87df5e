"""Command-line front end.

Exit codes: 0 success, 1 usage or domain error, 2 certified integration did
not converge (partial result still written), 3 identity residual too large.
Violated published claims are findings and never change the exit code.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import audit as audit_mod
from .audit import CLAIM_IDS, audit_run, family_members, draw_sample, rows_to_csv
from .bounds import NORM_CHOICES, VARIANTS
from .errors import NonConvergenceError, PeanoQuadError
from .identity import identity_check
from .integrands import parse_integrand
from .kernel import Interval
from .means import MEANS_CLAIMS, chain_check, claim_means, means_compute
from .quadrature import DEFAULT_MAX_PANELS, POLICIES, CertKind, integrate_adaptive

REPORT_DIR_ENV = "PEANOQUAD_REPORT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED, EXIT_DEFECT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="peanoquad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_format="json"):
        p.add_argument("--format", choices=("json", "csv", "text"), default=default_format)
        p.add_argument("--output", "-o", help="output path ('-' for stdout)")

    p = sub.add_parser("integrate", help="certified adaptive integration")
    p.add_argument("--fn", required=True, help="exp, recip, negrecip, neglog, power:P, poly:c0,c1,..., quartic[:C]")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--kind", choices=[k.value for k in CertKind], default=CertKind.SUP_F2.value)
    p.add_argument("--policy", choices=sorted(POLICIES), default="default")
    p.add_argument("--m2", type=float, help="global bound on |f''| (sup_f2 only)")
    p.add_argument("--max-panels", type=int, default=DEFAULT_MAX_PANELS)
    p.add_argument("--panels", action="store_true", help="include per-panel records")
    common(p)

    p = sub.add_parser("audit", help="evaluate published claims on seeded samples")
    p.add_argument("--claims", type=_csv_list, required=True, help=f"comma list from {','.join(CLAIM_IDS)}")
    p.add_argument("--family", default="builtin", help=f"one of {','.join(sorted(audit_mod.FAMILIES))}")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("-n", "--n-samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--norm", action="append", choices=NORM_CHOICES, help="norm for T1/T2 (repeatable)")
    p.add_argument("--variant", action="append", choices=VARIANTS, help="T1/T2/M3/M4 variant (repeatable)")
    common(p)

    p = sub.add_parser("means", help="special means table, chain check and means claims")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--p", type=float, default=3.0, help="exponent for M1/M3")
    p.add_argument("--claims", type=_csv_list, default=list(MEANS_CLAIMS))
    common(p, "text")

    p = sub.add_parser("identity-check", help="numerically verify the kernel identity")
    p.add_argument("--family", default="identity-suite")
    p.add_argument("-n", "--n-samples", type=int, default=20, help="parameter draws per family member")
    p.add_argument("--seed", type=int, default=0)
    common(p, "text")
    return parser


def _emit(text: str, args) -> None:
    target = args.output
    if target is None and os.environ.get(REPORT_DIR_ENV):
        ext = {"json": "json", "csv": "csv", "text": "txt"}[args.format]
        target = str(Path(os.environ[REPORT_DIR_ENV]) / f"{args.command}.{ext}")
    if target is None or target == "-":
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. `| head`); silence the flush at exit too
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    else:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(text)


def _format_record(record: dict, columns, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    if fmt == "csv":
        return rows_to_csv([record], columns)
    return "".join(f"{k}: {record[k]}\n" for k in columns)


def cmd_integrate(args) -> int:
    iv = Interval(args.a, args.b)
    fn = parse_integrand(args.fn, iv)
    converged = True
    try:
        res = integrate_adaptive(
            fn, iv, args.tol, policy=args.policy, kind=args.kind, max_panels=args.max_panels, m2=args.m2
        )
    except NonConvergenceError as exc:
        converged = False
        res = exc.result
        print(f"peanoquad: warning: {exc}", file=sys.stderr)
    record = {
        "integrand": fn.label,
        "a": iv.a,
        "b": iv.b,
        "kind": CertKind(args.kind).value,
        "policy": args.policy,
        "tol": args.tol,
        "estimate": res.estimate,
        "certified_error": res.certified_error,
        "panels": res.panels,
        "converged": converged,
    }
    columns = list(record)
    if args.panels and args.format == "json":
        record["panel_records"] = [[r.a, r.b, r.estimate, r.bound] for r in res.panel_records]
    _emit(_format_record(record, columns, args.format), args)
    return EXIT_OK if converged else EXIT_NONCONVERGED


def cmd_audit(args) -> int:
    interval = None
    if args.a is not None or args.b is not None:
        if args.a is None or args.b is None:
            raise PeanoQuadError("--a and --b must be given together")
        interval = Interval(args.a, args.b)
    report = audit_run(
        args.claims,
        args.family,
        args.n_samples,
        args.seed,
        interval=interval,
        norms=args.norm or ("sup",),
        variants=args.variant or ("literal",),
    )
    render = {"json": audit_mod.report_to_json, "csv": audit_mod.report_to_csv, "text": audit_mod.report_to_text}
    _emit(render[args.format](report), args)
    return EXIT_OK


def cmd_means(args) -> int:
    ms = means_compute(args.a, args.b)
    chain = chain_check(args.a, args.b)
    audits = []
    for claim in args.claims:
        variants = VARIANTS if claim in ("M3", "M4") else ("literal",)
        p = args.p if claim in ("M1", "M3") else None
        audits.extend(claim_means(claim, args.a, args.b, p, v) for v in variants)
    table = {"a": ms.a, "b": ms.b, "H": ms.H, "G": ms.G, "L": ms.L, "I": ms.I, "A": ms.A}
    rows = [audit_mod.audit_row(x) for x in [chain, *audits]]
    if args.format == "json":
        text = json.dumps({"means": table, "p": args.p, "audits": rows}, indent=2) + "\n"
    elif args.format == "csv":
        text = rows_to_csv([table], list(table)) + "\n" + rows_to_csv(rows, audit_mod.COLUMNS[:-1])
    else:
        lines = ["  ".join(f"{k}={v:.12g}" for k, v in table.items())]
        for r in rows:
            verdict = "ok" if r["satisfied"] else "VIOLATED"
            lines.append(f"{r['claim_id']:5s} {r['variant']:9s} lhs={r['lhs']:.9g} rhs={r['rhs']:.9g} {verdict}")
        text = "\n".join(lines) + "\n"
    _emit(text, args)
    return EXIT_OK


IDENTITY_COLUMNS = (
    "integrand", "a", "b", "x", "alpha", "beta", "lhs", "rhs", "residual", "tolerance", "ok", "integral_source",
)


def run_identity_check(family: str, n_samples: int, seed: int) -> list[dict]:
    if n_samples < 1:
        raise PeanoQuadError("n must be >= 1")
    rng = np.random.default_rng(seed)
    rows = []
    for member in family_members(family):
        for _ in range(n_samples):
            s = draw_sample(rng, member)
            chk = identity_check(s.integrand, s.interval, s.params)
            rows.append({
                "integrand": s.integrand.label,
                "a": s.interval.a, "b": s.interval.b,
                "x": s.params.x, "alpha": s.params.alpha, "beta": s.params.beta,
                "lhs": chk.lhs, "rhs": chk.rhs, "residual": chk.residual, "tolerance": chk.tolerance,
                "ok": chk.ok, "integral_source": chk.integral_source,
            })
    return rows


def cmd_identity_check(args) -> int:
    rows = run_identity_check(args.family, args.n_samples, args.seed)
    ok = all(r["ok"] for r in rows)
    if args.format == "json":
        text = json.dumps({"family": args.family, "seed": args.seed, "ok": ok, "rows": rows}, indent=2) + "\n"
    elif args.format == "csv":
        text = rows_to_csv(rows, IDENTITY_COLUMNS)
    else:
        worst = max(rows, key=lambda r: r["residual"] / r["tolerance"])
        text = (
            f"family={args.family} cases={len(rows)} failures={sum(not r['ok'] for r in rows)}\n"
            f"worst: {worst['integrand']} residual={worst['residual']:.3e} tolerance={worst['tolerance']:.3e}\n"
        )
    _emit(text, args)
    return EXIT_OK if ok else EXIT_DEFECT


COMMANDS = {
    "integrate": cmd_integrate,
    "audit": cmd_audit,
    "means": cmd_means,
    "identity-check": cmd_identity_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except PeanoQuadError as exc:
        print(f"peanoquad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
