"""Exit criteria. Each test appends one PASS/FAIL line to the terminal summary."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from peanoquad import bounds, integrands, means
from peanoquad.audit import FAMILIES, audit_run, draw_sample
from peanoquad.identity import corollary1_lhs, corollary2_lhs, identity_check, identity_lhs
from peanoquad.kernel import Interval, RuleParams, kernel_eval, kernel_norms, params_symmetric
from peanoquad.oracle import integrate_reference
from peanoquad.quadrature import certify, corrected_rule, integrate_adaptive, integrate_composite

from conftest import ACCEPTANCE_LINES


def report(number, title, ok, detail=""):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] AC{number} {title}" + (f" ({detail})" if detail else ""))
    assert ok, detail


def identity_suite(seed=2024, draws=20):
    rng = np.random.default_rng(seed)
    return [draw_sample(rng, m) for m in FAMILIES["identity-suite"] for _ in range(draws)]


def test_ac1_identity_suite():
    start = time.perf_counter()
    checks = [identity_check(s.integrand, s.interval, s.params) for s in identity_suite()]
    elapsed = time.perf_counter() - start
    bad = [c for c in checks if not c.residual <= 1e-8 * (1 + abs(c.lhs))]
    worst = max(c.residual / (1 + abs(c.lhs)) for c in checks)
    report(1, "identity residual <= 1e-8(1+|LHS|), <= 10 s", not bad and len(checks) == 160 and elapsed <= 10,
           f"{len(checks)} cases, worst scaled residual {worst:.2e}, {elapsed:.2f} s")


def test_ac2_specialisations():
    worst = 0.0
    for s in identity_suite():
        fn, iv = s.integrand, s.interval
        g1 = identity_lhs(fn, iv, RuleParams.corollary1(iv, s.params.x))
        c1 = corollary1_lhs(fn, iv, s.params.x)
        g2 = identity_lhs(fn, iv, RuleParams.corollary2(iv))
        c2 = corollary2_lhs(fn, iv)
        for u, v in ((g1, c1), (g2, c2)):
            worst = max(worst, abs(u - v) / max(abs(u), abs(v)))
    report(2, "corollary forms agree with general LHS to 1e-12 rel", worst <= 1e-12, f"worst rel {worst:.2e}")


def _kernel_vec(iv, params, t):
    """Independent vectorised restatement of the three branches."""
    r = iv.a + iv.b - params.x
    centre = np.where(t < params.x, params.alpha, np.where(t <= r, 0.5 * (params.alpha + params.beta), params.beta))
    return (t - centre) ** 2


def _sampled_sup(iv, params):
    """Dense grid plus two rounds of local refinement around the best sampled local maxima."""
    grid = np.linspace(iv.a, iv.b, 10_001)
    best = 0.0
    for _ in range(3):
        vals = _kernel_vec(iv, params, grid)
        best = max(best, float(vals.max()))
        left = np.concatenate(([-np.inf], vals[:-1]))
        right = np.concatenate((vals[1:], [-np.inf]))
        peaks = np.flatnonzero((vals >= left) & (vals >= right))
        peaks = peaks[np.argsort(-vals[peaks], kind="stable")][:8]
        grid = np.concatenate([
            np.linspace(grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)], 1_001) for i in peaks
        ])
    return best


def test_ac3_kernel_norms_and_evenness():
    rng = np.random.default_rng(77)
    failures = []
    for i in range(200):
        a = rng.uniform(-3, 3)
        iv = Interval(a, a + rng.uniform(0.1, 4))
        x = rng.uniform(iv.a, iv.mid)
        if i % 2:
            alpha = rng.uniform(iv.a, iv.mid)
            params = RuleParams(x, alpha, min(iv.a + iv.b - alpha, iv.b))
        else:
            params = RuleParams(x, *sorted(rng.uniform(iv.a, iv.b, 2)))
        k = lambda t: kernel_eval(iv, params, t)
        n = kernel_norms(iv, params)

        if params_symmetric(iv, params):
            scale = 1e-12 * (1 + abs(iv.a) + abs(iv.b)) ** 2
            for t in rng.uniform(iv.a, iv.b, 50):
                t = float(t)
                if min(abs(t - params.x), abs(t - iv.reflect(params.x))) < 1e-9:
                    continue
                if abs(k(t) - k(min(max(iv.reflect(t), iv.a), iv.b))) > scale:
                    failures.append(("evenness", i))
                    break
        ref = integrate_reference(k, iv, 1e-12, breakpoints=[params.x, iv.reflect(params.x)]).value
        if not abs(n.l1 - ref) <= 1e-9 * abs(ref):
            failures.append(("l1", i))
        if not abs(n.sup - _sampled_sup(iv, params)) <= 1e-6:
            failures.append(("sup", i))
        p1 = kernel_norms(iv, RuleParams.corollary1(iv, x)).l1
        if not math.isclose(p1, 2 / 3 * ((x - iv.a) ** 3 + (iv.mid - x) ** 3), rel_tol=1e-12):
            failures.append(("prop1", i))
        p2 = kernel_norms(iv, RuleParams.corollary2(iv, x)).half_range
        if not math.isclose(p2, iv.width**3 / 24, rel_tol=1e-12):
            failures.append(("prop2", i))
    report(3, "kernel evenness, l1/sup vs oracles, closed-form constants", not failures, f"failures {failures[:5]}")


def test_ac4_constant_f2_tightness(square, unit):
    p = RuleParams(0.25, 0.0, 1.0)
    q = corrected_rule(square, unit, p)
    err = abs(1 / 3 - q)
    l1 = kernel_norms(unit, p).l1
    ok = abs(q - 0.3125) <= 1e-12 and abs(err - 1 / 48) <= 1e-12 and abs(l1 - 1 / 48) <= 1e-12
    report(4, "Q = 0.3125 and |int f - Q| = l1 = 1/48", ok, f"Q={q!r} err={err!r} l1={l1!r}")


def _soundness_case(rng, i):
    a = rng.uniform(0.2, 4)
    iv = Interval(a, a + rng.uniform(0.05, 3))
    name = ("exp", "recip", "negrecip", "neglog", "power", "quartic", "poly")[i % 7]
    kw = {}
    if name == "power":
        kw["p"] = rng.uniform(-2, 5)
    elif name == "quartic":
        kw["c"] = rng.uniform(iv.a - 1, iv.b + 1)
    elif name == "poly":
        kw["coeffs"] = rng.uniform(-2, 2, 4)
    fn = integrands.builtin(name, iv, **kw)
    params = RuleParams(rng.uniform(iv.a, iv.mid), *sorted(rng.uniform(iv.a, iv.b, 2)))
    kind, value = "sup_f2", None
    if i % 2:
        d2a, d2b = fn.d2f(iv.a), fn.d2f(iv.b)
        if name != "poly" and d2a * d2b > 0:
            # f'' has constant sign on every non-poly builtin here, so int|f''| = |f'(b) - f'(a)|
            kind, value = "l1_f2", abs(fn.df(iv.b) - fn.df(iv.a))
    return fn, iv, params, kind, value


def test_ac5_certificate_soundness():
    rng = np.random.default_rng(5)
    violations = []
    kinds = {"sup_f2": 0, "l1_f2": 0}
    for i in range(1000):
        fn, iv, params, kind, value = _soundness_case(rng, i)
        cert = certify(fn, iv, params, kind, value)
        kinds[kind] += 1
        q = corrected_rule(fn, iv, params)
        ref = integrate_reference(fn.f, iv, 1e-13)
        true_err = abs(ref.value - q)
        # allowance covers only the oracle's own uncertainty and final roundoff
        allowance = ref.error_estimate + 8 * np.finfo(float).eps * (abs(ref.value) + abs(q))
        if true_err > cert.bound + allowance:
            violations.append((i, fn.label, true_err, cert.bound))
    report(5, "1000 certificates bound the true error", not violations,
           f"{kinds}, violations {violations[:3]}")


def test_ac6_adaptive():
    t0 = time.perf_counter()
    r1 = integrate_adaptive(integrands.exp(Interval(0, 1)), Interval(0, 1), 1e-6)
    t1 = time.perf_counter()
    r2 = integrate_adaptive(integrands.recip(Interval(1, 2)), Interval(1, 2), 1e-8, kind="l1_f2")
    t2 = time.perf_counter()
    e1, e2 = abs(r1.estimate - 1.7182818), abs(r2.estimate - 0.69314718)
    ok = e1 <= 1e-6 and e2 <= 1e-8 and t1 - t0 < 1 and t2 - t1 < 1
    report(6, "adaptive e^t to 1e-6 and 1/t to 1e-8, each < 1 s", ok,
           f"errors {e1:.2e}, {e2:.2e}; times {t1 - t0:.3f} s, {t2 - t1:.3f} s")


def test_ac7_known_refutations():
    i12, i01 = Interval(1, 2), Interval(0, 1)
    t3 = integrands.power(i12, 3.0)
    t2 = integrands.poly(i01, [0, 0, 1])
    cases = [
        ("H1 t^3", bounds.claim_midpoint_h1(t3, i12), (0.375, 0.0625)),
        ("H1 t^2", bounds.claim_midpoint_h1(t2, i01), (1 / 12, 0.0)),
        ("P7 t^3", bounds.claim_prop2(t3, i12), (0.375, 0.03125)),
        ("P11 t^3", bounds.claim_prop3(t3, i12), (0.375, 0.140625)),
        ("M1", means.claim_means("M1", 1, 2, 3), (0.375, 0.0625)),
        ("M5", means.claim_means("M5", 1, 2), (0.75 - math.log(2), (9 / 16 + 4 / 27) / 48)),
    ]
    bad = [
        name for name, au, (lhs, rhs) in cases
        if not (abs(au.lhs - lhs) <= 1e-9 and abs(au.rhs - rhs) <= 1e-9 and not au.satisfied)
    ]
    report(7, "known refutations reproduce to 1e-9 and are flagged violated", not bad, f"mismatch {bad}")


def test_ac8_positive_controls():
    hh = audit_run(["HH"], "convex-all", 100, 7).summary["HH"]
    rng = np.random.default_rng(8)
    pairs = [tuple(10.0 - rng.uniform(0, 10, 2)) for _ in range(100)]  # in (0, 10]
    chain_ok = all(means.chain_check(a, b).satisfied for a, b in pairs)
    grid = [-3, -2, -1.5, -1, -0.5, 0, 0.5, 1, 2, 3]
    mono_ok = True
    limit_ok = True
    for a, b in pairs:
        vals = [means.p_logarithmic(a, b, p) for p in grid]
        mono_ok &= all(u <= v * (1 + 1e-12) for u, v in zip(vals, vals[1:]))
        L, I = means.logarithmic(a, b), means.identric(a, b)
        for off in (1e-7, -1e-7):
            limit_ok &= abs(means.p_logarithmic(a, b, -1 + off) - L) <= 1e-5 * L
            limit_ok &= abs(means.p_logarithmic(a, b, off) - I) <= 1e-5 * I
    ok = hh.satisfied == 100 and chain_ok and mono_ok and limit_ok
    report(8, "HH 100/100, means chain, Lp monotone, Lp limits", ok,
           f"HH {hh.satisfied}/100 chain={chain_ok} monotone={mono_ok} limits={limit_ok}")


def test_ac9_composite_order():
    iv = Interval(0, 1)
    fn = integrands.exp(iv)
    ns = [2, 4, 8, 16, 32]
    errs = [integrate_composite(fn, iv, n).certified_error for n in ns]
    slope = np.polyfit(np.log([1 / n for n in ns]), np.log(errs), 1)[0]
    report(9, "composite certified-error order >= 1.9", slope >= 1.9, f"slope {slope:.4f}")


def test_ac10_cli_determinism():
    cmd = [sys.executable, "-m", "peanoquad", "audit", "--claims", "T1,T2,P6,H1,P7,H2,P11,R12,HH,M1,M2,M3,M4,M5,CHAIN",
           "--family", "builtin", "-n", "40", "--seed", "11", "--norm", "sup", "--norm", "half_range",
           "--variant", "literal", "--variant", "corrected"]
    outs = []
    for fmt in ("json", "csv"):
        runs = [subprocess.run(cmd + ["--format", fmt], capture_output=True, check=True).stdout for _ in range(2)]
        outs.append(runs[0] == runs[1] and len(runs[0]) > 0)
    report(10, "repeated audit runs are byte-identical", all(outs), f"json={outs[0]} csv={outs[1]}")
