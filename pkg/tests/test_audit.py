import csv
import io
import json

import pytest

from peanoquad.audit import (
    COLUMNS,
    FAMILIES,
    audit_run,
    generate_samples,
    report_to_csv,
    report_to_json,
    report_to_text,
)
from peanoquad.errors import DomainError, UnknownNameError
from peanoquad.kernel import Interval


def test_h1_cubic_single():
    rep = audit_run(["H1"], "cubic", 1, 0, interval=Interval(1, 2))
    (au,) = rep.audits
    assert not au.satisfied
    assert au.slack == pytest.approx(-0.3125, abs=1e-13)
    assert rep.summary["H1"].violated == 1


def test_hh_positive_control():
    rep = audit_run(["HH"], "builtin-convex", 100, 7)
    assert rep.summary["HH"].satisfied == 100


def test_t1_linear():
    rep = audit_run(["T1"], "linear", 5, 0)
    assert len(rep.audits) == 5
    assert all(a.satisfied and a.lhs <= 1e-12 for a in rep.audits)


def test_norm_and_variant_expansion():
    rep = audit_run(["T1", "T2", "M3", "H1"], "cubic", 2, 1, norms=["sup", "l1"], variants=["literal", "corrected"])
    counts = {k: v.evaluated for k, v in rep.summary.items()}
    assert counts == {"T1": 8, "T2": 8, "M3": 4, "H1": 2}


def test_unknown_names():
    with pytest.raises(UnknownNameError):
        audit_run(["Z9"], "cubic", 1, 0)
    with pytest.raises(UnknownNameError):
        audit_run(["H1"], "sinusoids", 1, 0)
    with pytest.raises(DomainError):
        audit_run(["H1"], "cubic", 0, 0)


def test_samples_deterministic_and_valid():
    s1 = generate_samples("builtin", 30, 4)
    s2 = generate_samples("builtin", 30, 4)
    for u, v in zip(s1, s2):
        assert (u.interval, u.params, u.p, u.integrand.label) == (v.interval, v.params, v.p, v.integrand.label)
        u.params.check(u.interval)


def test_every_family_generates():
    for name in FAMILIES:
        assert len(generate_samples(name, 3, 0)) == 3


def test_summary_consistent():
    rep = audit_run(["T1", "H1", "P7", "HH", "M5", "CHAIN"], "builtin", 24, 2)
    for cid, s in rep.summary.items():
        rows = [a for a in rep.audits if a.claim_id == cid]
        assert s.evaluated == len(rows)
        assert s.satisfied == sum(a.satisfied for a in rows)
        assert s.violated == s.evaluated - s.satisfied


def test_serialisation_formats():
    rep = audit_run(["H1", "T1"], "cubic", 2, 5)
    doc = json.loads(report_to_json(rep))
    assert list(doc["audits"][0]) == list(COLUMNS)
    assert doc["audits"][0]["seed"] == 5
    rows = list(csv.reader(io.StringIO(report_to_csv(rep))))
    assert tuple(rows[0]) == COLUMNS and len(rows) == 5
    assert "H1" in report_to_text(rep)


def test_json_numbers_round_trip():
    rep = audit_run(["P11"], "exp", 3, 8)
    doc = json.loads(report_to_json(rep))
    for row, au in zip(doc["audits"], rep.audits):
        assert row["lhs"] == au.lhs and row["rhs"] == au.rhs and row["alpha"] is None
