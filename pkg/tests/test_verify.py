from __future__ import annotations

import json

import pytest

from kpisano.errors import DomainError
from kpisano.verify import (
    SUITE_IDS,
    Classification,
    SweepConfig,
    Task,
    VerificationReport,
    Violation,
    capped,
    execute_task,
    plan_tasks,
    report_deserialize,
    report_serialize,
    run_suite,
)


def one_violation_report() -> VerificationReport:
    v = Violation(3, 12, False, True, Classification.STATEMENT_DISCREPANCY)
    return VerificationReport("table1", 5, 4, (v,), ("K=3: 6 or 12×13^j",))


def test_smallest_sweep():
    [r] = run_suite(SweepConfig(("oracle-equivalence",), k_range=(5, 5), m_range=(2, 2)))
    assert (r.checked, r.passed, r.violations) == (1, 1, ())


def test_fibonacci_special():
    [r] = run_suite(SweepConfig(("fibonacci-special",), m_range=(2, 3000)))
    assert r.violations == ()
    assert "fixed points: 24 120 600 3000" in r.notes


def test_table1_only_paper_discrepancies():
    [r] = run_suite(SweepConfig(("table1",), k_range=(1, 24), m_range=(2, 1500)))
    assert r.theorem_violations == 0
    assert {(v.k, v.m) for v in r.violations} >= {(3, 12), (6, 10), (16, 20), (14, None)}


def test_suite_ids_and_plans():
    assert len(SUITE_IDS) == len(set(SUITE_IDS)) == 20
    tasks = plan_tasks(SweepConfig(("parity",), k_range=(1, 2), m_range=(3, 2500)), "parity")
    assert [(t.k_lo, t.m_lo, t.m_hi) for t in tasks] == [
        (1, 3, 1002), (1, 1003, 2002), (1, 2003, 2500), (2, 3, 1002), (2, 1003, 2002), (2, 2003, 2500)
    ]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"suites": ()},
        {"suites": ("nope",)},
        {"suites": ("parity",), "k_range": (5, 4)},
        {"suites": ("parity",), "m_range": (1, 4)},
        {"suites": ("parity",), "parallelism": 0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        SweepConfig(**kwargs)


def test_report_invariant():
    with pytest.raises(ValueError):
        VerificationReport("x", 3, 3, (Violation(1, 2, 3, 4, Classification.THEOREM_VIOLATION),))


def test_overflow_becomes_a_violation():
    tally = execute_task(Task("oracle-equivalence", "main", 5_000_000_000, 5_000_000_000, 2, 4, 200))
    assert tally.checked == 3 and tally.passed == 0
    assert all("ArithmeticOverflowError" in v.actual for v in tally.violations)


def test_json_empty_report():
    r = VerificationReport("parity", 2, 2, ())
    d = json.loads(report_serialize(r))
    assert list(d) == ["suite", "checked", "passed", "violations", "violations_omitted", "notes", "wall_time_ms"]
    assert d["violations"] == [] and d["wall_time_ms"] is None


def test_csv_layout():
    lines = report_serialize(one_violation_report(), "csv").decode().splitlines()
    assert lines[0].startswith("record,suite,k,m,expected,actual,classification")
    assert lines[1].startswith("violation,table1,3,12,false,true,paper-statement-discrepancy")
    assert lines[2].startswith("summary,table1")
    assert len(lines) == 3


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_round_trip(fmt):
    r = one_violation_report()
    back = report_deserialize(report_serialize(r, fmt), fmt)
    assert back.violations == r.violations
    assert (back.suite, back.checked, back.passed) == (r.suite, r.checked, r.passed)
    if fmt == "json":
        assert back == r
    assert report_serialize(back, fmt) == report_serialize(r, fmt) or fmt == "csv"


def test_cap_counts_overflow():
    vs = tuple(Violation(1, m, 0, 1, Classification.CONJECTURE_COUNTEREXAMPLE) for m in range(10))
    r = VerificationReport("b-minus1", 12, 2, vs)
    d = json.loads(report_serialize(r, cap=3))
    assert len(d["violations"]) == 3 and d["violations_omitted"] == 7
    back = report_deserialize(report_serialize(r, cap=3))
    assert back == capped(r, 3)


def test_timing_is_opt_in():
    r = VerificationReport("parity", 1, 1, (), wall_time=0.25)
    assert json.loads(report_serialize(r))["wall_time_ms"] is None
    assert json.loads(report_serialize(r, timing=True))["wall_time_ms"] == 250


def test_parallel_matches_serial():
    suites = ("oracle-equivalence", "table1", "b-minus1", "final-table")
    kw = dict(k_range=(3, 6), m_range=(2, 1200))
    a = [report_serialize(r) for r in run_suite(SweepConfig(suites, parallelism=1, **kw))]
    b = [report_serialize(r) for r in run_suite(SweepConfig(suites, parallelism=3, **kw))]
    assert a == b
