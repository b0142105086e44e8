"""Acceptance self-test."""

import json

import pytest

from diophantine_exponents.cli import EXIT_FAILED, EXIT_OK, run
from diophantine_exponents import selftest
from diophantine_exponents.exponents import repthy
from diophantine_exponents.schemas import validate_payload
from diophantine_exponents.selftest import CRITERIA, QUICK, SelftestContext, dirichlet_floor_check, run_selftest


def test_fourteen_numbered_criteria():
    assert [number for number, _, _ in CRITERIA] == list(range(1, 15))
    assert len({name for _, name, _ in CRITERIA}) == 14


def test_exact_criteria_pass():
    passed, report = run_selftest(seed=11, quick=True, only=[1, 2, 4, 6, 7])
    assert passed, report.results
    assert [c["number"] for c in report.results["criteria"]] == [1, 2, 4, 6, 7]
    assert report.flags == []
    validate_payload(report.to_json(), "report")


def test_broken_weyl_formula_is_caught(monkeypatch):
    real = repthy.weyl_dim
    monkeypatch.setattr(repthy, "weyl_dim", lambda lam, k: real(lam, k) + (1 if k == 5 else 0))
    passed, report = run_selftest(seed=1, quick=True, only=[1, 2])
    assert not passed
    by_number = {c["number"]: c for c in report.results["criteria"]}
    assert by_number[1]["passed"]
    assert not by_number[2]["passed"]
    assert by_number[2]["details"]["mismatches"]
    assert report.flags == ["failed: weyl-vs-hook"]


def test_exceptions_are_recorded_not_raised(monkeypatch):
    def boom(k):
        raise RuntimeError("broken oracle")

    monkeypatch.setattr(repthy, "heisenberg_beta", boom)
    passed, report = run_selftest(seed=1, quick=True, only=[4])
    assert not passed
    details = report.results["criteria"][0]["details"]
    assert details["error"] == {"type": "RuntimeError", "message": "broken oracle"}


def test_dirichlet_floor_without_fits_is_skipped():
    ok, details = dirichlet_floor_check(SelftestContext(seed=1, scale=QUICK))
    assert ok
    assert "skipped" in details


def test_determinism_compares_replays(monkeypatch):
    stubs = (
        (1, "seed-free", lambda ctx: (True, {"value": 1})),
        (2, "seed-leaking", lambda ctx: (True, {"value": ctx.seed})),
        (9, "band", lambda ctx: (ctx.seed % 2 == 0, {})),
    )
    monkeypatch.setattr(selftest, "CRITERIA", stubs)
    ok, details = selftest.determinism(SelftestContext(seed=1, scale=QUICK))
    assert not ok
    assert details["seeds"] == [1 + selftest.SEED_STRIDE, 1 + 2 * selftest.SEED_STRIDE]
    assert details["exact_differing"] == [2]
    # 1 + 2 * stride is odd
    assert details["failed"] == [9]
    assert details["empirical"] == [{"9": True}, {"9": False}]
    assert details["parallel_identical"]

def test_selftest_subcommand(capsys):
    assert run(["selftest", "--quick", "--only", "1,3"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["results"]["passed"] is True
    assert report["certificates"]["scale"]["remez_n_mc"] == QUICK.remez_n_mc


def test_selftest_subcommand_reports_failure(capsys, monkeypatch):
    monkeypatch.setattr(repthy, "necklace_count", lambda k, n: 0)
    assert run(["selftest", "--quick", "--only", "1"]) == EXIT_FAILED
    report = json.loads(capsys.readouterr().out)
    assert report["results"]["criteria"][0]["name"] == "witt-oracle"


@pytest.mark.slow
def test_full_quick_selftest():
    passed, report = run_selftest(seed=20240601, quick=True)
    failed = [c["name"] for c in report.results["criteria"] if not c["passed"]]
    assert passed, failed
