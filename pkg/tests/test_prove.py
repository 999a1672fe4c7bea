import shutil

import pytest

from powersum.newforms import level_path
from powersum.prove import (
    FULLY_VERIFIED,
    GAPS_LISTED,
    ProofReport,
    ProveConfig,
    check_known_solutions,
    known_solution_checks,
    prove_k,
    write_report,
)

SMALL = ProveConfig(n_hi=60, thue_bound=12)


@pytest.fixture(scope="module")
def report10():
    return prove_k(10, SMALL)


@pytest.mark.parametrize("k", [8, 4, 102, 7])
def test_bad_k(k):
    with pytest.raises(ValueError):
        prove_k(k, SMALL)


def test_k10_verdict_and_gap_note(report10):
    assert report10.verdict == FULLY_VERIFIED and not report10.blocking
    assert report10.sieve["status"] == "run" and report10.sieve["n_range"] == [11, 60]
    assert report10.sieve["verified"] == report10.sieve["certificates"] > 0
    assert "sieve covered prefix [11, 60] of [11, 173419]" in report10.gaps
    assert any("bounded search" in g for g in report10.gaps)


def test_k34_needs_no_sieve():
    report = prove_k(34, SMALL)
    assert all(row["open_forms"] == 0 for row in report.modular)
    assert report.sieve["status"] == "skipped"
    assert report.verdict == FULLY_VERIFIED


def test_k6_has_no_pairs():
    report = prove_k(6, SMALL)
    assert report.decomposition["table1_pairs"] == [] and report.sieve["status"] == "skipped"
    assert report.bounds["reason"]


def test_missing_level_is_blocking(tmp_path):
    shutil.copy(level_path(640), tmp_path / "newforms_640.json")
    report = prove_k(26, ProveConfig(n_hi=30, thue_bound=5, data_dir=str(tmp_path)))
    assert report.verdict == GAPS_LISTED
    assert any("missing newform data" in b for b in report.blocking)


def test_json_round_trip(report10, tmp_path):
    again = ProofReport.from_json(report10.to_json())
    assert again == report10 and again.verdict == report10.verdict
    path = tmp_path / "report.json"
    write_report(report10, path)
    assert ProofReport.from_json(path.read_text()) == report10


def test_verdict_must_match_blocking(report10):
    data = report10.to_dict()
    data["verdict"] = GAPS_LISTED
    with pytest.raises(ValueError):
        ProofReport.from_dict(data)


def test_runs_are_reproducible(report10):
    assert prove_k(10, SMALL).to_json(timing=False) == report10.to_json(timing=False)


def test_summary_lists_verdict(report10):
    text = report10.summary()
    assert text.startswith(f"k = 10: {FULLY_VERIFIED}") and "n0 = 173419" in text


def test_known_solutions():
    assert check_known_solutions()
    assert all(ok for _, ok in known_solution_checks())
    assert 239**2 + 1 == 2 * 13**4 and 119**2 + 120**2 == 13**4
