import json

import pytest

from hypstieltjes.verify import SCHEMA_VERSION, SUITES, _entry, verify_suite


def test_empty_selection():
    rep = verify_suite([])
    assert rep.entries == [] and rep.all_passed


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify_suite(["bogus"])


def test_schur_seed_one():
    rep = verify_suite(["schur"], seed=1)
    assert rep.all_passed and rep.entries
    assert {e["theorem"] for e in rep.entries} == {"schur-lemma", "newton-inequality"}


def test_deterministic_across_threads():
    a = verify_suite(["schur", "nonneg"], seed=7, threads=1).to_json()
    b = verify_suite(["schur", "nonneg"], seed=7, threads=2).to_json()
    assert a == b


def test_report_schema():
    d = json.loads(verify_suite(["vanish"], seed=0).to_json())
    assert d["schema_version"] == SCHEMA_VERSION
    assert set(d) >= {"seed", "selection", "config", "tolerances", "summary", "entries"}
    for e in d["entries"]:
        assert e["status"] in ("pass", "fail", "advisory")


def test_crashing_suite_becomes_failed_entry(monkeypatch):
    def boom(seed, cfg):
        raise RuntimeError("x")

    monkeypatch.setitem(SUITES, "schur", boom)
    rep = verify_suite(["schur"])
    assert not rep.all_passed and rep.entries[0]["theorem"] == "suite:schur"


def test_advisory_does_not_fail():
    e = _entry("t", "c", False, 1.0, 0.5, advisory=True)
    assert e["status"] == "advisory"
