"""Acceptance criteria, one test each, checked on the seed-42 verification report."""
import json

import pytest

from hypstieltjes.verify import verify_suite

SEED = 42


@pytest.fixture(scope="module")
def reports():
    first = verify_suite(["all"], seed=SEED)
    second = verify_suite(["all"], seed=SEED)
    return first, second


def entries(report, theorem, contains=""):
    return [e for e in report.entries if e["theorem"] == theorem and contains in e["check"]]


def record(log, n, ok, note):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {note}"
    print(line)
    log.append(line)
    assert ok, line


def all_pass(es):
    return bool(es) and all(e["status"] == "pass" for e in es)


def worst(es):
    return max(abs(e["worst_margin"]) for e in es)


def test_criterion_01_moment_identity(reports, acceptance_log):
    es = entries(reports[0], "moment-identity")
    record(acceptance_log, 1, all_pass(es) and worst(es) <= 1e-6, f"max rel err {worst(es):.2e} <= 1e-6")


def test_criterion_02_closed_form_kernels(reports, acceptance_log):
    cf = entries(reports[0], "g-kernel-definition")
    mc = entries(reports[0], "multidimensional-integral")
    ok = all_pass(cf) and all_pass(mc) and worst(cf) <= 1e-6 and worst(mc) <= 3
    record(acceptance_log, 2, ok, f"closed forms {worst(cf):.2e} <= 1e-6, Monte Carlo {worst(mc):.2f} SE <= 3")


def test_criterion_03_vanishing(reports, acceptance_log):
    es = entries(reports[0], "vanishing-lemma")
    record(acceptance_log, 3, all_pass(es) and worst(es) <= 1e-6, f"max |G| {worst(es):.2e} <= 1e-6, decreasing in x")


def test_criterion_04_nonnegativity(reports, acceptance_log):
    es = entries(reports[0], "nonnegativity-lemma")
    m = min(e["worst_margin"] for e in es)
    record(acceptance_log, 4, all_pass(es) and m >= -1e-8, f"min G {m:.2e} >= -1e-8")


def test_criterion_05_representation(reports, acceptance_log):
    es = entries(reports[0], "stieltjes-representation")
    disk = entries(reports[0], "stieltjes-representation", "series")
    cont = entries(reports[0], "stieltjes-representation", "continuation")
    ok = all_pass(es) and worst(disk) <= 1e-7 and worst(cont) <= 1e-8
    record(acceptance_log, 5, ok, f"disk rel {worst(disk):.2e} <= 1e-7, ln10/9 abs {worst(cont):.2e} <= 1e-8")


def test_criterion_06_exact_order(reports, acceptance_log):
    es = [e for e in entries(reports[0], "exact-order") if e["status"] != "advisory"]
    has_psi0 = any("psi=0" in e["check"] for e in es)
    ok = len(es) >= 5 and has_psi0 and all_pass(es) and worst(es) <= 0.05
    record(acceptance_log, 6, ok, f"{len(es)} families, max deviation {worst(es):.2e} <= 0.05")


def test_criterion_07_limit_measure(reports, acceptance_log):
    es = entries(reports[0], "limit-measure-q2")
    recorded = all("chosen" in e["details"] and "coefficient" in e["details"] for e in es)
    ok = all_pass(es) and recorded and worst(es) <= 1e-6
    record(acceptance_log, 7, ok, f"max rel err {worst(es):.2e} <= 1e-6, coefficient recorded")


def test_criterion_08_power_denominator(reports, acceptance_log):
    es = entries(reports[0], "power-denominator")
    gauss = any("gauss" in e["check"] for e in es)
    ok = all_pass(es) and gauss and worst(es) <= 1e-5
    record(acceptance_log, 8, ok, f"max rel err {worst(es):.2e} <= 1e-5, Gauss path included")


def test_criterion_09_inequalities(reports, acceptance_log):
    ids = ("ratio-monotonicity", "lower-bound", "upper-bound", "log-convexity")
    es = [e for t in ids for e in entries(reports[0], t) if e["status"] != "advisory"]
    eq = entries(reports[0], "lower-bound", "F(0)")
    ok = all(entries(reports[0], t) for t in ids) and all_pass(es) and worst(eq) <= 1e-12
    record(acceptance_log, 9, ok, f"zero violations, F(0)=1 to {worst(eq):.1e}")


def test_criterion_10_schur(reports, acceptance_log):
    es = entries(reports[0], "schur-lemma") + entries(reports[0], "newton-inequality")
    record(acceptance_log, 10, all_pass(es) and len(es) == 2, "chain condition and Newton inequality hold")


def test_criterion_11_pade(reports, acceptance_log):
    r = reports[0]
    order = entries(r, "pade-denominators", "order")
    orth = entries(r, "pade-denominators", "orthogonality")
    conv = entries(r, "pade-convergence")
    norm = entries(r, "pade-normality")
    ok = all_pass(order + orth + conv + norm) and worst(order) <= 1e-9 and worst(orth) <= 1e-8 and worst(conv) <= 1e-6
    record(acceptance_log, 11, ok, f"normal, order {worst(order):.1e}, orth {worst(orth):.1e}, error m=8 {worst(conv):.1e}")


def test_criterion_12_mapping(reports, acceptance_log):
    r = reports[0]
    sector = entries(r, "sector-mapping")
    half = entries(r, "half-plane-univalence", "half_plane")
    d09 = entries(r, "half-plane-univalence", "r=0.9")
    d08 = entries(r, "disk-univalence", "r=0.8")
    star = entries(r, "starlikeness")
    ok = len(sector) == 5 and all_pass(sector + half + d09 + d08 + star)
    record(acceptance_log, 12, ok, "sector Im<0, zero collisions in half-plane and disks 0.9 and 0.8, starlike at 0.9")


def test_criterion_13_laplace(reports, acceptance_log):
    es = entries(reports[0], "laplace-remark")
    record(acceptance_log, 13, all_pass(es) and worst(es) <= 1e-5, f"max rel err {worst(es):.2e} <= 1e-5")


def test_criterion_14_determinism(reports, acceptance_log):
    a, b = (json.loads(r.to_json()) for r in reports)
    record(acceptance_log, 14, a == b and a["all_passed"], "two seed-42 runs give identical reports")
