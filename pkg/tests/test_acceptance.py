"""Acceptance criteria 1-6, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed as they are
produced and again in the terminal summary. Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import time

import pytest

from grw import oracle, selftest
from grw.unitstruct import aux_structure_char3, cyclic_units, descriptor_eval, unit_structure

RESULTS: list[str] = []


def record(criterion: int, ok: bool, detail: str):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _predicted(fam, p, k, n):
    if fam in ("Q12", "D12"):
        return unit_structure(fam, p, k, n).order
    if fam in ("C4", "C2xC2"):
        return descriptor_eval(aux_structure_char3(k, n, fam)).order
    return descriptor_eval(cyclic_units(p, k, n)).order


CENSUS_CASES = [("Q12", 2, 1, 1, 768), ("D12", 2, 1, 1, 768), ("Q12", 3, 1, 1, 209952),
                ("D12", 3, 1, 1, 104976), ("C4", 3, 1, 1, 32), ("C2xC2", 3, 1, 1, 16),
                ("Trivial", 3, 1, 3, 18), ("Trivial", 3, 1, 9, 13122)]


def test_criterion_1_exhaustive_censuses():
    start, bad = time.perf_counter(), []
    for fam, p, k, n, want in CENSUS_CASES:
        got = oracle.count_units(p, k, fam, n).unit_count
        if not got == want == _predicted(fam, p, k, n):
            bad.append((fam, p, n, got, want))
    record(1, not bad, f"{len(CENSUS_CASES)} censuses, mismatches {bad}, {time.perf_counter() - start:.1f}s")


def test_criterion_2_char3_construction():
    start, fails = time.perf_counter(), []
    for fam in ("Q12", "D12"):
        v = oracle.v_subgroup(fam)
        if not (v.ok and v.element_count == 3**8 and v.exponent == 3 and v.mode == "enumerated"):
            fails.append(f"{fam} V")
        cv = oracle.cv_subgroup(fam)
        if not (cv.ok and cv.report.element_count == 3**6 and cv.report.is_abelian
                and cv.report.mode == "exhaustive"):
            fails.append(f"{fam} C_V")
        ps = oracle.proof_subgroups(fam)
        if fam == "Q12":
            good = (ps.second.element_count == 3**4 and ps.intersection.element_count == 3**2
                    and ps.complement is not None and ps.complement.ok)
        else:
            good = ps.second.element_count == 3**2 and ps.intersection.element_count == 1
        if not (good and ps.ok and ps.product_order == 3**8 and ps.mode == "exhaustive"):
            fails.append(f"{fam} proof subgroups")
        ps2 = oracle.proof_subgroups(fam, 1, 2, pairs=10_000)
        if not (ps2.normalizes and ps2.ok):
            fails.append(f"{fam} n=2 conjugation")
    record(2, not fails, f"failures {fails}, {time.perf_counter() - start:.1f}s")


RADICAL_CASES = [(5, 5, 1, 48), (7, 7, 1, 72), (5, 1, 1, 0), (7, 3, 3, 0)]


def test_criterion_3_radical_audit():
    bad = []
    for fam in ("Q12", "D12"):
        for p, n, s, dim in RADICAL_CASES:
            r = oracle.radical_verify(p, 1, fam, n)
            good = (r.ok and r.dim == dim == 12 * s * (p ** (1 if n % p == 0 else 0) - 1)
                    and r.quotient_dim == 12 * s and r.identifies_radical)
            if not good:
                bad.append((fam, p, n, r.dim))
    record(3, not bad, f"{2 * len(RADICAL_CASES)} cases, mismatches {bad}")


@pytest.mark.parametrize("family", ["D12", "Q12"])
def test_criterion_4_sampled_fraction(family):
    start = time.perf_counter()
    want = unit_structure(family, 5, 1, 1).order
    fc = oracle.check_fraction(5, 1, family, 1, want, samples=100_000)
    c = fc.censuses[-1]
    record(4, fc.passed, f"F_5{family} fraction {c.estimated_fraction:.5f} +- {c.std_error:.5f} vs "
                         f"{want / c.total:.5f}, z {fc.z_scores[-1]:.2f}, {time.perf_counter() - start:.1f}s")


def test_criterion_5_property_suites():
    results = selftest.run_suites()
    failed = [r.name for r in results if not r.passed]
    record(5, not failed, f"{len(results)} suites, {sum(r.cases for r in results)} cases, failed {failed}")


def test_criterion_6_split_checks():
    checks = [oracle.verify_split(3, 1, "Q12", 1), oracle.verify_split(3, 1, "D12", 1),
              oracle.verify_split(5, 1, "D12", 5)]
    record(6, all(c.ok for c in checks), ", ".join(f"{c.mode} {c.checked}" for c in checks))


if __name__ == "__main__":
    import sys

    tests = [test_criterion_1_exhaustive_censuses, test_criterion_2_char3_construction,
             test_criterion_3_radical_audit, lambda: test_criterion_4_sampled_fraction("D12"),
             lambda: test_criterion_4_sampled_fraction("Q12"), test_criterion_5_property_suites,
             test_criterion_6_split_checks]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
