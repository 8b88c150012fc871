from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grw import errors, oracle
from grw.galg import algebra
from grw.unitstruct import aux_structure_char3, cyclic_units, descriptor_eval, unit_structure


def _units(p, k, family, n=1):
    c = oracle.count_units(p, k, family, n, collect=True)
    alg = algebra(p, k, family, n)
    return c, alg, alg.from_codes(c.unit_codes)


# -- censuses -----------------------------------------------------------------------

def test_census_f2q12():
    c = oracle.count_units(2, 1, "Q12")
    assert (c.unit_count, c.total, c.mode) == (768, 4096, "exhaustive")


def test_census_small_abelian():
    assert oracle.count_units(3, 1, "C4").unit_count == 32
    assert oracle.count_units(3, 1, "C2xC2").unit_count == 16
    assert oracle.count_units(3, 1, "Trivial", 3).unit_count == 18
    assert oracle.count_units(2, 2, "Trivial", 1).unit_count == 3


def test_census_respects_cap():
    with pytest.raises(errors.SizeBound):
        oracle.count_units(5, 1, "Q12")
    with pytest.raises(errors.SizeBound):
        oracle.count_units(2, 1, "Q12", cap=4095)


def test_census_argument_checks():
    with pytest.raises(ValueError):
        oracle.count_units(2, 1, "Q12", mode="sampled", samples=999)
    with pytest.raises(ValueError):
        oracle.count_units(2, 1, "Q12", mode="bogus")


def test_census_independent_of_workers(monkeypatch):
    base = oracle.count_units(3, 1, "C2xC2", 2, threads=1, collect=True)
    other = oracle.count_units(3, 1, "C2xC2", 2, threads=4, collect=True)
    assert base.unit_count == other.unit_count
    assert np.array_equal(np.sort(base.unit_codes), np.sort(other.unit_codes))
    a = oracle.count_units(5, 1, "D12", mode="sampled", samples=20_000, threads=1)
    monkeypatch.setenv("GRW_THREADS", "3")
    b = oracle.count_units(5, 1, "D12", mode="sampled", samples=20_000)
    assert (a.hits, a.seed) == (b.hits, b.seed)


def test_sampled_census_f5d12_within_three_sigma():
    want = unit_structure("D12", 5, 1, 1).order
    assert want == 58_982_400
    c = oracle.count_units(5, 1, "D12", mode="sampled", samples=100_000)
    assert 0 <= c.estimated_fraction <= 1
    assert abs(c.estimated_fraction - 0.2416) < 3 * c.std_error + 1e-3
    assert abs(c.z_score(want)) <= 3


def test_sampled_census_is_seeded():
    a = oracle.count_units(5, 1, "Q12", mode="sampled", samples=5000, seed=7)
    b = oracle.count_units(5, 1, "Q12", mode="sampled", samples=5000, seed=7)
    c = oracle.count_units(5, 1, "Q12", mode="sampled", samples=5000, seed=8)
    assert a.hits == b.hits
    assert c.seed == 8


def test_check_fraction_reruns_once_on_failure():
    fc = oracle.check_fraction(5, 1, "Q12", 1, unit_structure("Q12", 5, 1, 1).order, samples=20_000)
    assert fc.passed and len(fc.censuses) == 1
    bad = oracle.check_fraction(5, 1, "Q12", 1, 5**12, samples=2000)
    assert not bad.passed
    assert [c.seed for c in bad.censuses] == [oracle.DEFAULT_SEED, oracle.DEFAULT_SEED + 1]


def test_census_json_omits_timings_by_default():
    c = oracle.count_units(2, 1, "C4")
    assert "elapsed" not in c.to_json()
    assert "elapsed" in c.to_json(timings=True)


@pytest.mark.parametrize("case", [("Q12", 2, 1, 1), ("D12", 2, 1, 1), ("C4", 3, 1, 1), ("Trivial", 3, 1, 9)])
def test_census_matches_theorem_order(case):
    fam, p, k, n = case
    c = oracle.count_units(p, k, fam, n)
    if fam in ("Q12", "D12"):
        assert c.unit_count == unit_structure(fam, p, k, n).order
    elif fam == "C4":
        assert c.unit_count == descriptor_eval(aux_structure_char3(k, n, "C4")).order
    else:
        assert c.unit_count == descriptor_eval(cyclic_units(p, k, n)).order


def test_collected_units_are_closed():
    c = oracle.count_units(2, 1, "D12", collect=True)
    assert len(c.unit_codes) == 768
    assert oracle.unit_set_closure(2, 1, "D12", 1, c.unit_codes)
    # dropping a unit breaks closure
    assert not oracle.unit_set_closure(2, 1, "D12", 1, c.unit_codes[1:], pairs=20_000)


# -- analyze_group ------------------------------------------------------------------

def test_analyze_f3c4():
    _, alg, flats = _units(3, 1, "C4")
    ga = oracle.analyze_group((alg, flats))
    assert (ga.order, ga.is_abelian, ga.abelianization_invariants) == (32, True, [2, 2, 8])
    assert ga.abelianization_invariants == descriptor_eval(aux_structure_char3(1, 1, "C4")).abelian_invariants


def test_analyze_trivial_group():
    alg = algebra(2, 1, "Trivial")
    ga = oracle.analyze_group([alg.one()])
    assert (ga.order, ga.exponent, ga.center_order, ga.derived_order, ga.abelianization_invariants) == (1, 1, 1, 1, [])


def test_analyze_f2q12_nonabelian():
    _, alg, flats = _units(2, 1, "Q12")
    ga = oracle.analyze_group((alg, flats))
    assert ga.order == 768 and not ga.is_abelian
    assert ga.order % ga.center_order == 0 and ga.order % ga.derived_order == 0
    assert ga.order // ga.derived_order == int(np.prod(ga.abelianization_invariants))
    # a pair of non-commuting units among the first few
    els = [alg.from_flat(f) for f in flats[:40]]
    assert any(a * b != b * a for a in els for b in els)


def test_analyze_large_cyclic_algebra():
    _, alg, flats = _units(3, 1, "Trivial", 9)
    ga = oracle.analyze_group((alg, flats))
    want = descriptor_eval(cyclic_units(3, 1, 9))
    assert ga.order == 13122 == want.order
    assert ga.abelianization_invariants == want.abelian_invariants
    assert ga.exponent == want.exponent


def test_analyze_rejects_non_group():
    _, alg, flats = _units(3, 1, "C4")
    with pytest.raises(errors.NotClosed):
        oracle.analyze_group((alg, flats[:-1]))
    with pytest.raises(errors.NotClosed):
        oracle.analyze_group([alg.scalar(2)])


@pytest.mark.parametrize("case", [(3, 1, 1, "C4"), (3, 1, 1, "C2xC2"), (3, 1, 2, "C4"), (3, 2, 1, "C2xC2")])
def test_aux_invariants_match_analysis(case):
    p, k, n, aux = case
    _, alg, flats = _units(p, k, aux, n)
    ga = oracle.analyze_group((alg, flats))
    ev = descriptor_eval(aux_structure_char3(k, n, aux))
    assert ga.is_abelian and ev.is_abelian
    assert (ga.order, ga.abelianization_invariants) == (ev.order, ev.abelian_invariants)


# -- characteristic 3 construction -------------------------------------------------

@pytest.mark.parametrize("family", ["Q12", "D12"])
def test_v_subgroup_n1(family):
    v = oracle.v_subgroup(family)
    assert (v.element_count, v.exponent, v.is_abelian) == (6561, 3, False)
    assert v.ok and v.mode == "enumerated"


def test_v_membership_example():
    s = oracle.Char3Setup("Q12")
    x, y = s.alg.gen("x"), s.alg.gen("y")
    u = s.alg.one() + (x - s.alg.one()) * y
    assert s.V.contains(u.flat[None])[0]
    assert not s.V.contains((s.alg.one() + s.alg.one()).flat[None])[0]


def test_cv_subgroup_n1():
    cv = oracle.cv_subgroup("Q12")
    assert cv.report.element_count == 729 and cv.report.is_abelian and cv.ok
    assert cv.report.mode == "exhaustive"
    s = oracle.Char3Setup("Q12")
    assert s.CV.contains(s.alg.one_flat[None])[0]


@pytest.mark.parametrize("family", ["Q12", "D12"])
def test_cv_commutes_at_n2(family):
    s = oracle.Char3Setup(family, 1, 2)
    v = s.CV.sample(oracle._rng(1, 0), 1000)
    assert s.commutes_with_centralized(v).all()
    assert s.CV.size == 3**12
    cv = oracle.cv_subgroup(family, 1, 2)
    assert cv.ok and cv.report.mode == "sampled"


def test_proof_subgroups_q12():
    ps = oracle.proof_subgroups("Q12")
    assert ps.second.element_count == 81
    assert ps.intersection.element_count == 9
    assert ps.complement.element_count == 9
    assert ps.product_order == ps.v_order == 6561
    assert ps.normalizes and ps.trivial_intersection and ps.ok and ps.mode == "exhaustive"


def test_proof_subgroups_d12():
    ps = oracle.proof_subgroups("D12")
    assert ps.second.element_count == 9 and ps.intersection.element_count == 1
    assert ps.complement is None
    assert ps.product_order == 6561 and ps.ok


def test_t_closed_on_random_pairs():
    s = oracle.Char3Setup("Q12")
    rng = oracle._rng(3, 0)
    a, b = s.second.sample(rng, 1000), s.second.sample(rng, 1000)
    assert s.second.contains(s.alg.mul_flat(a, b)).all()


@pytest.mark.parametrize("family", ["Q12", "D12"])
def test_proof_subgroups_n2_sampled(family):
    ps = oracle.proof_subgroups(family, 1, 2)
    assert ps.ok and ps.mode == "sampled"
    assert ps.v_order == 3**16


def test_conjugation_sampled_pairs_n2():
    s = oracle.Char3Setup("Q12", 1, 2)
    rng = oracle._rng(11, 0)
    cs, ts = s.CV.sample(rng, 10_000), s.second.sample(rng, 10_000)
    conj = s.alg.mul_flat(s.alg.mul_flat(oracle._inverse_flats(s.alg, ts), cs), ts)
    assert s.CV.contains(conj).all()


@settings(max_examples=20)
@given(st.sampled_from(["Q12", "D12"]), st.integers(1, 2), st.integers(1, 3))
def test_subgroup_orders_follow_exponents(family, k, n):
    s = oracle.Char3Setup(family, k, n)
    nk = n * k
    assert s.V.size == 3 ** (8 * nk)
    assert s.CV.size == 3 ** (6 * nk)
    assert s.second.size == 3 ** ((4 if family == "Q12" else 2) * nk)
    meet = s.CV.intersect(s.second).size
    assert meet == (3 ** (2 * nk) if family == "Q12" else 1)


@pytest.mark.parametrize("family", ["Q12", "D12"])
def test_coefficient_criterion_equivalent(family):
    assert oracle.v_criterion_check(family)


def test_coefficient_criterion_examples():
    alg = algebra(3, 1, "Q12")
    assert oracle.coefficient_criterion(alg, alg.one_flat)[0]
    assert not oracle.coefficient_criterion(alg, alg.gen("y").flat)[0]
    with pytest.raises(errors.UnsupportedCase):
        oracle.collapse_subgroup(algebra(2, 1, "Q12").group, 2)


# -- split and radical ---------------------------------------------------------------

def test_split_examples():
    assert oracle.verify_split(3, 1, "Q12", 1).ok
    assert oracle.verify_split(3, 1, "D12", 1).ok
    r = oracle.verify_split(5, 1, "D12", 5, samples=3000)
    assert r.ok and r.mode == "sampled" and r.checked == 3000


def test_split_with_trivial_kernel():
    r = oracle.verify_split(3, 1, "Q12", 1, [(0, 0, 0)], samples=2000)
    assert r.ok


@pytest.mark.parametrize("case,dim", [((5, 1, "D12", 5), 48), ((5, 1, "Q12", 1), 0), ((7, 1, "Q12", 7), 72),
                                      ((7, 1, "D12", 3), 0)])
def test_radical(case, dim):
    r = oracle.radical_verify(*case)
    assert r.dim == r.expected_dim == dim
    assert r.quotient_dim == r.expected_quotient_dim
    assert r.ok and r.identifies_radical
    if dim:
        assert r.nilpotency_index is not None and r.nilpotency_index > 1


def test_radical_char3_is_not_identified():
    r = oracle.radical_verify(3, 1, "Q12", 1)
    assert r.ok and r.dim == 8 and r.nilpotency_index == 3
    assert not r.identifies_radical
