import pytest
from hypothesis import given, strategies as st

from necklace.errors import DomainError
from necklace.graded import necklace_profile
from necklace.obstruct import (CSV_COLUMNS, ObstructionQuery, divides, maslov_from_chern,
                               theoremB_cases, verify_theoremB)
from necklace.spectral import SpectralProfile, differential_offset, vanishing_feasible
from oracles import brute_force_pairable


def report(n, k, c, **kw):
    return theoremB_cases(ObstructionQuery(n, k, c), **kw)


def test_maslov_from_chern():
    assert maslov_from_chern(1) == 2 and maslov_from_chern(3) == 6
    with pytest.raises(DomainError):
        maslov_from_chern(0)


@pytest.mark.parametrize("n, k, c", [(4, 0, 1), (4, 3, 1), (5, 1, 0), (3, 2, 1)])
def test_query_domain(n, k, c):
    with pytest.raises(DomainError):
        ObstructionQuery(n, k, c)


def test_feasible_example():
    r = report(5, 1, 1)
    assert r.feasible and "A" in r.cases and not r.special_branch
    # The primitive clause (c) also holds here: 2 | 8 and 2 | 2.
    assert r.cases == {"A", "C"}
    assert "(a) C | k+1  (1 | 2)" in r.derived_divisibilities


def test_obstructed_example():
    r = report(5, 1, 3)
    assert not r.feasible and r.cases == frozenset()
    assert r.witness.unmatched == (0, 3, 4, 7)


def test_special_branch_reports_both_conditions():
    r = report(4, 1, 2)
    assert r.special_branch and r.feasible and r.cases == frozenset()
    assert r.special_exact and r.special_stated
    # n = 7, k = 2, C = 6: the stated condition 6 | 6 holds, the exact one 6 | 3 does not.
    r = report(7, 2, 6)
    assert not r.feasible and r.special_stated and not r.special_exact
    assert r.stated_disjunction
    assert any(line.startswith("(2) stated") for line in r.derived_divisibilities)


def test_stated_clause_c_recorded():
    # n = 9, k = 1: 2C | 12 and 2C | 6 for C = 3; stated form C | 3.
    r = report(9, 1, 3)
    assert "C" in r.cases
    assert "(c) stated: C | 2k+1  (3 | 3)" in r.derived_divisibilities


def test_report_serialises():
    d = report(5, 1, 1).to_dict()
    assert d["maslov"] == 2 and d["cases"] == ["A", "C"]
    assert d["witness"]["pairs"][0] == {"source": 0, "target": 3, "r": 2}


def test_changing_chern_flips_verdict():
    assert report(5, 1, 1).feasible != report(5, 1, 3).feasible


def test_verify_single_cell():
    s = verify_theoremB(3, 1, collect_rows=True)
    assert s.checked == 1 and s.feasible == 1 and s.ok
    assert s.rows == [(3, 1, 1, True, True, False, True, False)]
    assert len(CSV_COLUMNS) == len(s.rows[0])


def test_verify_empty_range():
    s = verify_theoremB(2, 1)
    assert s.checked == 0 and s.ok and s.counterexamples == []


def test_parallel_matches_serial():
    serial = verify_theoremB(24, collect_rows=True)
    parallel = verify_theoremB(24, jobs=3, collect_rows=True)
    assert serial.to_dict() == parallel.to_dict()
    assert serial.rows == parallel.rows == sorted(serial.rows)


grid = st.integers(3, 60).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(1, n - 2), st.integers(1, n + 2)))


@given(grid)
def test_closed_form_matches_brute_force(nkc):
    n, k, c = nkc
    gens = necklace_profile(n, k).generators()
    assert report(n, k, c, with_witness=False).feasible == brute_force_pairable(gens, 2 * c)


@given(grid)
def test_special_branch_is_c_divides_k_plus_one(nkc):
    n, k, c = nkc
    k = (n - 1) // 3 if (n - 1) % 3 == 0 and n >= 4 else None
    if k is None:
        return
    ok, _ = vanishing_feasible(SpectralProfile(necklace_profile(n, k), 2 * c))
    assert ok == divides(c, k + 1)
    assert (not ok) or divides(c, n - k + 1)


@given(grid)
def test_case_a_uses_offset_2k_plus_1(nkc):
    n, k, c = nkc
    if n == 3 * k + 1 or not divides(c, k + 1):
        return
    r = (2 * k + 2) // (2 * c)
    assert differential_offset(r, 2 * c) == 2 * k + 1 == (n + k + 1) - (n - k)
