import math
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weingarten.bounds import (
    E_HI,
    E_LO,
    BoundCheckResult,
    check_catalan_quotient,
    check_energy,
    check_log_bound,
    check_path_ratio_bounds,
    check_process,
    check_small_perm,
    check_theorem_main,
    check_theorem_orthogonal,
    corrected_energy_rhs,
    emit_report,
    energy_inequality,
    eulerian_numbers,
    le_sqrt,
    power_series_sum,
    random_class_vector,
    read_report,
    run_jobs,
    small_perm_rhs,
)
from weingarten.exact import EMPTY, identity_values, wg_unitary_gram, wg_unitary_recursion
from weingarten.perm import Partition, moebius
from weingarten.rng import Stream

GOLDEN = Path(__file__).parent / "golden"
P = Partition.parse
fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)


def test_e_enclosure():
    assert E_LO < E_HI and float(E_LO) <= math.e <= float(E_HI)
    assert E_HI - E_LO == Fraction(1, 10**49)


@given(fractions, fractions, st.fractions(min_value=0, max_value=60, max_denominator=30))
def test_le_sqrt_matches_floats_away_from_ties(a, b, m):
    diff = float(a) - float(b) * math.sqrt(float(m))
    if abs(diff) > 1e-9:
        assert le_sqrt(a, b, m) == (diff < 0)


def test_le_sqrt_exact_ties():
    assert le_sqrt(Fraction(3), Fraction(1), 9)
    assert le_sqrt(Fraction(-3), Fraction(-1), 9)
    assert not le_sqrt(Fraction(3), Fraction(1), Fraction(8))


def test_eulerian_numbers():
    assert eulerian_numbers(0) == [1]
    assert eulerian_numbers(3) == [1, 4, 1]
    assert eulerian_numbers(4) == [1, 11, 11, 1]
    for s in range(8):
        assert sum(eulerian_numbers(s)) == math.factorial(s)


@given(st.integers(0, 6), st.fractions(min_value=0, max_value=Fraction(9, 10), max_denominator=50))
def test_power_series_matches_direct_sum(s, y):
    exact = power_series_sum(s, y)
    partial = sum(Fraction(g) ** s * y**g for g in range(1, 400))
    assert partial <= exact
    assert float(exact - partial) <= 1e-6 * max(1.0, float(exact))


def test_power_series_rejects_divergent_argument():
    with pytest.raises(ValueError):
        power_series_sum(2, Fraction(1))


def test_small_perm_rhs_increases_with_e():
    assert small_perm_rhs(3, 2, Fraction(1000), E_LO) < small_perm_rhs(3, 2, Fraction(1000), E_HI)


def test_main_n1_ratio_is_one():
    rows = check_theorem_main(1, 10**5)
    assert {r.claim for r in rows} == {"main_upper", "classical_lower", "classical_upper"}
    for r in rows:
        assert r.satisfied and r.hypothesis_met
        if r.claim != "classical_lower":
            assert r.lhs == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_main_bound_instances(n):
    rows = check_theorem_main(n, 10**5)
    assert all(r.satisfied and r.hypothesis_met for r in rows)
    assert len(rows) == 3 * len({r.parameters["class"] for r in rows})


def test_main_bound_outside_hypothesis_is_flagged():
    rows = check_theorem_main(4, 100)
    assert not any(r.hypothesis_met for r in rows if r.claim == "main_upper")
    assert all(r.ok for r in rows)


def test_main_golden_report():
    text = emit_report(check_theorem_main(3, 10**5), "csv")
    assert text == (GOLDEN / "main_n3_N100000.csv").read_text()


def test_golden_ratios_match_gram_oracle():
    gram = wg_unitary_gram(3, 10**5)
    for r in read_report((GOLDEN / "main_n3_N100000.csv").read_text()):
        if r.claim == "main_upper":
            lam = P(r.parameters["class"])
            expected = (-1) ** lam.norm * Fraction(10**5) ** (3 + lam.norm) * gram[lam] / abs(moebius(lam))
            assert r.lhs == expected


def test_report_round_trip_csv_and_json():
    rows = check_theorem_main(2, 10**5) + check_catalan_quotient(4) + check_energy(1, 10**4, random_vectors=1)
    for fmt in ("csv", "json"):
        back = read_report(emit_report(rows, fmt), fmt)
        assert back == rows


def test_empty_report_is_header_only():
    assert emit_report([], "csv") == "claim,n,N,class,extra,lhs,rhs,satisfied,hypothesis_met,slack,diagnostics\n"
    assert emit_report([], "json") == "[]\n"
    with pytest.raises(ValueError):
        emit_report([], "xml")


def test_slack_and_ok():
    r = BoundCheckResult("x", {}, Fraction(1), Fraction(2), True)
    assert r.slack == 0.5 and r.ok
    assert BoundCheckResult("x", {}, Fraction(1), math.inf, True).slack == 0.0
    assert BoundCheckResult("x", {}, 3, 1, False, False).ok


def test_orthogonal_and_symplectic_instance():
    rows = check_theorem_orthogonal(2, 10**7)
    assert {r.claim for r in rows} == {"orth_upper", "sp_upper"}
    assert all(r.satisfied and r.hypothesis_met for r in rows)


def test_small_perm_instance():
    rows = check_small_perm(12, 2, [1000])
    assert rows and all(r.satisfied and r.hypothesis_met for r in rows)
    assert all(r.parameters["N"] == 1000 for r in rows)
    assert all(P(r.parameters["class"]).norm <= 2 for r in rows)
    assert all("empirical_constant" in r.diagnostics for r in rows)


def test_small_perm_outside_hypothesis():
    rows = check_small_perm(4, 1, [20])
    assert any(not r.hypothesis_met for r in rows)


def test_log_bound_instances():
    rows = check_log_bound(5, 10**4) + check_log_bound(6, 10**4)
    assert [r.parameters["class"] for r in rows if r.parameters["n"] == 5] == ["5"]
    assert all(r.satisfied for r in rows)
    assert not any(r.hypothesis_met for r in rows)
    assert all(r.satisfied and r.hypothesis_met for r in check_log_bound(5, 10**6))


def test_log_bound_skips_small_norm():
    assert check_log_bound(4, 10**6) == []


def test_catalan_quotient():
    rows = check_catalan_quotient(200)
    assert len(rows) == 199 and all(r.satisfied for r in rows)


def test_path_ratio_bounds():
    rows = check_path_ratio_bounds(4, samples=200, seed=7)
    assert all(r.satisfied for r in rows)
    assert {r.claim for r in rows} >= {"path_ratio_mc", "path_ratio_uniform", "orth_minor_mc"}


def test_process_bounds():
    rows = check_process(P("20,4"), samples=200, seed=7)
    assert all(r.satisfied for r in rows)
    assert any(r.claim == "Ti_tail" for r in rows)


def test_energy_counterexample_with_empty_coordinate():
    # (T x)_empty = x_empty, so the left side carries |x_empty| while the right side only has gamma |x_empty|
    N = Fraction(10**4)
    ids = identity_values(wg_unitary_recursion(1, N))
    x = {EMPTY: Fraction(1), P("1"): Fraction(0)}
    lhs, rhs = energy_inequality(x, 1, N, Fraction(3, 5), ids)
    assert lhs == 2 and rhs < 2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_energy_holds_at_weingarten_vector(n):
    rows = [r for r in check_energy(n, 10**4, random_vectors=0)]
    assert rows and all(r.satisfied and r.hypothesis_met for r in rows)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_corrected_energy_bound_holds(n):
    N = Fraction(10**4)
    table = wg_unitary_recursion(n, N)
    ids = identity_values(table)
    vectors = [dict(table.values)] + [random_class_vector(n, N, Stream(11, j)) for j in range(25)]
    for gamma in (Fraction(3, 5), Fraction(9, 10)):
        for x in vectors:
            lhs, _ = energy_inequality(x, n, N, gamma, ids)
            assert lhs <= corrected_energy_rhs(x, n, N, gamma, ids)


def test_run_jobs_keeps_order_with_workers():
    jobs = [("catalan", {"k_max": 5}), ("main", {"n": 2, "N": Fraction(10**5)})]
    serial = run_jobs(jobs, 1)
    assert run_jobs(jobs, 2) == serial
    assert [r.claim for r in serial[:4]] == ["catalan_quotient"] * 4
