"""The acceptance criteria, one test each, with their time limits.

Every test records a ``criterion k PASS|FAIL`` line, printed in the terminal
summary of the pytest run.
"""

import time
from collections import Counter
from fractions import Fraction

import pytest
from scipy.stats import chi2

from conftest import ACCEPTANCE_LINES
from weingarten.bounds import check_energy, check_log_bound, check_small_perm, check_theorem_main, time_to_halve_bound
from weingarten.exact import (
    normalized_orthogonal,
    wg_full_cycle,
    wg_orthogonal_gram,
    wg_orthogonal_series,
    wg_unitary_gram,
    wg_unitary_recursion,
)
from weingarten.graph import count_paths_orthogonal, count_paths_unitary, minimal_paths_unitary
from weingarten.pairing import Pairing, all_pairings
from weingarten.perm import Partition, Permutation, all_permutations, moebius, partitions
from weingarten.process import estimate_L_power_sum, estimate_time_to_halve, exact_path_law_unitary, run_wp_unitary
from weingarten.rng import Stream


def record(k: int, ok: bool, elapsed: float, limit: float | None, detail: str) -> None:
    in_time = limit is None or elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    line = f"criterion {k} {status} {elapsed:.2f}s{budget} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert in_time, line


def test_criterion_01_unitary_enumeration():
    start = time.perf_counter()
    checked, bad = 0, []
    for n in range(1, 8):
        for sigma in all_permutations(n):
            checked += 1
            if count_paths_unitary(sigma, 0) != abs(moebius(sigma)):
                bad.append(str(sigma))
    record(1, not bad, time.perf_counter() - start, 60, f"{checked} permutations, mismatches {bad[:3]}")


def test_criterion_02_gram_equals_recursion():
    start = time.perf_counter()
    bad = []
    for N in (7, 10, 100):
        for n in range(1, 6):
            gram, rec = wg_unitary_gram(n, N), wg_unitary_recursion(n, N)
            bad += [(n, N, str(lam)) for lam in partitions(n) if gram[lam] != rec[lam]]
    record(2, not bad, time.perf_counter() - start, 60, f"n <= 5, N in 7,10,100, mismatches {bad[:3]}")


def test_criterion_03_full_cycle_closed_form():
    start = time.perf_counter()
    bad = []
    for N in (10, 100):
        table = wg_unitary_recursion(6, N)
        bad += [(n, N) for n in range(1, 7) if table[Partition((n,))] != wg_full_cycle(n, N)]
    record(3, not bad, time.perf_counter() - start, 10, f"n <= 6, N in 10,100, mismatches {bad}")


def test_criterion_04_main_bound_instances():
    start = time.perf_counter()
    rows = [r for n in (2, 3, 4) for r in check_theorem_main(n, 10**5)]
    wanted = [r for r in rows if r.claim in ("main_upper", "classical_lower")]
    ok = all(r.hypothesis_met for r in wanted if r.claim == "main_upper") and all(r.satisfied for r in wanted)
    worst = max(r.slack for r in wanted if r.claim == "main_upper")
    record(4, ok, time.perf_counter() - start, 120, f"{len(wanted)} exact comparisons at N = 10^5, worst upper slack {worst:.4f}")


def test_criterion_05_sampler_uniformity():
    start = time.perf_counter()
    sigma = Permutation.parse("(1 2 3 4)")
    paths = sorted(minimal_paths_unitary(sigma), key=str)
    law = exact_path_law_unitary(sigma)
    exact_ok = len(paths) == 5 and all(law[p] == Fraction(1, 5) for p in paths)
    runs = 10**5
    counts = Counter(run_wp_unitary(sigma, Stream(42, i)).states for i in range(runs))
    stat = sum((counts[p] - runs / 5) ** 2 / (runs / 5) for p in paths)
    quantile = chi2.ppf(0.999, 4)
    ok = exact_ok and sum(counts.values()) == sum(counts[p] for p in paths) and stat < quantile
    record(5, ok, time.perf_counter() - start, None, f"exact law 1/5 each: {exact_ok}, chi2 {stat:.3f} < {quantile:.3f}")


def test_criterion_06_L_power_sum():
    start = time.perf_counter()
    details, ok = [], True
    for n in (50, 100):
        rep = estimate_L_power_sum(Partition((n,)), Fraction(3, 2), samples=1000, seed=7)
        ok &= rep.upper(5.0) <= 1e6 * n**2
        details.append(f"n={n}: {rep.upper(5.0):.1f} <= {1e6 * n**2:.0e}")
    record(6, ok, time.perf_counter() - start, 120, ", ".join(details))


def test_criterion_07_time_to_halve():
    start = time.perf_counter()
    lam = Partition((60,))
    rep = estimate_time_to_halve(lam, samples=1000, seed=7)
    bound = time_to_halve_bound(60, 60)
    record(7, rep.upper(5.0) <= bound, time.perf_counter() - start, 120, f"E[T] + 5 SE = {rep.upper(5.0):.2f} <= {bound:.1f}")


def test_criterion_08_orthogonal_enumeration_and_series():
    start = time.perf_counter()
    bad = []
    checked = 0
    for n in range(1, 5):
        for pi in all_pairings(n):
            checked += 1
            if count_paths_orthogonal(pi, 0, 0) != abs(moebius(pi.coset_type)):
                bad.append(str(pi))
    N = Fraction(50)
    table = wg_orthogonal_gram(2, N)
    brackets = []
    for pi in all_pairings(2):
        res = wg_orthogonal_series(pi, N, 6)
        brackets.append(res.brackets(normalized_orthogonal(table, pi.coset_type)))
    ok = not bad and all(brackets)
    record(8, ok, time.perf_counter() - start, 60, f"{checked} pairings, mismatches {bad[:3]}, series brackets {brackets}")


def test_criterion_09_figure_coset_types():
    start = time.perf_counter()
    first = Pairing.parse("{1-2, 3-7, 4-6, 5-8}")
    second = Pairing.parse("{1-2, 3-4, 5-8, 6-7}")
    ok = first.coset_type == Partition.parse("3,1") and second.coset_type == Partition.parse("2,1,1")
    record(9, ok, time.perf_counter() - start, None, f"coset types {first.coset_type} and {second.coset_type}")


def test_criterion_10_energy_estimate():
    # known to fail for random vectors with a nonzero empty coordinate; see README
    start = time.perf_counter()
    rows = [r for n in range(1, 5) for r in check_energy(n, 10**4, random_vectors=20, seed=7)]
    failed = [r for r in rows if not r.satisfied]
    wg_ok = all(r.satisfied for r in rows if r.parameters["vector"] == "wg")
    detail = f"{len(rows)} comparisons, Weingarten vector holds: {wg_ok}, violations {len(failed)}"
    if failed:
        r = failed[0]
        detail += f", e.g. n={r.parameters['n']} gamma={r.parameters['gamma']} {r.parameters['vector']}: {float(r.lhs):.10g} > {float(r.rhs):.10g}"
    record(10, not failed, time.perf_counter() - start, 30, detail)


def test_criterion_11_small_and_log_bounds():
    start = time.perf_counter()
    small = check_small_perm(12, 2, [1000])
    log_rows = check_log_bound(5, 10**4) + check_log_bound(6, 10**4)
    log_classes = sorted({r.parameters["class"] for r in log_rows if r.parameters["class"] in ("5", "3,3")})
    wanted = [r for r in log_rows if r.parameters["class"] in ("5", "3,3")]
    ok = all(r.satisfied and r.hypothesis_met for r in small) and log_classes == ["3,3", "5"] and all(r.satisfied for r in wanted)
    record(11, ok, time.perf_counter() - start, 60, f"{len(small)} small-norm rows, log classes {log_classes} satisfied")
