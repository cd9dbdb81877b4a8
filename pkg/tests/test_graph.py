import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weingarten.exact import wg_orthogonal_gram, wg_unitary_gram
from weingarten.graph import (
    CSV_HEADER_UNITARY,
    EnumerationCapError,
    OrthogonalPathCounter,
    UnitaryPathCounter,
    count_paths_orthogonal,
    count_paths_orthogonal_total,
    count_paths_unitary,
    count_paths_unitary_class,
    dump_csv,
    minimal_paths_orthogonal,
    minimal_paths_unitary,
    orthogonal_defect_ratios,
    orthogonal_successors,
    single_defect_ratio,
    unitary_count_rows,
    unitary_successors,
)
from weingarten.pairing import Pairing, all_pairings, coset_representative
from weingarten.perm import Partition, Permutation, all_permutations, moebius, norm, partitions


def test_minimal_paths_count_moebius_for_every_permutation():
    for n in range(1, 8):
        for lam in partitions(n):
            assert count_paths_unitary_class(lam, 0) == abs(moebius(lam))
    for sigma in all_permutations(5):
        assert count_paths_unitary(sigma, 0) == abs(moebius(sigma))


def test_small_counts():
    assert count_paths_unitary(Permutation.identity(2), 1) == 1
    assert count_paths_unitary_class(Partition.parse("3"), 0) == 2
    assert count_paths_unitary(Permutation.empty(), 0) == 1
    assert count_paths_unitary(Permutation.identity(1), 1) == 0


def test_successors_shape():
    sigma = Permutation.parse("(1 2)", 3)
    out = unitary_successors(sigma)
    assert [k for k, _ in out] == ["solid", "solid", "dashed"]
    assert out[-1][1] == Permutation.parse("(1 2)")
    pi = Pairing.canonical(2)
    out = orthogonal_successors(pi)
    assert len(out) == 3 and out[-1] == ("dashed", Pairing.canonical(1))
    # (2 3) relabels {1-2, 3-4} to {1-3, 2-4}; the partner of 2n-1 gives a loop
    assert [nxt for _, nxt in out[:2]] == [Pairing.parse("{1-4, 2-3}"), Pairing.parse("{1-3, 2-4}")]
    # relabelling by (partner(2n-1) 2n-1) fixes the pairing: that edge is a loop
    rho = Pairing.parse("{1-5, 2-3, 4-6}")
    assert [i for i in range(1, 5) if rho.act(i) == rho] == [1]


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("N", [7, 10, 100])
def test_path_series_matches_gram(n, N):
    # (-1)^|s| N^{n+|s|} Wg(s) = sum_g |P(s, |s|+2g)| N^{-2g}; the truncation error is tiny
    table = wg_unitary_gram(n, N)
    for lam in partitions(n):
        s = lam.norm
        exact = (-1) ** s * Fraction(N) ** (n + s) * table[lam]
        partial = sum(Fraction(count_paths_unitary_class(lam, g), N ** (2 * g)) for g in range(7))
        assert abs(exact - partial) < Fraction((2 * n) ** (n + s + 14), N**14) * 2


def test_orthogonal_minimal_paths_count_moebius():
    for n in range(1, 5):
        for pi in all_pairings(n):
            assert count_paths_orthogonal(pi, 0, 0) == abs(moebius(pi.coset_type))


def test_orthogonal_series_matches_gram_at_two_points():
    # 2n = 4: values of the path series at N = 50 against the Gram oracle
    N = 50
    table = wg_orthogonal_gram(2, N)
    for pi in all_pairings(2):
        mu = pi.coset_type
        s = mu.norm
        exact = (-1) ** s * Fraction(N) ** (2 + s) * table[mu]
        partial = sum(Fraction(count_paths_orthogonal_total(pi, g)) * Fraction(-1, N) ** g for g in range(11))
        assert abs(exact - partial) < Fraction(1, 10**12)


def test_orthogonal_counts_for_canonical_pairing():
    e = Pairing.canonical(2)
    assert [count_paths_orthogonal_total(e, g) for g in range(5)] == [1, 0, 2, 2, 6]
    cyc = coset_representative(Partition.parse("2"))
    assert [count_paths_orthogonal_total(cyc, g) for g in range(5)] == [1, 1, 3, 5, 11]


def test_minimal_path_enumerators():
    sigma = Permutation.parse("(1 2 3 4)")
    paths = list(minimal_paths_unitary(sigma))
    assert len(paths) == 5
    for path in paths:
        assert path[0] == sigma and path[-1] == Permutation.empty()
        assert len(path) == sigma.n + norm(sigma) + 1
    pi = Pairing.parse("{1-2, 3-7, 4-6, 5-8}")
    assert len(list(minimal_paths_orthogonal(pi))) == abs(moebius(pi.coset_type))


def test_single_defect_ratios():
    assert single_defect_ratio(Partition.parse("1,1")) == 1
    assert single_defect_ratio(Partition.parse("1")) == 0
    with pytest.raises(EnumerationCapError):
        single_defect_ratio(Partition.parse("8"))
    # both solid edges out of {1-2, 3-4} merge the blocks, each followed by one minimal path
    minor, major = orthogonal_defect_ratios(Partition.parse("1,1"))
    assert (minor, major) == (0, 2)


def test_caps():
    with pytest.raises(EnumerationCapError):
        UnitaryPathCounter(degree_cap=3).count(Permutation.identity(4), 0)
    with pytest.raises(EnumerationCapError):
        UnitaryPathCounter(solid_cap=3).count(Permutation.identity(2), 2)
    with pytest.raises(EnumerationCapError):
        OrthogonalPathCounter(points_cap=4).count(Pairing.canonical(3), 0, 0)
    with pytest.raises(ValueError):
        count_paths_unitary(Permutation.identity(2), -1)


@given(st.integers(1, 6).flatmap(lambda n: st.sampled_from(partitions(n))), st.integers(0, 3))
def test_counts_are_class_functions(lam, g):
    sigma = lam.representative()
    shuffled = Permutation.from_cycles([[x for x in reversed(c)] for c in sigma.cycles], sigma.n)
    assert count_paths_unitary(sigma, g) == count_paths_unitary(shuffled, g)


@given(st.integers(2, 6).flatmap(lambda n: st.sampled_from(list(all_permutations(n)))), st.integers(0, 2))
def test_counts_satisfy_one_step_recursion(sigma, g):
    # paths from sigma split by their first edge
    n, budget = sigma.n, norm(sigma) + 2 * g
    counter = UnitaryPathCounter()
    total = sum(counter.paths(nxt, budget - 1) for kind, nxt in unitary_successors(sigma) if kind == "solid" and budget)
    if sigma.fixes(n):
        total += counter.paths(sigma.restrict(), budget)
    assert counter.paths(sigma, budget) == total


def test_csv_dump():
    text = dump_csv(CSV_HEADER_UNITARY, unitary_count_rows(2, 1))
    assert text == "class,g,count\n2,0,1\n2,1,1\n\"1,1\",0,1\n\"1,1\",1,1\n"
