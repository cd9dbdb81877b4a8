import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weingarten.perm import (
    ParseError,
    Partition,
    Permutation,
    all_permutations,
    catalan,
    catalan_quotient_max,
    compose,
    cycle_type,
    moebius,
    norm,
    partitions,
    partitions_upto,
    uniform_class_sample,
)
from weingarten.rng import Stream


def perms(max_n=7):
    return st.integers(0, max_n).flatmap(
        lambda n: st.permutations(list(range(1, n + 1))).map(lambda xs: Permutation(tuple(xs)))
    )


def test_partition_counts():
    # number of partitions, OEIS A000041
    assert [len(partitions(n)) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_partitions_order_starts_with_single_part():
    assert [str(p) for p in partitions(4)] == ["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]
    assert len(partitions_upto(4)) == 1 + 1 + 2 + 3 + 5


def test_class_sizes_sum_to_factorial():
    for n in range(8):
        assert sum(lam.class_size() for lam in partitions(n)) == math.factorial(n)


def test_class_sizes_match_enumeration():
    counts = {}
    for sigma in all_permutations(5):
        lam = cycle_type(sigma)
        counts[lam] = counts.get(lam, 0) + 1
    assert counts == {lam: lam.class_size() for lam in partitions(5)}


def test_catalan_values():
    assert [catalan(k) for k in range(10)] == [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]


@given(st.integers(0, 200))
def test_catalan_recursion(k):
    assert catalan(k + 1) == sum(catalan(j) * catalan(k - j) for j in range(k + 1))


def test_moebius_values():
    assert moebius(Partition.parse("1,1,1")) == 1
    assert moebius(Partition.parse("2")) == -1
    assert moebius(Partition.parse("3")) == 2
    assert moebius(Partition.parse("4")) == -5
    assert moebius(Partition.parse("3,2")) == -2
    assert moebius(Permutation.parse("(1 2 3)(4 5)")) == -2
    assert moebius(Partition(())) == 1


def test_catalan_quotient_max_small():
    # k = 3: Cat(2) / (Cat(0) Cat(1)) = 2
    assert catalan_quotient_max(3) == 2
    assert catalan_quotient_max(2) == 1
    with pytest.raises(ValueError):
        catalan_quotient_max(1)


@pytest.mark.parametrize(
    "text, parts",
    [("3,1,1", (3, 1, 1)), ("", ()), ("∅", ()), ("3, 1", (3, 1)), (" 2 ", (2,))],
)
def test_partition_parse(text, parts):
    assert Partition.parse(text).parts == parts


@pytest.mark.parametrize("text, position", [("1,3", 2), ("3,,1", 2), ("a", 0), ("3,0", 2)])
def test_partition_parse_errors_have_positions(text, position):
    with pytest.raises(ParseError) as info:
        Partition.parse(text)
    assert info.value.position == position


def test_partition_invariants():
    lam = Partition.parse("3,1,1")
    assert (lam.size, lam.length, lam.norm, lam.largest) == (5, 3, 2, 3)
    assert str(Partition(())) == "∅"


@given(st.integers(0, 12).flatmap(lambda n: st.sampled_from(partitions(n))))
def test_partition_round_trip(lam):
    assert Partition.parse(str(lam)) == lam


@given(st.integers(1, 10).flatmap(lambda n: st.sampled_from(partitions(n))))
def test_representative_has_type_and_top_point_in_largest_cycle(lam):
    sigma = lam.representative()
    assert cycle_type(sigma) == lam
    assert len(sigma.cycle_of(lam.size)) == lam.largest


def test_permutation_parse_forms():
    assert Permutation.parse("(1 2 3)(4 5)").one_line() == "2 3 1 5 4"
    assert Permutation.parse("(1 2 3)", 5).n == 5
    assert Permutation.parse("3 1 2") == Permutation((3, 1, 2))
    assert Permutation.parse("id", 3) == Permutation.identity(3)
    assert Permutation.parse("∅") == Permutation.empty()


@pytest.mark.parametrize(
    "text, n, position",
    [("id", None, 0), ("(1 2)(2 3)", None, 6), ("(1 2", None, 4), ("(1 2) x", None, 6), ("(1 5)", 3, 3), ("1 1 2", None, 2)],
)
def test_permutation_parse_errors(text, n, position):
    with pytest.raises(ParseError) as info:
        Permutation.parse(text, n)
    assert info.value.position == position


@given(perms())
def test_permutation_round_trip(sigma):
    assert Permutation.parse(str(sigma), sigma.n) == sigma
    if sigma.n:
        assert Permutation.parse(sigma.one_line()) == sigma


@given(perms(6), st.data())
def test_composition_convention(a, data):
    b = data.draw(st.permutations(list(range(1, a.n + 1))).map(lambda xs: Permutation(tuple(xs))))
    ab = compose(a, b)
    assert all(ab(i) == a(b(i)) for i in range(1, a.n + 1))
    assert a * a.inverse() == Permutation.identity(a.n)


@given(perms(7), st.data())
def test_left_transpose_is_left_multiplication(sigma, data):
    if sigma.n < 2:
        return
    i = data.draw(st.integers(1, sigma.n - 1))
    t = Permutation.transposition(i, sigma.n, sigma.n)
    assert sigma.left_transpose(i, sigma.n) == compose(t, sigma)
    # a transposition changes the norm by exactly one
    assert abs(norm(compose(t, sigma)) - norm(sigma)) == 1


@given(perms(7))
def test_norm_is_n_minus_cycles(sigma):
    assert norm(sigma) == sigma.n - sigma.num_cycles
    assert sum(len(c) for c in sigma.cycles) == sigma.n


@given(st.integers(1, 9).flatmap(lambda n: st.sampled_from(partitions(n))), st.integers(0, 1000))
def test_uniform_class_sample_lands_in_class(lam, seed):
    assert cycle_type(uniform_class_sample(lam, Stream(seed))) == lam


def test_uniform_class_sample_covers_class():
    lam = Partition.parse("2,1,1")
    seen = {uniform_class_sample(lam, Stream(3, i)) for i in range(400)}
    assert len(seen) == lam.class_size()
