"""Exact Weingarten values.

Two independent routes are provided for the unitary group:

* :func:`wg_unitary_gram` inverts the Gram matrix ``N^{#cycles(sigma^-1 tau)}``
  (restricted to class functions, or in full for small degree);
* :func:`wg_unitary_recursion` solves the class-level loop equation
  ``Wg(sigma) = N^-1 [sigma fixes k] Wg(sigma restricted) - N^-1 sum_{i<k} Wg((i k) sigma)``
  level by level.

They must agree exactly; the test suite checks this. Orthogonal values come
from the Gram matrix over pairings, symplectic magnitudes from the orthogonal
values at ``2N``. Series evaluations pair a partial sum of path counts with a
tail bound that only uses the trivial cap of ``2n`` choices per edge.

Tables hold one value per class (cycle type or coset type) for every level
``0..n``; level 0 holds the value 1 on the empty partition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations as _iter_perms
from typing import Mapping

from .graph import (
    OrthogonalPathCounter,
    UnitaryPathCounter,
    count_paths_orthogonal_total,
    count_paths_unitary,
)
from .linalg import SingularMatrixError, solve, solve_sparse
from .pairing import Pairing, all_pairings, coset_representative
from .perm import Partition, Permutation, catalan, cycle_type, moebius, norm, partitions

Rational = int | Fraction

UNITARY_GRAM_CAP = 7
ORTHOGONAL_GRAM_CAP = 4  # half the number of points, i.e. 2n <= 8
UNITARY_FULL_GRAM_CAP = 5
# p(28) = 3718 unknowns is the last level the lifting solver accepts
UNITARY_RECURSION_CAP = 28

EMPTY = Partition(())


class CapExceededError(ValueError):
    """Requested size is beyond what the chosen engine supports."""


def as_fraction(value: Rational | str) -> Fraction:
    """Exact rational from an int, Fraction or ``"p"``/``"p/q"`` string; floats are refused."""
    if isinstance(value, float):
        raise TypeError("floating-point input is not accepted; pass an int, Fraction or 'p/q'")
    return Fraction(value)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if not text or any(c in text for c in ".eE"):
        raise ValueError(f"expected 'p' or 'p/q', got {text!r}")
    value = Fraction(text)
    return value


# --------------------------------------------------------------------------
# Tables
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WgTable:
    """Class values of a Weingarten function at a fixed ``N`` for all levels ``0..n``.

    ``group`` is ``"U"``, ``"O"`` or ``"SP"``. Symplectic tables store
    magnitudes only; their sign is unresolved and reported as ``"±"``.
    """

    group: str
    N: Fraction
    n: int
    values: Mapping[Partition, Fraction] = field(hash=False)

    def __getitem__(self, lam: Partition | str) -> Fraction:
        if isinstance(lam, str):
            lam = Partition.parse(lam)
        return self.values[lam]

    def level(self, k: int) -> dict[Partition, Fraction]:
        return {lam: v for lam, v in self.values.items() if lam.size == k}

    @property
    def sign_resolved(self) -> bool:
        return self.group != "SP"

    def records(self) -> list[dict]:
        out = []
        for lam in sorted(self.values, key=lambda p: (p.size, [-x for x in p.parts])):
            rec = {
                "group": self.group,
                "N": format_fraction(self.N),
                "level": lam.size,
                "partition": str(lam),
                "value": format_fraction(self.values[lam]),
            }
            if not self.sign_resolved:
                rec["sign"] = "±"
            out.append(rec)
        return out

    def to_json(self) -> str:
        return json.dumps(self.records(), indent=1, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> WgTable:
        recs = json.loads(text)
        if not recs:
            raise ValueError("empty table")
        group = recs[0]["group"]
        N = parse_fraction(recs[0]["N"])
        values = {}
        for r in recs:
            if r["group"] != group or parse_fraction(r["N"]) != N:
                raise ValueError("mixed tables in one document")
            lam = Partition.parse(r["partition"])
            if lam.size != r["level"]:
                raise ValueError(f"level {r['level']} does not match partition {lam}")
            values[lam] = parse_fraction(r["value"])
        return cls(group, N, max(lam.size for lam in values), values)

    def __eq__(self, other):
        if not isinstance(other, WgTable):
            return NotImplemented
        return (self.group, self.N, self.n, dict(self.values)) == (other.group, other.N, other.n, dict(other.values))


# --------------------------------------------------------------------------
# Unitary: Gram oracle
# --------------------------------------------------------------------------


def _check_N(N: Fraction):
    if N == 0:
        raise ValueError("N must be nonzero")


def _unitary_gram_level_reduced(k: int, N: Fraction) -> dict[Partition, Fraction]:
    lams = partitions(k)
    index = {lam: j for j, lam in enumerate(lams)}
    reps = [lam.representative() for lam in lams]
    powers = [N**c for c in range(k + 1)]
    matrix = [[Fraction(0)] * len(lams) for _ in lams]
    for images in _iter_perms(range(1, k + 1)):
        tau = Permutation(images)
        col = index[cycle_type(tau)]
        for row, sigma in enumerate(reps):
            matrix[row][col] += powers[(sigma.inverse() * tau).num_cycles]
    rhs = [1 if lam.length == k else 0 for lam in lams]
    sol = solve(matrix, rhs)
    return dict(zip(lams, sol))


def _unitary_gram_level_full(k: int, N: Fraction) -> dict[Partition, Fraction]:
    perms = [Permutation(p) for p in _iter_perms(range(1, k + 1))]
    inverses = [p.inverse() for p in perms]
    matrix = [[N ** (inv * tau).num_cycles for tau in perms] for inv in inverses]
    rhs = [1 if norm(p) == 0 else 0 for p in perms]
    sol = solve(matrix, rhs)
    out: dict[Partition, Fraction] = {}
    for p, v in zip(perms, sol):
        lam = cycle_type(p)
        if lam in out and out[lam] != v:
            raise AssertionError(f"Gram solution is not constant on class {lam}")
        out[lam] = v
    return out


def wg_unitary_gram(n: int, N: Rational | str, full: bool = False) -> WgTable:
    """Unitary values from the Gram matrix, for levels ``0..n``.

    With ``full=True`` the whole ``k! x k!`` system is solved (``n <= 5``);
    otherwise it is restricted to class functions, which is exact because
    the Gram matrix commutes with conjugation.
    """
    N = as_fraction(N)
    _check_N(N)
    cap = UNITARY_FULL_GRAM_CAP if full else UNITARY_GRAM_CAP
    if n > cap:
        raise CapExceededError(f"Gram oracle is capped at n = {cap}")
    values: dict[Partition, Fraction] = {EMPTY: Fraction(1)}
    solver = _unitary_gram_level_full if full else _unitary_gram_level_reduced
    for k in range(1, n + 1):
        values.update(solver(k, N))
    return WgTable("U", N, n, values)


# --------------------------------------------------------------------------
# Unitary: class-level recursion
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def transition_counts(lam: Partition) -> tuple[tuple[Partition, int], ...]:
    """Cycle types of ``(i k) sigma_lam`` for ``i < k`` with multiplicities.

    ``sigma_lam`` is :meth:`Partition.representative`, whose largest cycle
    contains the top point ``k``.
    """
    k = lam.size
    sigma = lam.representative()
    counts: dict[Partition, int] = {}
    for i in range(1, k):
        mu = cycle_type(sigma.left_transpose(i, k))
        counts[mu] = counts.get(mu, 0) + 1
    return tuple(sorted(counts.items()))


def wg_unitary_recursion(n: int, N: Rational | str) -> WgTable:
    """Unitary values by solving the loop equation one level at a time.

    At level ``k`` the unknowns are the ``p(k)`` class values; the equation for
    class ``lam`` reads ``N w_lam + sum_i w_{type((i k) sigma_lam)} = [lam = 1^k] Wg(id_{k-1})``.
    """
    N = as_fraction(N)
    _check_N(N)
    if n > UNITARY_RECURSION_CAP:
        raise CapExceededError(f"recursion is capped at n = {UNITARY_RECURSION_CAP}")
    values: dict[Partition, Fraction] = {EMPTY: Fraction(1)}
    previous_identity = Fraction(1)
    a, b = N.numerator, N.denominator
    for k in range(1, n + 1):
        # rows scaled by the denominator of N; the forcing term enters linearly,
        # so solve with forcing b and rescale by Wg(id_{k-1}) afterwards
        lams = partitions(k)
        index = {lam: j for j, lam in enumerate(lams)}
        rows = []
        rhs = []
        for row, lam in enumerate(lams):
            entries = {row: a}
            for mu, mult in transition_counts(lam):
                col = index[mu]
                entries[col] = entries.get(col, 0) + b * mult
            rows.append([(c, v) for c, v in sorted(entries.items()) if v])
            rhs.append(b if lam.length == k else 0)
        try:
            sol = solve_sparse(rows, rhs)
        except SingularMatrixError as exc:
            raise SingularMatrixError(f"level {k} system is singular at N = {N}") from exc
        level = {lam: previous_identity * v for lam, v in zip(lams, sol)}
        values.update(level)
        previous_identity = level[Partition((1,) * k)]
    return WgTable("U", N, n, values)


def wg_full_cycle(n: int, N: Rational | str) -> Fraction:
    """Closed form for the ``n``-cycle: ``(-1)^{n-1} Cat(n-1) / prod_{|j|<n} (N + j)``."""
    N = as_fraction(N)
    if n < 1:
        raise ValueError("n must be positive")
    denom = Fraction(1)
    for j in range(-(n - 1), n):
        factor = N + j
        if factor == 0:
            raise ZeroDivisionError(f"N = {N} is a pole of the full-cycle formula for n = {n}")
        denom *= factor
    sign = -1 if (n - 1) % 2 else 1
    return sign * catalan(n - 1) / denom


# --------------------------------------------------------------------------
# Unitary: path series
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesResult:
    """A partial sum of the normalised path series and a bound on what is left."""

    partial: Fraction
    tail: Fraction
    terms: tuple[int, ...]

    def brackets(self, value: Fraction) -> bool:
        return abs(value - self.partial) <= self.tail


def wg_unitary_series(
    sigma: Permutation, N: Rational | str, g_max: int, counter: UnitaryPathCounter | None = None
) -> SeriesResult:
    """``sum_{g<=g_max} |P(sigma, |sigma|+2g)| N^{-2g}`` and its tail bound.

    The full sum equals ``(-1)^{|sigma|} N^{n+|sigma|} Wg(sigma)``. The tail uses
    ``|P(sigma, |sigma|+2g)| <= (2n)^{n+|sigma|+2g}``, geometric with ratio ``4n^2/N^2``.
    """
    N = as_fraction(N)
    n, s = sigma.n, norm(sigma)
    ratio = Fraction(4 * n * n) / (N * N)
    if ratio >= 1:
        raise ValueError(f"tail bound needs N^2 > 4n^2 (n = {n}, N = {N})")
    terms = tuple(count_paths_unitary(sigma, g, counter) for g in range(g_max + 1))
    partial = sum((Fraction(c) / N ** (2 * g) for g, c in enumerate(terms)), Fraction(0))
    tail = Fraction((2 * n) ** (n + s)) * ratio ** (g_max + 1) / (1 - ratio)
    return SeriesResult(partial, tail, terms)


def normalized_unitary(table: WgTable, lam: Partition) -> Fraction:
    """``(-1)^{|sigma|} N^{n+|sigma|} Wg(sigma)`` for ``sigma`` of type ``lam``."""
    sign = -1 if lam.norm % 2 else 1
    return sign * table.N ** (lam.size + lam.norm) * table[lam]


# --------------------------------------------------------------------------
# Orthogonal and symplectic
# --------------------------------------------------------------------------


def joint_loops(pi: Pairing, rho: Pairing) -> int:
    """Number of components of the union of the edges of two pairings."""
    size = 2 * pi.n
    seen = [False] * (size + 1)
    loops = 0
    for start in range(1, size + 1):
        if seen[start]:
            continue
        loops += 1
        v = start
        while True:
            w = pi(v)
            seen[v] = seen[w] = True
            v = rho(w)
            if v == start:
                break
    return loops


def _orthogonal_gram_level(k: int, N: Fraction, full: bool) -> dict[Partition, Fraction]:
    pairings = list(all_pairings(k))
    types = [p.coset_type for p in pairings]
    e = Pairing.canonical(k)
    if full:
        matrix = [[N ** joint_loops(p, q) for q in pairings] for p in pairings]
        rhs = [1 if p == e else 0 for p in pairings]
        sol = solve(matrix, rhs)
        out: dict[Partition, Fraction] = {}
        for mu, v in zip(types, sol):
            if mu in out and out[mu] != v:
                raise AssertionError(f"orthogonal Gram solution not constant on coset type {mu}")
            out[mu] = v
        return out
    lams = partitions(k)
    index = {lam: j for j, lam in enumerate(lams)}
    reps = [coset_representative(lam) for lam in lams]
    matrix = [[Fraction(0)] * len(lams) for _ in lams]
    for q, mu in zip(pairings, types):
        col = index[mu]
        for row, rep in enumerate(reps):
            matrix[row][col] += N ** joint_loops(rep, q)
    rhs = [1 if lam.length == k else 0 for lam in lams]
    return dict(zip(lams, solve(matrix, rhs)))


def wg_orthogonal_gram(n: int, N: Rational | str, full: bool = False) -> WgTable:
    """Orthogonal values by coset type from the Gram matrix ``N^{loops(pi, rho)}`` over pairings."""
    N = as_fraction(N)
    _check_N(N)
    if n > ORTHOGONAL_GRAM_CAP:
        raise CapExceededError(f"orthogonal Gram oracle is capped at 2n = {2 * ORTHOGONAL_GRAM_CAP}")
    values: dict[Partition, Fraction] = {EMPTY: Fraction(1)}
    for k in range(1, n + 1):
        values.update(_orthogonal_gram_level(k, N, full))
    return WgTable("O", N, n, values)


def wg_orthogonal_series(
    pi: Pairing, N: Rational | str, g_max: int, counter: OrthogonalPathCounter | None = None
) -> SeriesResult:
    """``sum_{g<=g_max} |P(pi, |pi|+g)| (-1/N)^g`` and its tail bound.

    The full sum equals ``(-1)^{|pi|} N^{n+|pi|} Wg^O(pi)``; the tail uses
    ``|P(pi, |pi|+g)| <= (2n)^{n+|pi|+g}``, geometric with ratio ``2n/N``.
    """
    N = as_fraction(N)
    n, s = pi.n, pi.norm
    ratio = Fraction(2 * n) / abs(N)
    if ratio >= 1:
        raise ValueError(f"tail bound needs N > 2n (n = {n}, N = {N})")
    terms = tuple(count_paths_orthogonal_total(pi, g, counter) for g in range(g_max + 1))
    partial = sum((Fraction(c) * Fraction(-1, 1) ** g / N**g for g, c in enumerate(terms)), Fraction(0))
    tail = Fraction((2 * n) ** (n + s)) * ratio ** (g_max + 1) / (1 - ratio)
    return SeriesResult(partial, tail, terms)


def normalized_orthogonal(table: WgTable, mu: Partition) -> Fraction:
    """``(-1)^{|pi|} N^{n+|pi|} Wg^O(pi)`` for ``pi`` of coset type ``mu``."""
    sign = -1 if mu.norm % 2 else 1
    return sign * table.N ** (mu.size + mu.norm) * table[mu]


def wg_symplectic(n: int, N: int | Rational | str) -> WgTable:
    """Symplectic magnitudes ``|Wg^SP_N| = |Wg^O_{2N}|`` per coset type; signs unresolved."""
    N = as_fraction(N)
    orth = wg_orthogonal_gram(n, 2 * N)
    return WgTable("SP", N, n, {mu: abs(v) for mu, v in orth.values.items()})


# --------------------------------------------------------------------------
# gamma-norm and the class-level loop operator
# --------------------------------------------------------------------------


def all_classes(n: int) -> list[Partition]:
    """The index set of class vectors: every partition of ``0..n``."""
    return [lam for r in range(n + 1) for lam in partitions(r)]


def gamma_weight(lam: Partition, gamma: Fraction, N: Fraction) -> Fraction:
    """``N^{r+|sigma|} gamma^{|sigma|} / |Moeb(sigma)|`` for ``lam`` of size ``r >= 1``."""
    return N ** (lam.size + lam.norm) * gamma**lam.norm / abs(moebius(lam))


def gamma_norm(x: Mapping[Partition, Rational], gamma: Rational, N: Rational) -> Fraction:
    """``|x_empty| + max_{lam nonempty} weight(lam) |x_lam|``, exactly."""
    gamma, N = as_fraction(gamma), as_fraction(N)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    head = abs(Fraction(x.get(EMPTY, 0)))
    sup = max(
        (gamma_weight(lam, gamma, N) * abs(Fraction(v)) for lam, v in x.items() if lam.size > 0),
        default=Fraction(0),
    )
    return head + sup


def apply_T_tilde(x: Mapping[Partition, Rational], n: int, N: Rational, identity_values: Mapping[int, Rational]) -> dict[Partition, Fraction]:
    """One step of the class-level loop operator.

    ``identity_values[k]`` is ``Wg(id_k)`` (with ``identity_values[0] = 1``); the
    operator uses it as a fixed forcing term rather than reading it from ``x``.
    """
    N = as_fraction(N)
    out: dict[Partition, Fraction] = {EMPTY: Fraction(x.get(EMPTY, 0))}
    for lam in all_classes(n):
        k = lam.size
        if k == 0:
            continue
        acc = Fraction(0)
        if lam.length == k:
            acc += Fraction(identity_values[k - 1])
        for mu, mult in transition_counts(lam):
            acc -= mult * Fraction(x.get(mu, 0))
        out[lam] = acc / N
    return out


def identity_values(table: WgTable) -> dict[int, Fraction]:
    return {k: table[Partition((1,) * k)] for k in range(table.n + 1)}
