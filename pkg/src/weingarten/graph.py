"""Weingarten graphs and exact path counts.

Unitary graph: vertices are permutations of all degrees. From ``sigma`` in
``S_n`` there is a solid edge to ``(i n) * sigma`` for every ``i < n`` and, if
``sigma`` fixes ``n``, a dashed edge to its restriction in ``S_{n-1}``. The
empty permutation is the sink.

Orthogonal graph: vertices are pairings. From ``pi`` on ``2n`` points there is
a solid edge for each ``i < 2n - 1`` to the relabelled pairing ``(i 2n-1).pi``
(for one ``i`` this is a loop) and a dashed edge dropping ``{2n-1, 2n}`` when
that pair is present.

Counting is single-threaded: each counter owns a plain dict memo and must not
be shared between threads without external locking.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Sequence

from .pairing import Pairing, coset_representative
from .perm import Partition, Permutation, norm

EdgeKind = Literal["solid", "dashed"]

UNITARY_DEGREE_CAP = 8
ORTHOGONAL_POINTS_CAP = 10
DEFAULT_SOLID_CAP = 40


class EnumerationCapError(ValueError):
    """The requested count lies beyond the enumeration caps."""


# --------------------------------------------------------------------------
# Unitary graph
# --------------------------------------------------------------------------


def unitary_successors(sigma: Permutation) -> list[tuple[EdgeKind, Permutation]]:
    """Out-edges of ``sigma``: the ``n - 1`` solid edges, then the dashed one if present."""
    n = sigma.n
    if n == 0:
        return []
    out: list[tuple[EdgeKind, Permutation]] = [
        ("solid", sigma.left_transpose(i, n)) for i in range(1, n)
    ]
    if sigma.fixes(n):
        out.append(("dashed", sigma.restrict()))
    return out


class UnitaryPathCounter:
    """Memoised ``|P(sigma, l)|``: paths to the sink using exactly ``l`` solid edges."""

    def __init__(self, degree_cap: int = UNITARY_DEGREE_CAP, solid_cap: int = DEFAULT_SOLID_CAP):
        self.degree_cap = degree_cap
        self.solid_cap = solid_cap
        self._memo: dict[tuple[tuple[int, ...], int], int] = {}

    def paths(self, sigma: Permutation, solid: int) -> int:
        if sigma.n > self.degree_cap:
            raise EnumerationCapError(f"degree {sigma.n} exceeds cap {self.degree_cap}")
        if solid > self.solid_cap:
            raise EnumerationCapError(f"solid budget {solid} exceeds cap {self.solid_cap}")
        return self._count(sigma.images, solid)

    def count(self, sigma: Permutation, g: int) -> int:
        """``|P(sigma, |sigma| + 2g)|``."""
        if g < 0:
            raise ValueError("g must be nonnegative")
        return self.paths(sigma, norm(sigma) + 2 * g)

    def _count(self, images: tuple[int, ...], solid: int) -> int:
        n = len(images)
        if n == 0:
            return 1 if solid == 0 else 0
        key = (images, solid)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        sigma = Permutation(images)
        excess = solid - norm(sigma)
        if excess < 0 or excess % 2:
            self._memo[key] = 0
            return 0
        total = 0
        if solid > 0:
            for i in range(1, n):
                total += self._count(sigma.left_transpose(i, n).images, solid - 1)
        if images[-1] == n:
            total += self._count(images[:-1], solid)
        self._memo[key] = total
        return total


_default_unitary = UnitaryPathCounter()


def count_paths_unitary(sigma: Permutation, g: int, counter: UnitaryPathCounter | None = None) -> int:
    """``|P(sigma, |sigma| + 2g)|`` using a shared module-level memo by default."""
    return (counter or _default_unitary).count(sigma, g)


def count_paths_unitary_class(lam: Partition, g: int, counter: UnitaryPathCounter | None = None) -> int:
    return count_paths_unitary(lam.representative(), g, counter)


def single_defect_ratio(lam: Partition, counter: UnitaryPathCounter | None = None) -> Fraction:
    """``|P(sigma, |sigma|+2)| / |P(sigma, |sigma|)|`` for ``sigma`` of type ``lam``."""
    if lam.size > 7:
        raise EnumerationCapError("single-defect ratios are enumerated only up to degree 7")
    sigma = lam.representative()
    base = count_paths_unitary(sigma, 0, counter)
    return Fraction(count_paths_unitary(sigma, 1, counter), base)


def minimal_paths_unitary(sigma: Permutation) -> Iterator[tuple[Permutation, ...]]:
    """Every path in ``P(sigma, |sigma|)`` as its sequence of vertices, sink included."""

    def rec(state: Permutation, prefix: list[Permutation]):
        prefix.append(state)
        if state.n == 0:
            yield tuple(prefix)
        else:
            here = norm(state)
            for kind, nxt in unitary_successors(state):
                if kind == "dashed" or norm(nxt) == here - 1:
                    yield from rec(nxt, prefix)
        prefix.pop()

    yield from rec(sigma, [])


# --------------------------------------------------------------------------
# Orthogonal graph
# --------------------------------------------------------------------------


def orthogonal_successors(pi: Pairing) -> list[tuple[EdgeKind, Pairing]]:
    """Out-edges of ``pi``, one solid edge per ``i < 2n - 1`` (loops included)."""
    n = pi.n
    if n == 0:
        return []
    out: list[tuple[EdgeKind, Pairing]] = [("solid", pi.act(i)) for i in range(1, 2 * n - 1)]
    if pi.has_top_pair():
        out.append(("dashed", pi.restrict()))
    return out


class OrthogonalPathCounter:
    """Memoised ``|P(pi, g1, g2)|``: ``g1`` coset-preserving and ``g2`` merging solid edges."""

    def __init__(self, points_cap: int = ORTHOGONAL_POINTS_CAP, solid_cap: int = DEFAULT_SOLID_CAP):
        self.points_cap = points_cap
        self.solid_cap = solid_cap
        self._memo: dict[tuple[tuple[int, ...], int, int], int] = {}
        self._moves: dict[tuple[int, ...], tuple[list[tuple[int, ...]], ...]] = {}

    def count(self, pi: Pairing, g1: int, g2: int) -> int:
        if g1 < 0 or g2 < 0:
            raise ValueError("defect counts must be nonnegative")
        if 2 * pi.n > self.points_cap:
            raise EnumerationCapError(f"2n = {2 * pi.n} exceeds cap {self.points_cap}")
        if pi.norm + g1 + 2 * g2 > self.solid_cap:
            raise EnumerationCapError("solid budget exceeds cap")
        return self._count(pi.partner, g1, g2)

    def count_total(self, pi: Pairing, g: int) -> int:
        """``|P(pi, |pi| + g)|``: all paths with ``g1 + 2 g2 = g``."""
        return sum(self.count(pi, g - 2 * g2, g2) for g2 in range(g // 2 + 1))

    def _split_moves(self, partner: tuple[int, ...]):
        cached = self._moves.get(partner)
        if cached is not None:
            return cached
        pi = Pairing(partner)
        ell = pi.coset_type.length
        split, keep, merge = [], [], []
        for i in range(1, 2 * pi.n - 1):
            nxt = pi.act(i)
            delta = nxt.coset_type.length - ell
            (split if delta == 1 else keep if delta == 0 else merge).append(nxt.partner)
        self._moves[partner] = (split, keep, merge)
        return split, keep, merge

    def _count(self, partner: tuple[int, ...], g1: int, g2: int) -> int:
        if not partner:
            return 1 if g1 == 0 and g2 == 0 else 0
        key = (partner, g1, g2)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        split, keep, merge = self._split_moves(partner)
        total = 0
        for nxt in split:
            total += self._count(nxt, g1, g2)
        if g1:
            for nxt in keep:
                total += self._count(nxt, g1 - 1, g2)
        if g2:
            for nxt in merge:
                total += self._count(nxt, g1, g2 - 1)
        size = len(partner)
        if partner[-1] == size - 1:
            total += self._count(partner[:-2], g1, g2)
        self._memo[key] = total
        return total


_default_orthogonal = OrthogonalPathCounter()


def count_paths_orthogonal(pi: Pairing, g1: int, g2: int, counter: OrthogonalPathCounter | None = None) -> int:
    return (counter or _default_orthogonal).count(pi, g1, g2)


def count_paths_orthogonal_total(pi: Pairing, g: int, counter: OrthogonalPathCounter | None = None) -> int:
    return (counter or _default_orthogonal).count_total(pi, g)


def orthogonal_defect_ratios(mu: Partition, counter: OrthogonalPathCounter | None = None) -> tuple[Fraction, Fraction]:
    """``(|P(pi,1,0)|, |P(pi,0,1)|) / |P(pi,0,0)|`` for a pairing of coset type ``mu``."""
    pi = coset_representative(mu)
    base = count_paths_orthogonal(pi, 0, 0, counter)
    return (
        Fraction(count_paths_orthogonal(pi, 1, 0, counter), base),
        Fraction(count_paths_orthogonal(pi, 0, 1, counter), base),
    )


def minimal_paths_orthogonal(pi: Pairing) -> Iterator[tuple[Pairing, ...]]:
    """Every path in ``P(pi, 0, 0)`` as its vertex sequence, sink included."""

    def rec(state: Pairing, prefix: list[Pairing]):
        prefix.append(state)
        if state.n == 0:
            yield tuple(prefix)
        else:
            here = state.norm
            for kind, nxt in orthogonal_successors(state):
                if kind == "dashed" or nxt.norm == here - 1:
                    yield from rec(nxt, prefix)
        prefix.pop()

    yield from rec(pi, [])


# --------------------------------------------------------------------------
# Dumps
# --------------------------------------------------------------------------

CSV_HEADER_UNITARY = ("class", "g", "count")
CSV_HEADER_ORTHOGONAL = ("pairing", "g1", "g2", "count")


def unitary_count_rows(n: int, g_max: int, counter: UnitaryPathCounter | None = None) -> list[tuple[str, int, int]]:
    from .perm import partitions

    return [
        (str(lam), g, count_paths_unitary_class(lam, g, counter))
        for lam in partitions(n)
        for g in range(g_max + 1)
    ]


def orthogonal_count_rows(pairings: Iterable[Pairing], g_max: int, counter: OrthogonalPathCounter | None = None):
    return [
        (str(pi), g1, g2, count_paths_orthogonal(pi, g1, g2, counter))
        for pi in pairings
        for g1 in range(g_max + 1)
        for g2 in range(g_max + 1 - g1)
    ]


def dump_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()
