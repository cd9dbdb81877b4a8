"""Pairings (perfect matchings) of ``{1, ..., 2n}`` and their coset types.

A pairing is stored as an involution without fixed points: ``partner[k - 1]``
is the point matched with ``k``. The canonical pairing pairs ``2i - 1`` with
``2i``; its edges are the *blue* edges of the coset graph, and the edges of
the pairing itself are the *red* ones. Every component of the union is an
alternating cycle of even size ``2m``; halving the sizes gives the coset type.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Literal

from .perm import ParseError, Partition, Permutation

MoveKind = Literal["split", "preserve", "merge"]


def _blue(k: int) -> int:
    """Partner of ``k`` in the canonical pairing."""
    return k + 1 if k % 2 else k - 1


@dataclass(frozen=True)
class Pairing:
    partner: tuple[int, ...]

    def __post_init__(self):
        partner = tuple(int(x) for x in self.partner)
        size = len(partner)
        if size % 2:
            raise ValueError("a pairing needs an even number of points")
        for k, p in enumerate(partner, start=1):
            if not 1 <= p <= size or p == k or partner[p - 1] != k:
                raise ValueError(f"not a fixed-point-free involution: {partner}")
        object.__setattr__(self, "partner", partner)

    # constructors -----------------------------------------------------------

    @classmethod
    def from_pairs(cls, pairs, n: int | None = None) -> Pairing:
        pairs = [tuple(p) for p in pairs]
        size = 2 * n if n is not None else 2 * len(pairs)
        partner = [0] * size
        for a, b in pairs:
            if not (1 <= a <= size and 1 <= b <= size) or a == b:
                raise ValueError(f"bad pair {{{a}, {b}}} for 2n = {size}")
            if partner[a - 1] or partner[b - 1]:
                raise ValueError(f"point repeated in pairs {pairs}")
            partner[a - 1], partner[b - 1] = b, a
        if 0 in partner:
            raise ValueError(f"pairs do not cover 1..{size}")
        return cls(tuple(partner))

    @classmethod
    def canonical(cls, n: int) -> Pairing:
        return cls(tuple(_blue(k) for k in range(1, 2 * n + 1)))

    @classmethod
    def parse(cls, text: str) -> Pairing:
        """Parse ``"{1-2, 3-7, 4-6, 5-8}"``; braces and whitespace are optional."""
        body_start = 0
        stripped = text.strip()
        if stripped in ("", "{}", "∅"):
            return cls(())
        lead = len(text) - len(text.lstrip())
        if stripped.startswith("{"):
            if not stripped.endswith("}"):
                raise ParseError("missing closing brace", text, len(text.rstrip()))
            body_start = lead + 1
            body = stripped[1:-1]
        else:
            body_start = lead
            body = stripped
        pairs = []
        seen: set[int] = set()
        pos = body_start
        for chunk in body.split(","):
            m = re.fullmatch(r"\s*(\d+)\s*-\s*(\d+)\s*", chunk)
            if m is None:
                raise ParseError("expected a pair 'a-b'", text, pos + len(chunk) - len(chunk.lstrip()))
            for g in (1, 2):
                value = int(m.group(g))
                col = pos + m.start(g)
                if value in seen or value < 1:
                    raise ParseError(f"point {value} invalid or repeated", text, col)
                seen.add(value)
            pairs.append((int(m.group(1)), int(m.group(2))))
            pos += len(chunk) + 1
        if sorted(seen) != list(range(1, len(seen) + 1)):
            missing = min(set(range(1, len(seen) + 1)) - seen)
            raise ParseError(f"pairs do not cover 1..{len(seen)} (missing {missing})", text, len(text))
        return cls.from_pairs(pairs)

    # protocol ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.partner) // 2

    def __call__(self, k: int) -> int:
        return self.partner[k - 1]

    def pairs(self) -> list[tuple[int, int]]:
        return [(k, p) for k, p in enumerate(self.partner, start=1) if k < p]

    def __str__(self) -> str:
        return "{" + ", ".join(f"{a}-{b}" for a, b in self.pairs()) + "}"

    def as_permutation(self) -> Permutation:
        return Permutation(self.partner)

    def is_canonical(self) -> bool:
        return all(p == _blue(k) for k, p in enumerate(self.partner, start=1))

    def has_top_pair(self) -> bool:
        return self.n > 0 and self.partner[-1] == 2 * self.n - 1

    def restrict(self) -> Pairing:
        """Drop the pair ``{2n - 1, 2n}``, which must be present."""
        if not self.has_top_pair():
            raise ValueError(f"{self} does not contain the top pair")
        return Pairing(self.partner[:-2])

    # action and coset structure --------------------------------------------

    def relabel(self, sigma: Permutation) -> Pairing:
        """``sigma.pi``: replace every pair ``{a, b}`` by ``{sigma(a), sigma(b)}``."""
        if sigma.n != 2 * self.n:
            raise ValueError("degree mismatch")
        partner = [0] * (2 * self.n)
        for a, b in enumerate(self.partner, start=1):
            partner[sigma(a) - 1] = sigma(b)
        return Pairing(tuple(partner))

    def act(self, i: int) -> Pairing:
        """Apply the transposition ``(i 2n-1)`` to the labels; requires ``i < 2n - 1``."""
        top = 2 * self.n - 1
        if not 1 <= i < top:
            raise IndexError(f"transposition ({i} {top}) out of range")

        def swap(k: int) -> int:
            return top if k == i else i if k == top else k

        partner = [0] * (2 * self.n)
        for a, b in enumerate(self.partner, start=1):
            partner[swap(a) - 1] = swap(b)
        return Pairing(tuple(partner))

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Vertex sets of the coset graph components, each sorted, ordered by minimum."""
        size = 2 * self.n
        parent = list(range(size + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for k in range(1, size + 1):
            union(k, _blue(k))
            union(k, self.partner[k - 1])
        groups: dict[int, list[int]] = {}
        for k in range(1, size + 1):
            groups.setdefault(find(k), []).append(k)
        return tuple(tuple(g) for _, g in sorted(groups.items()))

    @cached_property
    def coset_type(self) -> Partition:
        return Partition.from_parts(len(c) // 2 for c in self.components)

    @property
    def norm(self) -> int:
        return self.n - self.coset_type.length

    def walk(self) -> tuple[int, ...]:
        """The alternating cycle through ``2n - 1``, red edge first.

        Returns ``(2n-1, i_1, ..., i_{2m-1})``; the last entry is always ``2n``.
        """
        start = 2 * self.n - 1
        out = [start]
        v = self.partner[start - 1]
        red_next = False
        while v != start:
            out.append(v)
            v = self.partner[v - 1] if red_next else _blue(v)
            red_next = not red_next
        return tuple(out)

    def classify(self, i: int) -> MoveKind:
        """How ``(i 2n-1)`` changes the number of coset components."""
        delta = self.act(i).coset_type.length - self.coset_type.length
        if delta == 1:
            return "split"
        if delta == 0:
            return "preserve"
        if delta == -1:
            return "merge"
        raise AssertionError(f"component count jumped by {delta}")

    def split_targets(self) -> list[tuple[int, tuple[int, int]]]:
        """Split moves along the walk through ``2n - 1``.

        For ``j = 1..m-1`` the move ``(i_{2j} 2n-1)`` splits the component of
        size ``2m``. Each entry is ``(i_{2j}, (a, b))`` with ``a`` the half-size
        of the new component holding ``2n - 1`` and ``b`` the other one, both
        read off the resulting pairing rather than from an index formula.
        """
        if self.has_top_pair():
            return []
        w = self.walk()
        m = len(w) // 2
        top = 2 * self.n - 1
        out = []
        for j in range(1, m):
            target = w[2 * j]
            after = self.act(target)
            comps = after.components
            holder = next(c for c in comps if top in c)
            rest = set(w) - set(holder)
            other = next(c for c in comps if rest and rest.issubset(c))
            out.append((target, (len(holder) // 2, len(other) // 2)))
        return out


def coset_type_via_permutation(pi: Pairing) -> Partition:
    """Coset type from the cycle type of ``pi * e``: every part appears twice there."""
    e = Pairing.canonical(pi.n).as_permutation()
    prod = pi.as_permutation() * e
    counts: dict[int, int] = {}
    for c in prod.cycles:
        counts[len(c)] = counts.get(len(c), 0) + 1
    parts = []
    for length, mult in counts.items():
        if mult % 2:
            raise AssertionError("cycles of pi*e must come in pairs")
        parts.extend([length] * (mult // 2))
    return Partition.from_parts(parts)


def all_pairings(n: int) -> Iterator[Pairing]:
    """All ``(2n-1)!!`` pairings of ``1..2n``."""

    def rec(free: list[int], partner: list[int]):
        if not free:
            yield Pairing(tuple(partner))
            return
        a = free[0]
        for idx in range(1, len(free)):
            b = free[idx]
            partner[a - 1], partner[b - 1] = b, a
            yield from rec(free[1:idx] + free[idx + 1 :], partner)
        partner[a - 1] = 0

    yield from rec(list(range(1, 2 * n + 1)), [0] * (2 * n))


def coset_representative(mu: Partition) -> Pairing:
    """A pairing of coset type ``mu`` with its largest component on the top blocks."""
    n = mu.size
    partner = [0] * (2 * n)
    block = 1
    for part in reversed(mu.parts):
        blocks = list(range(block, block + part))
        for b, b_next in zip(blocks, blocks[1:] + blocks[:1]):
            x, y = 2 * b, 2 * b_next - 1
            partner[x - 1], partner[y - 1] = y, x
        block += part
    return Pairing(tuple(partner))


def uniform_coset_sample(mu: Partition, rng) -> Pairing:
    """Uniform draw from the pairings of coset type ``mu``.

    The pairings of a fixed coset type form one orbit of the hyperoctahedral
    group (permute the blue blocks, flip within blocks), so relabelling a fixed
    representative by a uniform element of that group is uniform on the orbit.
    """
    n = mu.size
    order = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        order[i], order[j] = order[j], order[i]
    images = [0] * (2 * n)
    for b, target in enumerate(order, start=1):
        flip = rng.below(2)
        lo, hi = 2 * target - 1, 2 * target
        if flip:
            lo, hi = hi, lo
        images[2 * b - 2], images[2 * b - 1] = lo, hi
    return coset_representative(mu).relabel(Permutation(tuple(images)))
