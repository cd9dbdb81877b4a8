"""Permutations, partitions and the Catalan/Moebius combinatorics built on them.

Conventions
-----------
* Points are labelled ``1..n``.
* A :class:`Permutation` stores its one-line images: ``images[i - 1] == sigma(i)``.
* Composition is right-to-left: ``(a * b)(i) == a(b(i))``.
* The empty permutation (``n == 0``) stands for the bottom vertex of the
  Weingarten graph.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class ParseError(ValueError):
    """Raised by the text parsers; ``position`` is a 0-based column in the input."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at column {position}: {text!r}")
        self.text = text
        self.position = position


# --------------------------------------------------------------------------
# Partitions
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> Partition:
        """Build a partition from parts in any order."""
        return cls(tuple(sorted((int(p) for p in parts), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> Partition:
        """Parse ``"3,1,1"``; the empty string or ``"∅"`` is the empty partition."""
        stripped = text.strip()
        if stripped in ("", "∅", "()"):
            return cls(())
        parts = []
        pos = 0
        for token in text.split(","):
            offset = len(token) - len(token.lstrip())
            body = token.strip()
            if not body.isdigit() or int(body) < 1:
                raise ParseError("expected a positive integer part", text, pos + offset)
            value = int(body)
            if parts and value > parts[-1]:
                raise ParseError("parts must be weakly decreasing", text, pos + offset)
            parts.append(value)
            pos += len(token) + 1
        return cls(tuple(parts))

    def __str__(self) -> str:
        return ",".join(map(str, self.parts)) if self.parts else "∅"

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, index):
        return self.parts[index]

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        """Number of parts, written ell(lambda)."""
        return len(self.parts)

    @property
    def norm(self) -> int:
        """``size - length``: the norm of any permutation of this cycle type."""
        return self.size - self.length

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    def multiplicities(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for p in self.parts:
            counts[p] = counts.get(p, 0) + 1
        return counts

    def class_size(self) -> int:
        """Number of permutations of ``S_size`` with this cycle type."""
        denom = 1
        for part, mult in self.multiplicities().items():
            denom *= part**mult * math.factorial(mult)
        return math.factorial(self.size) // denom

    def representative(self) -> Permutation:
        """A permutation of this type whose largest cycle contains the top point.

        Cycles are laid out on consecutive labels, largest cycle last, so the
        top label ``size`` sits in a largest cycle.
        """
        n = self.size
        images = [0] * n
        start = 1
        for part in reversed(self.parts):
            block = list(range(start, start + part))
            for a, b in zip(block, block[1:] + block[:1]):
                images[a - 1] = b
            start += part
        return Permutation(tuple(images))


def partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse lexicographic order, ``(n)`` first."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: list[int]):
        if remaining == 0:
            out.append(Partition(tuple(prefix)))
            return
        for part in range(min(remaining, cap), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def partitions_upto(n: int) -> list[Partition]:
    """All partitions of sizes ``0..n``; the index set of class-level tables."""
    return [lam for r in range(n + 1) for lam in partitions(r)]


# --------------------------------------------------------------------------
# Permutations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{1, ..., n}`` in one-line form."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a bijection of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    # constructors -----------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def empty(cls) -> Permutation:
        return cls(())

    @classmethod
    def transposition(cls, i: int, j: int, n: int) -> Permutation:
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise ValueError(f"invalid transposition ({i} {j}) in S_{n}")
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None) -> Permutation:
        cycles = [tuple(c) for c in cycles]
        points = [p for c in cycles for p in c]
        if len(points) != len(set(points)):
            raise ValueError(f"cycles are not disjoint: {cycles}")
        if n is None:
            n = max(points, default=0)
        images = list(range(1, n + 1))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                if not 1 <= a <= n:
                    raise ValueError(f"point {a} outside 1..{n}")
                images[a - 1] = b
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> Permutation:
        """Parse cycle notation ``"(1 2 3)(4 5)"``, one-line ``"3 1 2"`` or ``"id3"``.

        Cycle notation needs ``n`` when the top points are fixed; it defaults to
        the largest label mentioned.
        """
        stripped = text.strip()
        if stripped == "∅":
            return cls.empty()
        m = re.fullmatch(r"id(\d+)", stripped)
        if m:
            degree = int(m.group(1))
            if n is not None and n != degree:
                raise ParseError(f"degree {degree} conflicts with n = {n}", text, text.index("id") + 2)
            return cls.identity(degree)
        if stripped.startswith("(") or stripped in ("", "id", "e"):
            return cls._parse_cycles(text, n)
        return cls._parse_one_line(text, n)

    @classmethod
    def _parse_cycles(cls, text: str, n: int | None) -> Permutation:
        stripped = text.strip()
        if stripped in ("", "id", "e", "()"):
            if n is None:
                raise ParseError("identity needs an explicit degree", text, 0)
            return cls.identity(n)
        cycles: list[list[int]] = []
        seen: dict[int, int] = {}
        pos = 0
        for m in re.finditer(r"\s*\(([^()]*)\)\s*|(\S)", text):
            if m.group(2) is not None:
                if m.group(2) == "(":
                    raise ParseError("unclosed cycle", text, len(text.rstrip()))
                raise ParseError("unexpected character", text, m.start(2))
            body_start = m.start(1)
            cycle = []
            for tok in re.finditer(r"[^\s,]+", m.group(1)):
                col = body_start + tok.start()
                if not tok.group().isdigit() or int(tok.group()) < 1:
                    raise ParseError("expected a positive integer", text, col)
                value = int(tok.group())
                if value in seen:
                    raise ParseError(f"point {value} repeated", text, col)
                if n is not None and value > n:
                    raise ParseError(f"point {value} exceeds degree {n}", text, col)
                seen[value] = col
                cycle.append(value)
            cycles.append(cycle)
            pos = m.end()
        if pos != len(text):
            raise ParseError("trailing input", text, pos)
        return cls.from_cycles(cycles, n)

    @classmethod
    def _parse_one_line(cls, text: str, n: int | None) -> Permutation:
        values = []
        seen = set()
        for tok in re.finditer(r"[^\s,]+", text):
            if not tok.group().isdigit():
                raise ParseError("expected a positive integer", text, tok.start())
            value = int(tok.group())
            if value in seen:
                raise ParseError(f"image {value} repeated; not a bijection", text, tok.start())
            seen.add(value)
            values.append(value)
        size = len(values)
        for tok, value in zip(re.finditer(r"[^\s,]+", text), values):
            if not 1 <= value <= size:
                raise ParseError(f"image {value} outside 1..{size}; not a bijection", text, tok.start())
        if n is not None and n != size:
            raise ParseError(f"expected {n} images, got {size}", text, len(text))
        return cls(tuple(values))

    # basic protocol ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __str__(self) -> str:
        if self.n == 0:
            return "∅"
        cyc = [c for c in self.cycles if len(c) > 1]
        if not cyc:
            return "id" + str(self.n)
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def one_line(self) -> str:
        return " ".join(map(str, self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, x in enumerate(self.images, start=1):
            inv[x - 1] = i
        return Permutation(tuple(inv))

    # cycle structure --------------------------------------------------------

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Disjoint cycles, each starting at its smallest point, ordered by that point."""
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x)
                x = self.images[x - 1]
            out.append(tuple(cycle))
        return tuple(out)

    def cycle_of(self, i: int) -> tuple[int, ...]:
        """The cycle through ``i`` listed as ``i, sigma(i), sigma^2(i), ...``."""
        cycle = [i]
        x = self.images[i - 1]
        while x != i:
            cycle.append(x)
            x = self.images[x - 1]
        return tuple(cycle)

    @property
    def num_cycles(self) -> int:
        return len(self.cycles)

    def fixes(self, i: int) -> bool:
        return self.images[i - 1] == i

    def restrict(self) -> Permutation:
        """Drop the top point, which must be fixed."""
        if self.n == 0 or not self.fixes(self.n):
            raise ValueError(f"{self} does not fix its top point")
        return Permutation(self.images[:-1])

    def left_transpose(self, i: int, j: int) -> Permutation:
        """``(i j) * self``: swap the values ``i`` and ``j`` in the one-line form."""
        images = list(self.images)
        a, b = images.index(i), images.index(j)
        images[a], images[b] = j, i
        return Permutation(tuple(images))

    def conjugate_by(self, eta: Permutation) -> Permutation:
        """``eta^-1 * self * eta``."""
        return eta.inverse() * self * eta


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``(a * b)(i) = a(b(i))``."""
    if a.n != b.n:
        raise ValueError(f"degree mismatch: {a.n} != {b.n}")
    return Permutation(tuple(a.images[x - 1] for x in b.images))


def cycle_type(sigma: Permutation) -> Partition:
    return Partition.from_parts(len(c) for c in sigma.cycles)


def norm(sigma: Permutation) -> int:
    """Minimal number of transpositions whose product is ``sigma``."""
    return sigma.n - sigma.num_cycles


def all_permutations(n: int) -> Iterator[Permutation]:
    from itertools import permutations as _perms

    for images in _perms(range(1, n + 1)):
        yield Permutation(images)


# --------------------------------------------------------------------------
# Catalan numbers and the Moebius function
# --------------------------------------------------------------------------

CATALAN_CACHE_CAP = 10_000
_catalan: list[int] = [1]


def catalan(k: int) -> int:
    """The ``k``-th Catalan number ``(2k)! / (k! (k+1)!)``."""
    if k < 0:
        raise ValueError("catalan index must be nonnegative")
    if k >= CATALAN_CACHE_CAP:
        return math.comb(2 * k, k) // (k + 1)
    while len(_catalan) <= k:
        m = len(_catalan) - 1
        _catalan.append(_catalan[m] * 2 * (2 * m + 1) // (m + 2))
    return _catalan[k]


def moebius(x: Partition | Permutation) -> int:
    """Signed Moebius value ``(-1)^|sigma| prod Cat(c_i - 1)`` over cycle lengths."""
    lam = cycle_type(x) if isinstance(x, Permutation) else x
    value = 1
    for part in lam:
        value *= catalan(part - 1)
    return -value if lam.norm % 2 else value


def catalan_quotient_max(k: int) -> Fraction:
    """``max_{1<=j<=k-1} Cat(k-1) / (Cat(j-1) Cat(k-j-1))``, exactly."""
    if k < 2:
        raise ValueError("k must be at least 2")
    top = catalan(k - 1)
    return max(Fraction(top, catalan(j - 1) * catalan(k - j - 1)) for j in range(1, k))


def uniform_class_sample(lam: Partition, rng) -> Permutation:
    """Uniform draw from the conjugacy class of cycle type ``lam``.

    A uniform arrangement of ``1..n`` is cut into consecutive blocks of the
    part sizes, each block read as a cycle. ``rng`` needs ``below(m)``.
    """
    n = lam.size
    if n == 0:
        raise ValueError("empty partition has no class to sample from")
    arrangement = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        arrangement[i], arrangement[j] = arrangement[j], arrangement[i]
    images = [0] * n
    start = 0
    for part in lam:
        block = arrangement[start : start + part]
        for a, b in zip(block, block[1:] + block[:1]):
            images[a - 1] = b
        start += part
    return Permutation(tuple(images))
