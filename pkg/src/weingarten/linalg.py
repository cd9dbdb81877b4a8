"""Exact linear solves over the rationals.

Rows are cleared of denominators first. Small systems are then reduced with
Bareiss' fraction-free elimination, so intermediate entries stay integers
bounded by minors of the input. Large sparse systems use p-adic lifting
(Dixon): one inverse modulo a word-sized prime, then cheap lifting steps,
rational reconstruction, and an exact check of the candidate against the
original equations. Either route returns the exact solution or raises.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

try:  # gmpy2 integers make the elimination several times faster; plain ints work too
    from gmpy2 import mpz as _int
except ImportError:  # pragma: no cover
    _int = int

Number = int | Fraction
SparseRows = list[list[tuple[int, int]]]


class SingularMatrixError(ArithmeticError):
    """The system has no unique solution."""


def _integer_rows(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> list[list[int]]:
    rows = []
    for row_a, row_b in zip(a, b):
        entries = [Fraction(x) for x in row_a] + [Fraction(x) for x in row_b]
        scale = math.lcm(*(x.denominator for x in entries)) if entries else 1
        rows.append([_int(int(x * scale)) for x in entries])
    return rows


def solve_many(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    """Solve ``a X = b`` for a square ``a``; ``b`` is given row-wise (one row per equation)."""
    size = len(a)
    if any(len(row) != size for row in a):
        raise ValueError("matrix must be square")
    if len(b) != size:
        raise ValueError("right-hand side has the wrong number of rows")
    if size == 0:
        return []
    width = len(b[0])
    m = _integer_rows(a, b)
    prev = 1
    for k in range(size):
        pivot = next((r for r in range(k, size) if m[r][k] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {k})")
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
        mk = m[k]
        pk = mk[k]
        for r in range(k + 1, size):
            mr = m[r]
            f = mr[k]
            if f == 0:
                for c in range(k + 1, size + width):
                    mr[c] = mr[c] * pk // prev
            else:
                for c in range(k + 1, size + width):
                    mr[c] = (mr[c] * pk - f * mk[c]) // prev
            mr[k] = 0
        prev = pk
    x = [[Fraction(0)] * width for _ in range(size)]
    for col in range(width):
        for k in range(size - 1, -1, -1):
            acc = Fraction(int(m[k][size + col]))
            row = m[k]
            for c in range(k + 1, size):
                if row[c]:
                    acc -= int(row[c]) * x[c][col]
            x[k][col] = acc / int(row[k])
    return x


def solve(a: Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Fraction]:
    """Solve ``a x = b`` exactly; large systems go through :func:`solve_lifting`."""
    if len(a) > DENSE_LIMIT:
        return solve_lifting(a, b)
    return solve_dense(a, b)


def solve_sparse(sparse: SparseRows, rhs: Sequence[int]) -> list[Fraction]:
    """Integer sparse system; dense elimination when small, lifting otherwise."""
    size = len(sparse)
    if size > DENSE_LIMIT:
        return solve_sparse_integer(sparse, rhs)
    dense_rows = [[0] * size for _ in range(size)]
    for i, row in enumerate(sparse):
        for c, v in row:
            dense_rows[i][c] += v
    return solve_dense(dense_rows, list(rhs))


def solve_dense(a: Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Fraction]:
    """Solve ``a x = b`` exactly by fraction-free elimination."""
    return [row[0] for row in solve_many(a, [[v] for v in b])]


# --------------------------------------------------------------------------
# p-adic lifting for large sparse systems
# --------------------------------------------------------------------------

# Primes below 2**25 keep every dot product of a lifting step inside int64
# for systems of up to 4096 unknowns.
_LIFT_PRIMES = (33554393, 33554383, 33554371, 33554341, 33554317)
_MAX_LIFT_SIZE = 4096
DENSE_LIMIT = 60



class _ModularLU:
    """LU factors of an integer matrix modulo a prime, with row pivoting."""

    def __init__(self, a: np.ndarray, p: int):
        size = a.shape[0]
        m = a % p
        perm = np.arange(size)
        for k in range(size):
            nz = np.nonzero(m[k:, k])[0]
            if nz.size == 0:
                raise SingularMatrixError(f"singular modulo {p}")
            r = k + int(nz[0])
            if r != k:
                m[[k, r]] = m[[r, k]]
                perm[[k, r]] = perm[[r, k]]
            inv = pow(int(m[k, k]), p - 2, p)
            below = m[k + 1 :, k]
            rows = np.nonzero(below)[0] + k + 1
            if rows.size:
                factors = (m[rows, k] * inv) % p
                m[rows, k + 1 :] = (m[rows, k + 1 :] - (factors[:, None] * m[k, k + 1 :][None, :]) % p) % p
                m[rows, k] = factors
        self.p = p
        self.lu = m
        self.perm = perm
        self.pivot_inv = np.array([pow(int(m[k, k]), p - 2, p) for k in range(size)], dtype=np.int64)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        p, lu = self.p, self.lu
        size = lu.shape[0]
        y = rhs[self.perm] % p
        for k in range(size - 1):
            if y[k]:
                y[k + 1 :] = (y[k + 1 :] - (lu[k + 1 :, k] * y[k]) % p) % p
        x = np.zeros(size, dtype=np.int64)
        for k in range(size - 1, -1, -1):
            acc = (y[k] - int(lu[k, k + 1 :] @ x[k + 1 :])) % p
            x[k] = (acc * int(self.pivot_inv[k])) % p
        return x


def _reconstruct(residue: int, modulus: int, bound: int) -> Fraction | None:
    """The fraction ``u/v`` with ``u = residue v (mod modulus)`` and ``|u|, v <= bound``, if any."""
    r0, r1 = modulus, residue % modulus
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def _check(sparse: SparseRows, rhs: Sequence[int], x: list[Fraction]) -> bool:
    for row, b in zip(sparse, rhs):
        total = Fraction(0)
        for c, v in row:
            total += v * x[c]
        if total != b:
            return False
    return True


def solve_sparse_integer(sparse: SparseRows, rhs: Sequence[int], max_steps: int = 100_000) -> list[Fraction]:
    """Solve an integer system given as ``[(column, value), ...]`` rows by p-adic lifting.

    The candidate from rational reconstruction is accepted only after it
    satisfies every equation exactly.
    """
    size = len(sparse)
    if size == 0:
        return []
    if size > _MAX_LIFT_SIZE:
        raise ValueError("system too large for the lifting solver")
    lu = None
    for p in _LIFT_PRIMES:
        dense = np.zeros((size, size), dtype=np.int64)
        for i, row in enumerate(sparse):
            for c, v in row:
                dense[i, c] = (dense[i, c] + v) % p
        try:
            lu = _ModularLU(dense, p)
            break
        except SingularMatrixError:
            continue
    if lu is None:
        dense_rows = [[0] * size for _ in range(size)]
        for i, row in enumerate(sparse):
            for c, v in row:
                dense_rows[i][c] += v
        return solve_dense(dense_rows, list(rhs))
    p = lu.p
    # Cramer's rule and Hadamard's inequality bound every numerator and the
    # common denominator by H; reconstruction succeeds once p^steps > 2 H^2
    log_h = sum(0.5 * math.log2(sum(v * v for _, v in row) + int(b) ** 2 + 1) for row, b in zip(sparse, rhs))
    max_steps = min(max_steps, int((2 * log_h + 2) / math.log2(p)) + 3)
    residual = [int(v) for v in rhs]
    acc = [0] * size
    power = 1
    check_at = 4
    for step in range(1, max_steps + 1):
        digits = lu.solve(np.array([v % p for v in residual], dtype=np.int64)).tolist()
        for i, d in enumerate(digits):
            if d:
                acc[i] += d * power
        residual = [
            (r - sum(v * digits[c] for c, v in row)) // p for row, r in zip(sparse, residual)
        ]
        power *= p
        if step == check_at or step == max_steps:
            check_at = step + max(2, step // 4)
            bound = math.isqrt(power // 2)
            candidate = []
            denom = 1
            for value in acc:
                frac = _reconstruct(value * denom % power, power, bound)
                if frac is None:
                    break
                frac /= denom
                denom = math.lcm(denom, frac.denominator)
                candidate.append(frac)
            else:
                if _check(sparse, rhs, candidate):
                    return candidate
    raise ArithmeticError("lifting did not converge within the Hadamard bound")


def solve_lifting(a: Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Fraction]:
    """Solve ``a x = b`` exactly by p-adic lifting; meant for large sparse systems."""
    size = len(a)
    rows = _integer_rows(a, [[v] for v in b])
    sparse = [[(c, int(v)) for c, v in enumerate(row[:size]) if v] for row in rows]
    return solve_sparse_integer(sparse, [int(row[size]) for row in rows])
