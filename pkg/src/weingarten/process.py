"""The Weingarten process on permutations and on pairings.

Unitary step at ``sigma`` in ``S_k``: if ``sigma`` fixes ``k`` take the dashed
edge. Otherwise write the cycle through ``k`` as ``k -> i_1 -> ... -> i_l -> k``
and, with probability ``Cat(j-1) Cat(l-j) / Cat(l)``, move to
``(i_j k) * sigma``; this cuts the cycle into a piece of length ``j`` holding
``k`` and a piece of length ``l + 1 - j``.

Orthogonal step at ``pi`` on ``2k`` points: if ``{2k-1, 2k}`` is a pair take
the dashed edge. Otherwise walk the alternating cycle through ``2k - 1`` as
``(2k-1, i_1, ..., i_{2m-1})`` and, with probability
``Cat(j-1) Cat(m-j-1) / Cat(m-1)``, move to ``(i_{2j} 2k-1).pi``; this cuts the
component into halves of sizes ``j`` and ``m - j``.

Both processes produce a uniformly random minimal path to the sink. Split
positions are drawn with exact integer weights, never floats.
"""

from __future__ import annotations

import json
import math
import statistics
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .pairing import Pairing, uniform_coset_sample
from .perm import Partition, Permutation, catalan, cycle_type, uniform_class_sample
from .rng import Stream

State = Union[Permutation, Pairing]


def unitary_split_weights(ell: int) -> list[int]:
    """Integer weights ``Cat(j-1) Cat(ell-j)`` for ``j = 1..ell``; they sum to ``Cat(ell)``."""
    return [catalan(j - 1) * catalan(ell - j) for j in range(1, ell + 1)]


def orthogonal_split_weights(m: int) -> list[int]:
    """Integer weights ``Cat(j-1) Cat(m-j-1)`` for ``j = 1..m-1``; they sum to ``Cat(m-1)``."""
    return [catalan(j - 1) * catalan(m - j - 1) for j in range(1, m)]


def _as_stream(rng: Stream | int) -> Stream:
    return rng if isinstance(rng, Stream) else Stream(rng, 0)


# --------------------------------------------------------------------------
# Traces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProcessTrace:
    """One trajectory, indexed by time ``t = 0..len - 1``.

    ``edges[t]`` is the edge taken into time ``t`` (``"start"`` at ``t = 0``).
    ``L`` is the largest part of the current shape, ``C`` the part containing
    the pivot, and ``pivotal[t]`` marks ``t = 0`` and every time the level drops.
    The last state is the empty one, with ``n = L = C = 0``.
    """

    states: tuple[State, ...]
    n: tuple[int, ...]
    L: tuple[int, ...]
    C: tuple[int, ...]
    pivotal: tuple[bool, ...]
    edges: tuple[str, ...]
    shapes: tuple[Partition, ...]

    def __len__(self) -> int:
        return len(self.states)

    @property
    def solid_steps(self) -> int:
        return sum(1 for e in self.edges if e == "solid")

    @property
    def dashed_steps(self) -> int:
        return sum(1 for e in self.edges if e == "dashed")

    def pivotal_times(self) -> list[int]:
        return [t for t, flag in enumerate(self.pivotal) if flag]

    def to_jsonl(self) -> str:
        lines = []
        for t in range(len(self)):
            lines.append(
                json.dumps(
                    {
                        "t": t,
                        "n_t": self.n[t],
                        "state": str(self.states[t]),
                        "L_t": self.L[t],
                        "C_t": self.C[t],
                        "pivotal": self.pivotal[t],
                        "edge": self.edges[t],
                    },
                    ensure_ascii=False,
                )
            )
        return "\n".join(lines) + "\n"


def _unitary_stats(sigma: Permutation) -> tuple[int, int, int]:
    k = sigma.n
    if k == 0:
        return 0, 0, 0
    return k, max(len(c) for c in sigma.cycles), len(sigma.cycle_of(k))


def _orthogonal_stats(pi: Pairing) -> tuple[int, int, int]:
    k = pi.n
    if k == 0:
        return 0, 0, 0
    return k, pi.coset_type.largest, len(pi.walk()) // 2


def _unitary_step(sigma: Permutation, rng: Stream) -> tuple[str, Permutation]:
    k = sigma.n
    if sigma.fixes(k):
        return "dashed", sigma.restrict()
    cycle = sigma.cycle_of(k)
    ell = len(cycle) - 1
    j = 1 + rng.weighted_index(unitary_split_weights(ell))
    return "solid", sigma.left_transpose(cycle[j], k)


def _orthogonal_step(pi: Pairing, rng: Stream) -> tuple[str, Pairing]:
    if pi.has_top_pair():
        return "dashed", pi.restrict()
    walk = pi.walk()
    m = len(walk) // 2
    j = 1 + rng.weighted_index(orthogonal_split_weights(m))
    return "solid", pi.act(walk[2 * j])


def _run(start: State, rng: Stream, step: Callable, stats: Callable, shape: Callable) -> ProcessTrace:
    states = [start]
    edges = ["start"]
    state = start
    while state.n > 0:
        kind, state = step(state, rng)
        states.append(state)
        edges.append(kind)
    n, L, C = zip(*(stats(s) for s in states))
    pivotal = tuple(t == 0 or n[t] < n[t - 1] for t in range(len(states)))
    return ProcessTrace(tuple(states), n, L, C, pivotal, tuple(edges), tuple(shape(s) for s in states))


def run_wp_unitary(start: Permutation | Partition, rng: Stream | int) -> ProcessTrace:
    """One trajectory of the unitary process; a partition start draws a uniform element first."""
    rng = _as_stream(rng)
    if isinstance(start, Partition):
        start = uniform_class_sample(start, rng)
    return _run(start, rng, _unitary_step, _unitary_stats, cycle_type)


def run_wp_orthogonal(start: Pairing | Partition, rng: Stream | int) -> ProcessTrace:
    """One trajectory of the orthogonal process; a partition start draws a uniform pairing first."""
    rng = _as_stream(rng)
    if isinstance(start, Partition):
        start = uniform_coset_sample(start, rng)
    return _run(start, rng, _orthogonal_step, _orthogonal_stats, lambda p: p.coset_type)


# --------------------------------------------------------------------------
# Exact path law by tree expansion
# --------------------------------------------------------------------------


def exact_path_law_unitary(sigma: Permutation) -> dict[tuple[Permutation, ...], Fraction]:
    """Probability of every path the unitary process can produce from ``sigma``."""
    out: dict[tuple[Permutation, ...], Fraction] = {}

    def rec(state: Permutation, prefix: list[Permutation], prob: Fraction):
        prefix.append(state)
        if state.n == 0:
            out[tuple(prefix)] = out.get(tuple(prefix), Fraction(0)) + prob
        elif state.fixes(state.n):
            rec(state.restrict(), prefix, prob)
        else:
            k = state.n
            cycle = state.cycle_of(k)
            weights = unitary_split_weights(len(cycle) - 1)
            total = sum(weights)
            for j, w in enumerate(weights, start=1):
                rec(state.left_transpose(cycle[j], k), prefix, prob * Fraction(w, total))
        prefix.pop()

    rec(sigma, [], Fraction(1))
    return out


def exact_path_law_orthogonal(pi: Pairing) -> dict[tuple[Pairing, ...], Fraction]:
    """Probability of every path the orthogonal process can produce from ``pi``."""
    out: dict[tuple[Pairing, ...], Fraction] = {}

    def rec(state: Pairing, prefix: list[Pairing], prob: Fraction):
        prefix.append(state)
        if state.n == 0:
            out[tuple(prefix)] = out.get(tuple(prefix), Fraction(0)) + prob
        elif state.has_top_pair():
            rec(state.restrict(), prefix, prob)
        else:
            walk = state.walk()
            weights = orthogonal_split_weights(len(walk) // 2)
            total = sum(weights)
            for j, w in enumerate(weights, start=1):
                rec(state.act(walk[2 * j]), prefix, prob * Fraction(w, total))
        prefix.pop()

    rec(pi, [], Fraction(1))
    return out


# --------------------------------------------------------------------------
# Fast statistics-only simulation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ShapePath:
    """Level, largest part, pivot part and number of big parts along one run."""

    n: tuple[int, ...]
    L: tuple[int, ...]
    C: tuple[int, ...]
    pivotal: tuple[bool, ...]
    big: tuple[int, ...]


def _simulate_unitary(lam: Partition, rng: Stream, big_threshold: Fraction | None = None) -> ShapePath:
    """Run the unitary process from a uniform element of class ``lam`` on a mutable image list."""
    sigma = uniform_class_sample(lam, rng)
    images = list(sigma.images)
    lengths = Counter(lam.parts)

    def is_big(x: int) -> bool:
        return big_threshold is not None and 3 * x >= 2 * big_threshold

    big = sum(m for part, m in lengths.items() if is_big(part))
    ns, Ls, Cs, pivots, bigs = [], [], [], [], []
    k = len(images)
    prev_k = None
    while True:
        if k == 0:
            ns.append(0), Ls.append(0), Cs.append(0), bigs.append(0)
            pivots.append(prev_k is None or prev_k > 0)
            break
        cycle = [k]
        x = images[k - 1]
        while x != k:
            cycle.append(x)
            x = images[x - 1]
        ns.append(k)
        Ls.append(max(lengths))
        Cs.append(len(cycle))
        pivots.append(prev_k is None or k < prev_k)
        bigs.append(big)
        prev_k = k
        ell = len(cycle) - 1
        if ell == 0:
            images.pop()
            lengths[1] -= 1
            if lengths[1] == 0:
                del lengths[1]
            if is_big(1):
                big -= 1
            k -= 1
            continue
        j = 1 + rng.weighted_index(unitary_split_weights(ell))
        target = cycle[j]
        # (target k) * sigma: swap the values target and k in one-line form
        images[cycle[j - 1] - 1] = k
        images[cycle[-1] - 1] = target
        whole = ell + 1
        lengths[whole] -= 1
        if lengths[whole] == 0:
            del lengths[whole]
        lengths[j] += 1
        lengths[whole - j] += 1
        big += is_big(j) + is_big(whole - j) - is_big(whole)
    return ShapePath(tuple(ns), tuple(Ls), tuple(Cs), tuple(pivots), tuple(bigs))


# --------------------------------------------------------------------------
# Estimators
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EstimatorReport:
    statistic: str
    estimate: float
    standard_error: float
    samples: int
    seed: int
    parameters: dict = field(default_factory=dict)
    hypotheses_met: bool = True

    def upper(self, k: float = 5.0) -> float:
        return self.estimate + k * self.standard_error

    def lower(self, k: float = 5.0) -> float:
        return self.estimate - k * self.standard_error

    def to_json(self) -> str:
        data = asdict(self)
        if math.isnan(data["standard_error"]):
            data["standard_error"] = None
        return json.dumps(data, sort_keys=True)


def _report(statistic: str, values: Sequence[float], seed: int, parameters: dict, hypotheses_met: bool) -> EstimatorReport:
    count = len(values)
    if count == 0:
        raise ValueError("at least one sample is required")
    mean = math.fsum(values) / count
    se = statistics.stdev(values) / math.sqrt(count) if count > 1 else math.nan
    return EstimatorReport(statistic, mean, se, count, seed, parameters, hypotheses_met)


def _paths(lam: Partition, samples: int, seed: int, big_threshold=None) -> Iterable[ShapePath]:
    if samples < 1:
        raise ValueError("samples must be at least 1")
    for i in range(samples):
        yield _simulate_unitary(lam, Stream(seed, i), big_threshold)


def process_hypotheses_met(lam: Partition) -> bool:
    """The expectation bounds are stated for ``n > 6`` and ``L_0 >= 6``."""
    return lam.size > 6 and lam.largest >= 6


def estimate_L_power_sum(lam: Partition, exponent: Fraction | int = Fraction(3, 2), samples: int = 1000, seed: int = 0) -> EstimatorReport:
    """Monte Carlo estimate of ``E[sum_j L_j^p]`` over the whole run of the process from class ``lam``."""
    p = float(Fraction(exponent))
    values = [math.fsum(x**p for x in path.L) for path in _paths(lam, samples, seed)]
    return _report(
        "L_power_sum",
        values,
        seed,
        {"lambda": str(lam), "exponent": str(Fraction(exponent))},
        process_hypotheses_met(lam),
    )


def time_to_halve(path: ShapePath, L0: int) -> int:
    """First pivotal time at or after the first time with no part ``>= 2 L0 / 3``."""
    t_k = next(t for t, b in enumerate(path.big) if b == 0)
    return next(t for t in range(t_k, len(path.n)) if path.pivotal[t])


def estimate_time_to_halve(lam: Partition, samples: int = 1000, seed: int = 0) -> EstimatorReport:
    L0 = lam.largest
    values = [float(time_to_halve(path, L0)) for path in _paths(lam, samples, seed, Fraction(L0))]
    return _report("time_to_halve", values, seed, {"lambda": str(lam)}, process_hypotheses_met(lam))


def big_part_count(lam: Partition) -> int:
    L0 = lam.largest
    return sum(1 for part in lam if 3 * part >= 2 * L0)


def increment(path: ShapePath, k: int, i: int) -> int:
    """``T_{i+1} - T_i``, where ``T_i`` is the first pivotal time once at most ``k - i`` big parts remain."""

    def T(idx: int) -> int:
        t_idx = next(t for t, b in enumerate(path.big) if b <= k - idx)
        return next(t for t in range(t_idx, len(path.n)) if path.pivotal[t])

    return T(i + 1) - T(i)


def estimate_Ti_tail_curve(lam: Partition, i: int, ts: Sequence[int], samples: int = 1000, seed: int = 0) -> list[EstimatorReport]:
    """``P(T_{i+1} - T_i > 5t)`` for each ``t`` in ``ts``, all from the same runs."""
    k = big_part_count(lam)
    if not 0 <= i < k:
        raise ValueError(f"need i < k = {k} big parts")
    incs = [increment(path, k, i) for path in _paths(lam, samples, seed, Fraction(lam.largest))]
    met = process_hypotheses_met(lam)
    return [
        _report("Ti_tail", [1.0 if d > 5 * t else 0.0 for d in incs], seed, {"lambda": str(lam), "i": i, "t": t}, met)
        for t in ts
    ]


def estimate_Ti_tail(lam: Partition, i: int, t: int, samples: int = 1000, seed: int = 0) -> EstimatorReport:
    return estimate_Ti_tail_curve(lam, i, [t], samples, seed)[0]
