"""The Weingarten process: a random minimal path, sampled by Catalan-weighted cycle splits."""

from collections import Counter

import numpy as np

from weingarten import Partition, Permutation, Stream, run_wp_unitary
from weingarten.process import estimate_L_power_sum, estimate_time_to_halve, exact_path_law_unitary

sigma = Permutation.parse("(1 2 3 4)")

# every minimal path has the same probability
for path, p in exact_path_law_unitary(sigma).items():
    print(p, " -> ".join(str(s) for s in path))

# a sampled trace, with level, longest cycle and pivotal cycle length at each step
trace = run_wp_unitary(sigma, Stream(1, 0))
print(trace.to_jsonl())

# empirical frequencies from independent seeded streams
counts = Counter(run_wp_unitary(sigma, Stream(42, i)).states for i in range(5000))
print("empirical frequencies:", np.round(np.array(sorted(counts.values())) / 5000, 3))

# from a long cycle the longest part shrinks quickly
lam = Partition((60,))
print(estimate_L_power_sum(lam, samples=300, seed=7).to_json())
print(estimate_time_to_halve(lam, samples=300, seed=7).to_json())
