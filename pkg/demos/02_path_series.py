"""The 1/N expansion as a sum over paths in the Weingarten graph."""

import numpy as np

from weingarten import Permutation, count_paths_unitary, wg_unitary_gram
from weingarten.exact import normalized_unitary, wg_unitary_series
from weingarten.graph import minimal_paths_unitary
from weingarten.perm import cycle_type

sigma = Permutation.parse("(1 2 3 4)")

# minimal paths down to the empty permutation; there are |Moeb(sigma)| = Cat(3) = 5 of them
for path in minimal_paths_unitary(sigma):
    print(" -> ".join(str(s) for s in path))

# path counts by genus: paths with 2g extra solid steps
counts = np.array([count_paths_unitary(sigma, g) for g in range(6)])
print("path counts by genus:", counts)

# partial sums converge to the normalized Weingarten value, with a proven tail bound
N = 40
exact = normalized_unitary(wg_unitary_gram(4, N), cycle_type(sigma))
for g_max in range(5):
    res = wg_unitary_series(sigma, N, g_max)
    print(f"g <= {g_max}: partial {float(res.partial):.10f}  tail <= {float(res.tail):.2e}  brackets: {res.brackets(exact)}")
print("exact:", float(exact))
