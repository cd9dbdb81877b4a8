"""Exact unitary Weingarten values, computed two independent ways."""

from fractions import Fraction

from weingarten import Partition, moebius, wg_full_cycle, wg_unitary_gram, wg_unitary_recursion
from weingarten.exact import normalized_unitary

N = Fraction(10)

# Gram inversion and the loop-equation recursion share no code, so agreement is a real check
gram = wg_unitary_gram(4, N)
rec = wg_unitary_recursion(4, N)
for lam in gram.values:
    if lam.size == 4:
        print(f"Wg({lam}) = {gram[lam]}   recursion agrees: {gram[lam] == rec[lam]}")

# the full cycle class has a product formula
print("closed form for (4):", wg_full_cycle(4, N))

# normalized values approach the Moebius function as N grows
lam = Partition.parse("3,2")
for N in (10, 100, 1000):
    table = wg_unitary_recursion(5, N)
    print(f"N = {N:5d}: N^(n+|s|) Wg / Moeb = {float(normalized_unitary(table, lam) / abs(moebius(lam))):.8f}")

# the recursion handles levels far beyond the n! x n! Gram matrix
table = wg_unitary_recursion(16, 100)
print("Wg((16)) at N = 100:", table[Partition((16,))])
