"""Pairings, coset types and the orthogonal Weingarten function."""

from fractions import Fraction

from weingarten import Pairing, all_pairings, count_paths_orthogonal, moebius, wg_orthogonal_gram, wg_symplectic
from weingarten.exact import normalized_orthogonal, wg_orthogonal_series

pi = Pairing.parse("{1-2, 3-7, 4-6, 5-8}")
print(pi, "has coset type", pi.coset_type)
print("neighbour", pi.act(4), "has coset type", pi.act(4).coset_type)

# minimal paths are counted by the Moebius function of the coset type
for rho in all_pairings(2):
    print(rho, rho.coset_type, count_paths_orthogonal(rho, 0, 0), abs(moebius(rho.coset_type)))

# orthogonal values from the pairing Gram matrix, and the series with minor and major defects
N = Fraction(50)
table = wg_orthogonal_gram(2, N)
for rho in all_pairings(2):
    res = wg_orthogonal_series(rho, N, 6)
    print(rho, "exact", float(normalized_orthogonal(table, rho.coset_type)), "series", float(res.partial), "+/-", float(res.tail))

# symplectic magnitudes are read from the orthogonal group at 2N
print(wg_symplectic(2, 3).values)
