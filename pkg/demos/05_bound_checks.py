"""Explicit large-N bounds certified on finite instances in exact arithmetic."""

from weingarten.bounds import (
    check_catalan_quotient,
    check_energy,
    check_log_bound,
    check_small_perm,
    check_theorem_main,
    emit_report,
)

# uniform bound and the classical two-sided bound, compared exactly via squared irrationals
print(emit_report(check_theorem_main(3, 10**5), "csv"))

# small norm: deviation from the Moebius function against the summed path bound
rows = check_small_perm(8, 2, [1000])
print("small norm rows:", len(rows), "all satisfied:", all(r.satisfied for r in rows))

# logarithmic bound with interval logarithms; at N = 10^4 the size hypothesis is not met
for r in check_log_bound(6, 10**4):
    print(r.parameters["class"], f"{r.lhs:.6f} <= {r.rhs:.6f}", r.satisfied, "hypothesis met:", r.hypothesis_met)

print("Catalan quotient up to 100 holds:", all(r.satisfied for r in check_catalan_quotient(100)))

# the one-step energy inequality holds at the Weingarten vector but not for every vector:
# the empty coordinate passes through unchanged while the right side only keeps gamma of it
rows = check_energy(2, 10**4, random_vectors=10)
for r in rows[:3] + [r for r in rows if not r.satisfied][:2]:
    print(r.parameters["vector"], r.parameters["gamma"], f"{float(r.lhs):.6f} <= {float(r.rhs):.6f}", r.satisfied)
