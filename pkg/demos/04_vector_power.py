"""Powers of a vector, and the margin the certificate needs.

Run: python demos/04_vector_power.py
"""

from knapconv import fast_power, naive_power, validate_uncertain
from knapconv.vector_power import max_drop, power_certificate

a = [0, 3, 1]
for k in (2, 3, 4):
    print(f"a^{k}:", fast_power(a, k), "(naive:", naive_power(a, k), ")")

# A power can fall by more than e past the first |a| entries.
a = [5, 0, 0]
sq = naive_power(a, 2)
print("\n[5,0,0] squared:", sq, "largest fall:", max_drop(sq))
hi, lo = naive_power(a, 2), naive_power(a, 2)
u = power_certificate(hi, lo, 5)
print(f"certificate error with the widened margin: {u.e_max}, valid: {validate_uncertain(hi, lo, u)}")
print("fast_power([5,0,0], 4) == naive:", fast_power(a, 4) == naive_power(a, 4))

# Truncated powers, as the unbounded knapsack uses them, keep the margin at e.
b = [0, 2, 6, 1]
print("\nfirst 6 entries of b^5:", fast_power(b, 5, prefix_cap=6))
