"""Merging two knapsack profiles with a greedy-built certificate.

Run: python demos/02_knapsack_certificates.py
"""

from knapconv import KnapsackInstance, classic_dp, knapsack_conv, naive_conv, validate_uncertain
from knapconv.knapsack_conv import build_uncertain_intervals, fractional_conv_profile

A = KnapsackInstance(6, [(2, 4), (3, 3), (1, 1)])
B = KnapsackInstance(5, [(3, 3), (2, 1), (4, 4)])
a, b = classic_dp(A.capacity, A.items), classic_dp(B.capacity, B.items)
print("profile a:", a)
print("profile b:", b)

# The greedy fractional optimum of the union tells how capacity should split.
fc = fractional_conv_profile(A, B)
print("fractional merge c':", [str(v) for v in fc.values()])
print("capacity given to A:", fc.Fa)

u = build_uncertain_intervals(A, B)
print(f"\ncertificate (error {u.e_max}): row i may pair with b_j for j in [x_i, y_i]")
for i, (x, y) in enumerate(zip(u.x, u.y)):
    print(f"  i={i}: [{x}, {y}]")
print("certificate valid:", validate_uncertain(a, b, u))

c = knapsack_conv(A, B, a, b)
print("\nknapsack_conv:", c)
print("naive_conv:   ", naive_conv(a, b))
