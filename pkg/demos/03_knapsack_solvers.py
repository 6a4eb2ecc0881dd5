"""Every knapsack solver on the same kind of generated instance.

Run: python demos/03_knapsack_solvers.py
"""

import time

from knapconv import (
    UNBOUNDED,
    SolverConfig,
    classic_dp,
    knapsack_given_mult,
    knapsack_infinite_mult,
    knapsack_small_sizes,
    knapsack_via_conv,
    unbounded_via_power,
)
from knapconv.generators import random_instance


def timed(label, fn, want):
    t0 = time.perf_counter()
    got = fn()
    print(f"  {label:<28} {got:<8} {'ok' if got == want else 'MISMATCH'}  {time.perf_counter() - t0:.3f}s")


cfg = SolverConfig(seed=7)

inst = random_instance("bounded-value", 3, n=40, t=200, v_max=5)
t, items = inst.capacity, inst.items
want = classic_dp(t, items)[t]
print(f"0/1, small values (n={len(items)}, t={t})")
timed("classic_dp", lambda: want, want)
timed("knapsack_via_conv", lambda: knapsack_via_conv(t, items, cfg)[t], want)

inst = random_instance("bounded-size", 3, n=60, t=300, s_max=8)
t, items = inst.capacity, inst.items
want = classic_dp(t, items)[t]
print(f"\n0/1, small sizes (n={len(items)}, t={t})")
timed("knapsack_small_sizes", lambda: knapsack_small_sizes(t, items, cfg), want)

inst = random_instance("unbounded", 3, n=6, t=100_000, s_max=6)
t, items = inst.capacity, inst.items
want = classic_dp(t, items)[t]
print(f"\nunbounded copies (t={t})")
timed("knapsack_infinite_mult", lambda: knapsack_infinite_mult(t, items, cfg), want)
small_t = 300
want_small = classic_dp(small_t, items)[small_t]
timed(f"unbounded_via_power (t={small_t})", lambda: unbounded_via_power(small_t, items)[small_t], want_small)

inst = random_instance("mult", 3, n=10, t=10_000, s_max=5, m_max=20)
t, items = inst.capacity, inst.items
want = classic_dp(t, items)[t]
print(f"\ngiven multiplicities (t={t})")
timed("knapsack_given_mult", lambda: knapsack_given_mult(t, items, cfg), want)
assert all(it.mult != UNBOUNDED for it in items)
