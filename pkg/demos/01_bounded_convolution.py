"""Why small values make (max,+) convolution cheap.

Run: python demos/01_bounded_convolution.py
"""

import time

from knapconv import bounded_range_conv, naive_conv
from knapconv.bounded_conv import packed_product
from knapconv.rng import stream

# Each entry v becomes the monomial B**v.  Multiplying the two polynomials
# adds exponents, and the largest exponent in each coefficient is the answer.
a, b = [1, 2], [3, 4]
coeffs, base = packed_product(a, b, 4)
print(f"a={a} b={b}  base B={base}")
for k, c in enumerate(coeffs):
    digit = (c.bit_length() - 1) // (base.bit_length() - 1)
    print(f"  coefficient {k}: {c} -> top digit {digit}")
print("  naive_conv:", naive_conv(a, b))

# Timing: the packed product is one big-integer multiply.
rng = stream(1, "demo")
print("\n n        naive (s)   bounded (s)")
for n in (512, 1024, 2048, 4096):
    x = rng.integers(0, 5, n).tolist()
    y = rng.integers(0, 5, n).tolist()
    t0 = time.perf_counter()
    slow = naive_conv(x, y)
    t1 = time.perf_counter()
    fast = bounded_range_conv(x, y, 4)
    t2 = time.perf_counter()
    assert slow == fast
    print(f" {n:<8} {t1 - t0:<11.4f} {t2 - t1:.4f}")

for n in (1 << 15, 1 << 17):
    x = rng.integers(0, 5, n).tolist()
    t0 = time.perf_counter()
    bounded_range_conv(x, x, 4)
    print(f" {n:<8} {'-':<11} {time.perf_counter() - t0:.4f}")
