"""Tree separability and the MaxCov gadget.

Run: python demos/05_tree_separability.py
"""

import math

from knapconv import (
    WeightedTree,
    bounded_separability,
    brute_separability,
    centroid_partition,
    maxcov_gadget,
    maxcov_upperbound,
    naive_conv,
    separability_profile,
)
from knapconv.generators import random_tree

path = WeightedTree(3, [(0, 1, 1), (1, 2, 5)])
print("path 0-1-2 with weights 1, 5:", separability_profile(path))

t = random_tree(4, n=12, w_max=4, d_max=3)
print("\nrandom tree, n=12")
print("  spine DP   :", separability_profile(t, "spine"))
print("  bounded DP :", bounded_separability(t))
print("  brute, m=5 :", brute_separability(t, 5))

big = random_tree(9, n=200, w_max=1)
limit = 2 * big.d_max * math.ceil(math.log2(big.n))
for m in (1, 37, 100):
    side = centroid_partition(big, m)
    print(f"  centroid partition m={m}: {big.cut_count(side)} edges cut (bound {limit})")

a, b = [1, 2], [3, 4]
print("\na*b =", naive_conv(a, b))
for c in ([4, 5, 6], [4, 5, 5]):
    tree, m, thr = maxcov_gadget(a, b, c)
    val = separability_profile(tree)[m]
    print(f"c={c}: separability({m}) = {val}, threshold {thr} -> exceeds c somewhere: {val < thr}"
          f" (direct check: {maxcov_upperbound(a, b, c)})")
