"""Near-linear (max,+) convolution for value-bounded vectors and knapsack solvers built on it."""

from .bounded_conv import ScaledVec, approx_conv, bounded_range_conv
from .distorted_conv import DistortionError, check_distortion, distorted_conv, distorted_square_conv
from .knapsack_conv import UNBOUNDED, Item, KnapsackInstance, knapsack_conv
from .knapsack_solvers import (
    SolverConfig,
    classic_dp,
    knapsack_given_mult,
    knapsack_infinite_mult,
    knapsack_small_sizes,
    knapsack_via_conv,
    unbounded_small_sizes,
    unbounded_via_power,
)
from .maxplus_core import (
    NEG_INF,
    POS_INF,
    DomainError,
    MaxPlusOverflowError,
    naive_conv,
    naive_min_conv,
    naive_power,
)
from .prediction import UncertainSolution, conv_via_prediction, validate_uncertain
from .tree_separability import (
    WeightedTree,
    bounded_separability,
    brute_separability,
    centroid_partition,
    maxcov_gadget,
    maxcov_upperbound,
    separability_profile,
)
from .vector_power import fast_power, fast_power_step

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
