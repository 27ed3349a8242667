"""Partitioning-function bounds for binary decision trees, and pruning with them."""
from .bound_engine import (PartitionTable, growth_bound, partition_bound, partition_bound_fast,
                           stump_pi2_bound, stump_vcdim_exact, vcdim_upper_bound)
from .combinatorics import (binomial, falling_factorial, ln_big, stirling2,
                            wedderburn_etherington)
from .learner import DecisionTree, Sample, count_errors, fit, predict
from .pruning import prune_cart, prune_mcart, prune_with_bound, weakest_link_sequence
from .risk_bound import BoundConfig, epsilon, prior_pd, prior_qk
from .tree_structure import (LEAF, STUMP, TreeStructure, canonical_form, enumerate_structures,
                             parse_structure, structurally_equal)

__version__ = "0.1.0"
