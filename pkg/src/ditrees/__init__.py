"""Exact solvers for budgeted edge-upgrade interdiction on rooted trees.

Raise edge weights of a rooted tree — each edge capped by an upper bound and
a max-norm cost budget, the set of changed edges limited by a weighted
change-count budget — to push the sum of root-to-leaf distances as high as
possible while the shortest root-to-leaf distance stays above a floor; plus
the inverse search for the smallest cost budget reaching a target sum, and
brute-force oracles to verify everything on small instances.
"""

from .bench import ALGORITHMS, BenchReport, BenchRow, run_bench
from .check import (CheckOutcome, Mismatch, PROBLEMS, compare_instance,
                    family_for_seed, minimize_instance, run_check)
from .combine_dp import CitSolution, CitTable, DPState, solve_cit
from .dit import BisectionTrace, solve_dit
from .generate import InstanceFamily, gen_instance
from .greedy import solve_dit_n1
from .io import (FormatError, dump_instance, load_instance, loads_instance,
                 report_to_dict, save_instance)
from .mcdit import BudgetSearchTrace, solve_mcdit
from .oracle import (ORACLE_CAP, OracleResult, oracle_cit, oracle_dit,
                     oracle_mcdit, oracle_single_upgrade)
from .plans import SolveReport, UpgradePlan
from .relax import UpperWeights, solve_dit_inf, upper_weights
from .tree import (InstanceError, LeafControl, SubtreeIndex, TreeInstance,
                   build_instance, leaf_control, path_weight, srd, srd_by_paths,
                   subtree_edges, subtree_intervals)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "BenchReport", "BenchRow", "BisectionTrace", "BudgetSearchTrace",
    "CheckOutcome", "CitSolution", "CitTable", "DPState", "FormatError",
    "InstanceError", "InstanceFamily", "LeafControl", "Mismatch", "ORACLE_CAP",
    "OracleResult", "PROBLEMS", "SolveReport", "SubtreeIndex", "TreeInstance",
    "UpgradePlan", "UpperWeights", "build_instance", "compare_instance",
    "dump_instance", "family_for_seed", "gen_instance", "leaf_control",
    "load_instance", "loads_instance", "minimize_instance", "oracle_cit",
    "oracle_dit", "oracle_mcdit", "oracle_single_upgrade", "path_weight",
    "report_to_dict", "run_bench", "run_check", "save_instance", "solve_cit",
    "solve_dit", "solve_dit_inf", "solve_dit_n1", "solve_mcdit", "srd",
    "srd_by_paths", "subtree_edges", "subtree_intervals", "upper_weights",
]
