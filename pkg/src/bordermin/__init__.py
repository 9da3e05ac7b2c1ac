"""Border length minimisation for photolithographic probe arrays."""
from ._accel import USE_NUMBA
from .hst import HstTree, frt_embed, tree_distance
from .metric import MetricSpace, build_metric, lcs, lcs_length, probe_distance, sequence_distance
from .model import (
    GAP,
    DepositionSchedule,
    Grid,
    Instance,
    InvalidSolution,
    Mask,
    Placement,
    Probe,
    Report,
    Solution,
    border_length_fast,
    border_length_masks,
    border_length_pairwise,
    make_solution,
    mask_border,
    masks_of,
    natural_schedule,
    validate_solution,
)
from .oracle import bmp_exact, optimal_placements, symmetry_classes
from .pbmp import OracleInfeasible, guide_tree_align, pbmp_exact, reembed_single_probe, refine_until_stable
from .pipeline import lower_bound, ratio_report, solve_bmp, solve_bmp_detailed
from .placement import PlacementOrder, edge_crossings, euler_order, order_to_placement, placement_cost
from .reductions import (
    GraphInput,
    ScsInput,
    build_hampath_instance,
    build_ipq,
    check_hampath_certificate,
    extract_scs,
    lift_1d_to_2d,
    scs_exact_dp,
    solve_1d_exact,
    solve_ipq_exact,
)
from .textio import ParseError, format_instance, format_solution, parse_instance, parse_solution

__version__ = "0.1.0"
