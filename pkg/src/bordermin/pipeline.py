"""End-to-end placement + embedding: metric, tree, Euler layout, alignment.

Each trial samples two trees from independent seeds, one for the layout and
one to guide the alignment (``shared_tree=True`` reuses the layout tree for
both), then polishes the embedding with single-probe
re-embedding.  The cheapest valid solution over all trials is returned; ties
go to the lexicographically smaller deposition sequence.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .hst import HstTree, frt_embed
from .metric import MetricSpace, build_metric
from .model import Instance, Placement, Solution, make_solution, validate_solution
from .pbmp import guide_tree_align, pair_lower_bound, refine_until_stable
from .placement import PlacementOrder, crossing_stats, euler_order, order_to_placement, placement_cost

DEFAULT_TRIALS = 16
DEFAULT_SEED = 0
DEFAULT_ROUNDS = 10


def trial_seeds(seed: int, trial: int) -> tuple[int, int]:
    """Two 64-bit seeds for one trial; independent of the total trial count."""
    ss = np.random.SeedSequence(seed, spawn_key=(trial,))
    words = ss.generate_state(4, dtype=np.uint32).astype(np.uint64)
    a = int(words[0] << np.uint64(32) | words[1])
    b = int(words[2] << np.uint64(32) | words[3])
    return a, b


@dataclass
class Trial:
    index: int
    solution: Solution
    placement_tree: HstTree
    order: PlacementOrder
    aligned_cost: int


@dataclass
class PipelineResult:
    best: Solution
    best_trial: int
    trials: list[Trial] = field(default_factory=list)

    @property
    def costs(self) -> list[int]:
        return [t.solution.cost for t in self.trials]


def run_trial(instance: Instance, metric: MetricSpace, seed: int, index: int,
              refine_rounds: int = DEFAULT_ROUNDS, serpentine: bool = False,
              shared_tree: bool = False) -> Trial:
    place_seed, align_seed = trial_seeds(seed, index)
    tree = frt_embed(metric, place_seed)
    order = euler_order(tree)
    placement = order_to_placement(order, instance.grid, serpentine=serpentine)
    guide = tree if shared_tree else frt_embed(metric, align_seed)
    sched = guide_tree_align(instance, placement, guide)
    aligned = make_solution(instance, placement, sched).cost
    sched = refine_until_stable(sched, placement, refine_rounds).drop_empty_steps()
    return Trial(index, make_solution(instance, placement, sched), tree, order, aligned)


def _trial_job(args):
    return run_trial(*args)


def _key(sol: Solution):
    return sol.cost, sol.schedule.deposition


def solve_bmp_detailed(instance: Instance, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
                       refine_rounds: int = DEFAULT_ROUNDS, workers: int = 1,
                       serpentine: bool = False, shared_tree: bool = False) -> PipelineResult:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    metric = build_metric(instance)
    jobs = [(instance, metric, seed, t, refine_rounds, serpentine, shared_tree) for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_job, jobs))
    else:
        results = [_trial_job(j) for j in jobs]
    best = min(results, key=lambda t: (_key(t.solution), t.index))
    report = validate_solution(instance, best.solution)
    if not report:  # pragma: no cover
        raise AssertionError(f"pipeline produced an invalid solution: {report.message}")
    return PipelineResult(best.solution, best.index, results)


def solve_bmp(instance: Instance, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
              refine_rounds: int = DEFAULT_ROUNDS, workers: int = 1) -> Solution:
    """Best solution over ``trials`` independent tree samples."""
    return solve_bmp_detailed(instance, seed, trials, refine_rounds, workers).best


def lower_bound(instance: Instance, placement: Placement | None = None,
                metric: MetricSpace | None = None) -> int:
    """Certified lower bound on the border length.

    With a placement: the LCS distances summed over adjacent pairs.  Without
    one: every cell of degree ``k`` holding probe ``i`` pays at least half of
    the ``k`` smallest distances from ``i``; the cheapest assignment of probes
    to cell degrees (an assignment problem) bounds every placement.
    """
    if metric is None:
        metric = build_metric(instance)
    if placement is not None:
        return pair_lower_bound(instance, placement, metric)
    n = instance.n
    if n == 1:
        return 0
    grid = instance.grid
    degrees = [grid.degree(r, c) for r, c in grid.cells()]
    d = metric.dist.astype(np.int64)
    partial = np.zeros((n, 5), dtype=np.int64)
    for i in range(n):
        others = np.sort(np.delete(d[i], i))
        partial[i, 1:] = np.cumsum(np.pad(others, (0, max(0, 4 - len(others))))[:4])
    cost = partial[:, degrees]
    rows, cols = linear_sum_assignment(cost)
    total = int(cost[rows, cols].sum())
    return (total + 1) // 2


def ratio_report(instance: Instance, solution: Solution, *, reference: int | None = None,
                 result: PipelineResult | None = None, metric: MetricSpace | None = None) -> dict:
    """Flat, machine-readable summary of a solution's quality."""
    if metric is None:
        metric = build_metric(instance)
    lb = lower_bound(instance, solution.placement, metric)
    lb_free = lower_bound(instance, None, metric)
    rep = {
        "n": instance.n,
        "grid": f"{instance.grid.rows}x{instance.grid.cols}",
        "cost": solution.cost,
        "deposition_length": len(solution.schedule.deposition),
        "lower_bound": lb,
        "lower_bound_free": lb_free,
        "ratio_vs_lower_bound": (solution.cost / lb) if lb else (1.0 if solution.cost == 0 else float("inf")),
        "valid": bool(validate_solution(instance, solution)),
    }
    if reference is not None:
        rep["reference"] = reference
        rep["ratio_vs_reference"] = (solution.cost / reference) if reference else (
            1.0 if solution.cost == 0 else float("inf"))
    if result is not None:
        costs = np.array(result.costs, dtype=float)
        best = result.trials[result.best_trial]
        rep.update({
            "trials": len(costs),
            "best_trial": result.best_trial,
            "trial_cost_min": int(costs.min()),
            "trial_cost_mean": float(costs.mean()),
            "trial_cost_max": int(costs.max()),
            "aligned_cost_best_trial": best.aligned_cost,
            "placement_cost_best_trial": placement_cost(best.order, instance.grid, metric),
        })
        stats = crossing_stats(best.placement_tree, best.order, instance.grid)
        if stats:
            cr = np.array([s["crossings"] for s in stats])
            rep.update({"tree_edges": len(stats), "crossings_max": int(cr.max()),
                        "crossings_mean": float(cr.mean())})
    return rep


def format_report(rep: dict) -> str:
    lines = []
    for k, v in rep.items():
        if isinstance(v, float):
            v = f"{v:.6g}"
        elif isinstance(v, bool):
            v = str(v).lower()
        lines.append(f"{k}={v}")
    return "\n".join(lines) + "\n"
