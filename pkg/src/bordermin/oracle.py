"""Exhaustive placement search for tiny instances.

Every placement is solved exactly with ``pbmp_exact``.  Placements that map
onto each other under a grid symmetry, or that differ only by swapping
identical probes, share one cost and are solved once.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .metric import build_metric
from .model import Grid, Instance, Placement, Solution, grid_symmetries
from .pbmp import OracleInfeasible, pbmp_exact

MAX_CELLS = 6


def _cell_maps(grid: Grid) -> list[list[int]]:
    """Each symmetry as an index permutation of the row-major cells."""
    cells = list(grid.cells())
    index = {c: k for k, c in enumerate(cells)}
    return [[index[f(r, c)] for r, c in cells] for f in grid_symmetries(grid)]


def _canonical(labels: tuple, maps: list[list[int]]) -> tuple:
    # labels[k] is what sits in cell k; the image moves it to cell m[k]
    best = None
    for m in maps:
        img = [None] * len(labels)
        for k, v in enumerate(labels):
            img[m[k]] = v
        img = tuple(img)
        if best is None or img < best:
            best = img
    return best


def _placement_from_cells(probe_at: tuple[int, ...], grid: Grid) -> Placement:
    cells = list(grid.cells())
    out = [None] * len(probe_at)
    for k, pid in enumerate(probe_at):
        out[pid] = cells[k]
    return Placement(tuple(out))


def symmetry_classes(grid: Grid) -> list[Placement]:
    """One representative placement per orbit of the grid's symmetry group."""
    if grid.size > 9:
        raise ValueError(f"{grid.rows}x{grid.cols} is too large to enumerate")
    maps = _cell_maps(grid)
    seen, out = set(), []
    for perm in itertools.permutations(range(grid.size)):
        key = _canonical(perm, maps)
        if key not in seen:
            seen.add(key)
            out.append(_placement_from_cells(key, grid))
    return out


@dataclass
class _Candidate:
    lb: int
    key: tuple
    probe_at: tuple[int, ...]


def _candidates(instance: Instance, max_cells: int) -> tuple[list[_Candidate], dict]:
    grid = instance.grid
    n = instance.n
    if n > max_cells:
        raise OracleInfeasible(f"{n} cells exceed the exhaustive search limit of {max_cells}")
    maps = _cell_maps(grid)
    d = build_metric(instance).dist
    seqs = instance.seqs
    cells = list(grid.cells())
    index = {c: k for k, c in enumerate(cells)}
    pairs = [(index[a], index[b]) for a, b in grid.adjacent_pairs()]
    classes: dict[tuple, list[tuple[int, ...]]] = {}
    reps = []
    for perm in itertools.permutations(range(n)):
        key = _canonical(tuple(seqs[p] for p in perm), maps)
        if key not in classes:
            classes[key] = []
            lb = int(sum(d[perm[a], perm[b]] for a, b in pairs))
            reps.append(_Candidate(lb, key, perm))
        classes[key].append(perm)
    reps.sort(key=lambda c: (c.lb, c.probe_at))
    return reps, classes


def bmp_exact(instance: Instance, max_states: int = 200_000, max_cells: int = MAX_CELLS) -> Solution:
    """Minimum border length over all placements and embeddings.

    Distinct placement classes are visited by increasing pairwise LCS bound;
    the search stops once that bound reaches the best cost found.  Raises
    ``OracleInfeasible`` past ``max_cells`` cells or when any per-placement
    search exceeds ``max_states`` expansions.
    """
    reps, _ = _candidates(instance, max_cells)
    best = None
    for cand in reps:
        if best is not None and cand.lb >= best.cost:
            break
        sol = pbmp_exact(instance, _placement_from_cells(cand.probe_at, instance.grid), max_states)
        if best is None or sol.cost < best.cost:
            best = sol
    return best


def optimal_placements(instance: Instance, max_states: int = 200_000,
                       max_cells: int = MAX_CELLS) -> tuple[int, list[Placement]]:
    """The optimum and every placement (not only class representatives) reaching it."""
    reps, classes = _candidates(instance, max_cells)
    costs = {}
    best = None
    for cand in reps:
        if best is not None and cand.lb > best:
            break
        cost = pbmp_exact(instance, _placement_from_cells(cand.probe_at, instance.grid), max_states).cost
        costs[cand.key] = cost
        best = cost if best is None else min(best, cost)
    out = []
    for key, cost in costs.items():
        if cost == best:
            out.extend(_placement_from_cells(p, instance.grid) for p in classes[key])
    out.sort(key=lambda pl: pl.cells)
    return best, out


def bmp_exact_unreduced(instance: Instance, max_states: int = 200_000) -> int:
    """Optimum by solving every placement separately; for cross-checks only."""
    costs = [pbmp_exact(instance, _placement_from_cells(p, instance.grid), max_states).cost
             for p in itertools.permutations(range(instance.n))]
    return int(np.min(costs))
