"""Linear orders of probes from a tree, and their grid layouts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hst import HstTree
from .metric import MetricSpace
from .model import Grid, Placement


@dataclass(frozen=True)
class PlacementOrder:
    pi: tuple[int, ...]
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "pi", tuple(int(v) for v in self.pi))
        if sorted(self.pi) != list(range(len(self.pi))):
            raise ValueError("order is not a permutation of 0..n-1")

    def __len__(self):
        return len(self.pi)


def euler_order(tree: HstTree) -> PlacementOrder:
    """Leaves in first-visit order of a depth-first tour from the root.

    Children are visited in ascending order of the smallest probe id below
    them, which makes the order canonical for a given tree.
    """
    min_leaf = np.full(tree.n_nodes, np.iinfo(np.int64).max, dtype=np.int64)
    for v in reversed(tree.topological()):
        if tree.probe_of[v] >= 0:
            min_leaf[v] = min(min_leaf[v], tree.probe_of[v])
        p = tree.parent[v]
        if p >= 0:
            min_leaf[p] = min(min_leaf[p], min_leaf[v])
    out, stack = [], [tree.root]
    while stack:
        v = stack.pop()
        if tree.probe_of[v] >= 0:
            out.append(int(tree.probe_of[v]))
        kids = sorted(tree.children(v), key=lambda u: min_leaf[u])
        stack.extend(reversed(kids))
    return PlacementOrder(tuple(out), seed=tree.seed)


def order_to_placement(order: PlacementOrder, grid: Grid, serpentine: bool = False) -> Placement:
    """Row-major layout: ``pi[0..cols)`` fill row 0 left to right, and so on.

    ``serpentine=True`` reverses every other row (experimental).
    """
    if len(order) != grid.size:
        raise ValueError(f"order of {len(order)} probes does not fit a {grid.rows}x{grid.cols} grid")
    cells = [None] * grid.size
    for pos, pid in enumerate(order.pi):
        r, c = divmod(pos, grid.cols)
        if serpentine and r % 2 == 1:
            c = grid.cols - 1 - c
        cells[pid] = (r, c)
    return Placement(tuple(cells))


def placement_cost(order: PlacementOrder, grid: Grid, metric: MetricSpace) -> int:
    """Sum of metric distances over horizontally and vertically adjacent cells."""
    if len(order) != grid.size or metric.n != grid.size:
        raise ValueError("order, grid and metric sizes disagree")
    at = np.asarray(order.pi, dtype=np.int64).reshape(grid.rows, grid.cols)
    d = metric.dist
    return int(d[at[:, :-1], at[:, 1:]].sum() + d[at[:-1, :], at[1:, :]].sum())


def edge_crossings(tree: HstTree, order: PlacementOrder, grid: Grid, edge: int) -> int:
    """Grid-adjacent pairs whose tree path uses ``edge``.

    ``edge`` is named by its lower endpoint; a path uses it exactly when one
    end of the pair lies below it and the other does not.
    """
    if not (0 <= edge < tree.n_nodes) or tree.parent[edge] < 0:
        raise KeyError(f"{edge} is not an edge of the tree")
    below = np.zeros(tree.n_leaves, dtype=bool)
    below[tree.leaves_below(edge)] = True
    at = below[np.asarray(order.pi, dtype=np.int64).reshape(grid.rows, grid.cols)]
    return int(np.count_nonzero(at[:, 1:] != at[:, :-1]) + np.count_nonzero(at[1:, :] != at[:-1, :]))


def crossing_stats(tree: HstTree, order: PlacementOrder, grid: Grid) -> list[dict]:
    """Per-edge crossings with the cut sizes on either side."""
    n = tree.n_leaves
    out = []
    for e in tree.edges():
        a = len(tree.leaves_below(e))
        out.append({"edge": e, "below": a, "above": n - a,
                    "crossings": edge_crossings(tree, order, grid, e)})
    return out
