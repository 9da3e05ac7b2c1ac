"""Randomised embedding of a finite metric into a dominating hierarchical tree.

The construction is the Fakcharoenphol-Rao-Talwar decomposition: draw a
random permutation of the points and a scale ``beta`` in ``[1, 2)``; the
cluster of a level-``i`` node is split by assigning every member to the first
point of the permutation within radius ``beta * 2**(i-1)``.  A level-``i``
cluster therefore has diameter at most ``beta * 2**(i+1) < 2**(i+2)``, and the
edge from a level-``i`` node to each child has length ``2**(i+1)``, so two points
first separated at level ``i`` are at least ``2**(i+2)`` apart in the tree: the
tree dominates the metric.

Points at distance zero are merged before the decomposition and come back as
zero-length sibling leaves under their representative.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metric import MetricSpace


@dataclass(frozen=True, eq=False)
class HstTree:
    """Rooted tree stored as parent pointers.

    ``leaf_node[p]`` is the node holding probe ``p``.  ``edge_len[v]`` is the
    length of the edge from ``v`` up to ``parent[v]`` (0 for the root).
    """

    parent: np.ndarray
    edge_len: np.ndarray
    level: np.ndarray
    leaf_node: np.ndarray
    seed: int = 0

    def __post_init__(self):
        for name in ("parent", "edge_len", "level", "leaf_node"):
            arr = np.asarray(getattr(self, name), dtype=np.int64).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        children = [[] for _ in range(len(self.parent))]
        for v, p in enumerate(self.parent):
            if p >= 0:
                children[p].append(v)
        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))
        depth = np.zeros(len(self.parent), dtype=np.int64)
        dist = np.zeros(len(self.parent), dtype=np.int64)
        for v in self.topological():
            p = self.parent[v]
            if p >= 0:
                depth[v] = depth[p] + 1
                dist[v] = dist[p] + self.edge_len[v]
        object.__setattr__(self, "_depth", depth)
        object.__setattr__(self, "_rootdist", dist)
        probe_of = np.full(len(self.parent), -1, dtype=np.int64)
        probe_of[self.leaf_node] = np.arange(len(self.leaf_node))
        object.__setattr__(self, "probe_of", probe_of)

    @property
    def root(self) -> int:
        return int(np.flatnonzero(self.parent < 0)[0])

    @property
    def n_leaves(self) -> int:
        return len(self.leaf_node)

    @property
    def n_nodes(self) -> int:
        return len(self.parent)

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def topological(self):
        """Nodes in root-first (BFS) order."""
        root = int(np.flatnonzero(self.parent < 0)[0])
        order, head = [root], 0
        while head < len(order):
            order.extend(self._children[order[head]])
            head += 1
        return order

    def edges(self) -> list[int]:
        """Each edge is named by its lower endpoint."""
        return [v for v in range(self.n_nodes) if self.parent[v] >= 0]

    def leaves_below(self, v: int) -> list[int]:
        """Probe ids in the subtree of node ``v``."""
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            if self.probe_of[u] >= 0:
                out.append(int(self.probe_of[u]))
            stack.extend(self._children[u])
        return sorted(out)

    def lca(self, a: int, b: int) -> int:
        da, db = self._depth[a], self._depth[b]
        while da > db:
            a, da = self.parent[a], da - 1
        while db > da:
            b, db = self.parent[b], db - 1
        while a != b:
            a, b = self.parent[a], self.parent[b]
        return int(a)

    def path_edges(self, i: int, j: int) -> list[int]:
        """Edges (by lower endpoint) on the path between leaves ``i`` and ``j``."""
        a, b = int(self.leaf_node[i]), int(self.leaf_node[j])
        top = self.lca(a, b)
        out = []
        for v in (a, b):
            while v != top:
                out.append(v)
                v = int(self.parent[v])
        return out

    def distance(self, i: int, j: int) -> int:
        return tree_distance(self, i, j)

    def distance_matrix(self) -> np.ndarray:
        n = self.n_leaves
        out = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                out[i, j] = out[j, i] = tree_distance(self, i, j)
        return out


def tree_distance(tree: HstTree, i: int, j: int) -> int:
    """Length of the tree path between the leaves of probes ``i`` and ``j``."""
    if not (0 <= i < tree.n_leaves and 0 <= j < tree.n_leaves):
        raise KeyError(f"unknown leaf ({i}, {j})")
    a, b = int(tree.leaf_node[i]), int(tree.leaf_node[j])
    top = tree.lca(a, b)
    return int(tree._rootdist[a] + tree._rootdist[b] - 2 * tree._rootdist[top])


class _Builder:
    def __init__(self):
        self.parent, self.edge_len, self.level = [], [], []

    def add(self, parent: int, length: int, level: int) -> int:
        self.parent.append(parent)
        self.edge_len.append(length)
        self.level.append(level)
        return len(self.parent) - 1


def frt_embed(metric: MetricSpace, seed: int) -> HstTree:
    """Sample one dominating tree for ``metric``; deterministic in ``seed``."""
    n = metric.n
    if n == 0:
        raise ValueError("cannot embed an empty metric")
    d = metric.dist
    rng = np.random.default_rng(seed)
    beta = rng.uniform(1.0, 2.0)

    # collapse zero-distance groups onto their smallest id
    rep_of = np.arange(n)
    for i in range(n):
        for j in range(i):
            if rep_of[j] == j and d[i, j] == 0:
                rep_of[i] = j
                break
    reps = [i for i in range(n) if rep_of[i] == i]
    perm = [reps[k] for k in rng.permutation(len(reps))]
    rank = {p: r for r, p in enumerate(perm)}

    b = _Builder()
    diam = int(d[np.ix_(reps, reps)].max()) if len(reps) > 1 else 0
    top = 1
    while beta * 2.0 ** (top - 1) < diam:
        top += 1
    rep_node = {}

    def split(members, node, lvl):
        # members all sit in one level-`lvl` cluster at tree node `node`
        if len(members) == 1:
            rep_node[members[0]] = node
            return
        radius = beta * 2.0 ** (lvl - 1)
        groups = {}
        for v in members:
            centre = next(u for u in perm if d[u, v] <= radius)
            groups.setdefault(centre, []).append(v)
        for centre in sorted(groups, key=rank.__getitem__):
            child = b.add(node, 2 ** (lvl + 1), lvl - 1)
            split(groups[centre], child, lvl - 1)

    root = b.add(-1, 0, top)
    split(sorted(reps), root, top)

    leaf_node = np.zeros(n, dtype=np.int64)
    for r in reps:
        group = [i for i in range(n) if rep_of[i] == r]
        node = rep_node[r]
        if len(group) == 1:
            leaf_node[r] = node
        else:
            lvl = b.level[node]
            for i in group:
                leaf_node[i] = b.add(node, 0, lvl)

    parent, edge_len, level, leaf_node = _compress(b, leaf_node)
    return HstTree(parent, edge_len, level, leaf_node, seed=seed)


def _compress(b: _Builder, leaf_node):
    """Splice out unary internal nodes, summing edge lengths."""
    parent = list(b.parent)
    edge_len = list(b.edge_len)
    nchild = [0] * len(parent)
    for p in parent:
        if p >= 0:
            nchild[p] += 1
    is_leaf = set(int(v) for v in leaf_node)
    keep = [True] * len(parent)
    root = parent.index(-1)
    # unary root: promote its only child
    while nchild[root] == 1 and root not in is_leaf:
        child = next(v for v in range(len(parent)) if parent[v] == root and keep[v])
        keep[root] = False
        parent[child], edge_len[child] = -1, 0
        root = child
    for v in range(len(parent)):
        if not keep[v] or parent[v] < 0:
            continue
        p = parent[v]
        while p >= 0 and nchild[p] == 1 and p not in is_leaf and parent[p] >= 0:
            keep[p] = False
            edge_len[v] += edge_len[p]
            p = parent[p]
        parent[v] = p
    new_id = {}
    for v in range(len(parent)):
        if keep[v]:
            new_id[v] = len(new_id)
    order = sorted(new_id, key=new_id.__getitem__)
    P = [new_id[parent[v]] if parent[v] >= 0 else -1 for v in order]
    E = [edge_len[v] for v in order]
    L = [b.level[v] for v in order]
    leaves = [new_id[int(v)] for v in leaf_node]
    return P, E, L, leaves
