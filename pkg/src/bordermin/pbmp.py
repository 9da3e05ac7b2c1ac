"""Embedding probes for a fixed placement.

Three solvers share this module:

* ``guide_tree_align`` - progressive profile alignment driven by a tree.
* ``reembed_single_probe`` / ``refine_until_stable`` - optimal re-embedding of
  one probe against its fixed neighbours, swept round-robin.
* ``pbmp_exact`` - best-first search for the optimal embedding of tiny
  instances.
"""
from __future__ import annotations

import heapq
import itertools
from functools import lru_cache

import numpy as np

from . import kernels
from .hst import HstTree
from .model import (
    DepositionSchedule,
    Instance,
    Placement,
    Solution,
    border_length_fast,
)


class OracleInfeasible(RuntimeError):
    """An exact solver hit its explicit budget before proving optimality."""


def _neighbor_lists(placement: Placement) -> list[list[int]]:
    where = {cell: pid for pid, cell in enumerate(placement.cells)}
    out = []
    for (r, c) in placement.cells:
        nb = [where[x] for x in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)) if x in where]
        out.append(sorted(nb))
    return out


def _adjacency(placement: Placement) -> np.ndarray:
    n = len(placement.cells)
    adj = np.zeros((n, n), dtype=np.int64)
    for i, nb in enumerate(_neighbor_lists(placement)):
        adj[i, nb] = 1
    return adj


# ------------------------------------------------------------ guide tree

class _Profile:
    __slots__ = ("tokens", "members", "mat")

    def __init__(self, tokens, members, mat):
        self.tokens = tokens      # int64[m] column tokens
        self.members = members    # probe ids, one per row of mat
        self.mat = mat            # uint8[len(members), m] deposit flags


def _merge(P: _Profile, Q: _Profile, adj: np.ndarray) -> _Profile:
    m1, m2 = len(P.tokens), len(Q.tokens)
    cross = adj[np.ix_(P.members, Q.members)]
    gain = P.mat.T.astype(np.int64) @ cross @ Q.mat.astype(np.int64)
    # prefer border savings first, then the number of merged columns
    big = m1 + m2 + 1
    same = P.tokens[:, None] == Q.tokens[None, :]
    score = np.where(same, gain * big + 1, -1).astype(np.int64)
    table = kernels.align_table(np.ascontiguousarray(score))

    cols = []
    i, j = m1, m2
    while i > 0 or j > 0:
        if i > 0 and j > 0 and score[i - 1, j - 1] >= 0 \
                and table[i, j] == table[i - 1, j - 1] + score[i - 1, j - 1]:
            cols.append((i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and table[i, j] == table[i - 1, j]:
            cols.append((i - 1, -1))
            i -= 1
        else:
            cols.append((-1, j - 1))
            j -= 1
    cols.reverse()

    m = len(cols)
    tokens = np.empty(m, dtype=np.int64)
    mat = np.zeros((len(P.members) + len(Q.members), m), dtype=np.uint8)
    top = len(P.members)
    for t, (a, b) in enumerate(cols):
        tokens[t] = P.tokens[a] if a >= 0 else Q.tokens[b]
        if a >= 0:
            mat[:top, t] = P.mat[:, a]
        if b >= 0:
            mat[top:, t] = Q.mat[:, b]
    return _Profile(tokens, P.members + Q.members, mat)


def guide_tree_align(instance: Instance, placement: Placement, tree: HstTree) -> DepositionSchedule:
    """Align all probes progressively, bottom-up along ``tree``.

    Each merge is an indel-only alignment of two profiles.  Two columns may
    merge only if they carry the same token, so every output column holds a
    single token and the column sequence is the deposition sequence.  The
    merge maximises the number of grid-adjacent (probe, probe) pairs that end
    up sharing a deposition step, breaking ties towards fewer columns.
    """
    if tree.n_leaves != instance.n:
        raise ValueError("tree leaves do not match the probes")
    adj = _adjacency(placement)
    enc = instance.encoded()
    min_leaf = {}
    for v in reversed(tree.topological()):
        if tree.probe_of[v] >= 0:
            min_leaf[v] = int(tree.probe_of[v])
        kids = tree.children(v)
        if kids:
            min_leaf[v] = min([min_leaf[u] for u in kids] + ([min_leaf[v]] if v in min_leaf else []))

    profiles = {}
    for v in reversed(tree.topological()):
        parts = []
        if tree.probe_of[v] >= 0:
            pid = int(tree.probe_of[v])
            parts.append(_Profile(enc[pid], [pid], np.ones((1, len(enc[pid])), dtype=np.uint8)))
        for u in sorted(tree.children(v), key=min_leaf.__getitem__):
            parts.append(profiles.pop(u))
        prof = parts[0]
        for other in parts[1:]:
            prof = _merge(prof, other, adj)
        profiles[v] = prof

    final = profiles[tree.root]
    pat = np.zeros((instance.n, len(final.tokens)), dtype=np.uint8)
    pat[final.members] = final.mat
    dep = tuple(instance.alphabet[c] for c in final.tokens)
    return DepositionSchedule(dep, pat).drop_empty_steps()


# ------------------------------------------------------------- refinement

def _local_cost(pattern, c0, c1) -> int:
    return int(np.where(pattern == 1, c1, c0).sum())


def reembed_single_probe(schedule: DepositionSchedule, placement: Placement, pid: int) -> DepositionSchedule:
    """Re-embed one probe optimally against its fixed grid neighbours.

    The probe's own tokens are read off its current pattern.  The pattern is
    replaced only if the new one is strictly cheaper, so the total border
    length never increases and fixed points are left untouched.
    """
    if not (0 <= pid < schedule.n):
        raise KeyError(f"unknown probe id {pid}")
    nbrs = _neighbor_lists(placement)[pid]
    codes = {}
    dep = np.array([codes.setdefault(t, len(codes)) for t in schedule.deposition], dtype=np.int64)
    seq = np.array([codes[t] for t in schedule.embedded(pid)], dtype=np.int64)
    if nbrs:
        ones = schedule.patterns[nbrs].astype(np.int64).sum(axis=0)
    else:
        ones = np.zeros(len(dep), dtype=np.int64)
    c1 = (len(nbrs) - ones).astype(np.int64)
    c0 = ones.astype(np.int64)
    current = _local_cost(schedule.patterns[pid], c0, c1)
    pattern, cost = kernels.reembed_dp(dep, seq, c0, c1)
    if cost >= kernels.INF:
        raise ValueError(f"probe {pid} is not a subsequence of the deposition")
    if cost < current:
        return schedule.with_pattern(pid, pattern)
    return schedule


def refine_until_stable(schedule: DepositionSchedule, placement: Placement,
                        max_rounds: int = 10) -> DepositionSchedule:
    """Sweep ``reembed_single_probe`` over ids 0..n-1 until nothing improves."""
    for _ in range(max_rounds):
        changed = False
        for pid in range(schedule.n):
            new = reembed_single_probe(schedule, placement, pid)
            if new is not schedule:
                schedule, changed = new, True
        if not changed:
            break
    return schedule


# ------------------------------------------------------------ exact search

def _connected_subsets(members: tuple[int, ...], nbrs: list[list[int]]):
    """Non-empty subsets of ``members`` that induce a connected grid subgraph."""
    k = len(members)
    idx = {p: i for i, p in enumerate(members)}
    nb_mask = [0] * k
    for i, p in enumerate(members):
        for q in nbrs[p]:
            if q in idx:
                nb_mask[i] |= 1 << idx[q]
    out = []
    for mask in range(1, 1 << k):
        low = mask & -mask
        seen = low
        frontier = low
        while frontier:
            bit = frontier & -frontier
            frontier ^= bit
            grow = nb_mask[bit.bit_length() - 1] & mask & ~seen
            seen |= grow
            frontier |= grow
        if seen == mask:
            out.append(tuple(members[i] for i in range(k) if mask >> i & 1))
    return out


def pbmp_exact(instance: Instance, placement: Placement, max_states: int = 200_000) -> Solution:
    """Optimal embedding for a fixed placement, by A* over prefix vectors.

    A state records how many tokens of each probe have been deposited.  A
    move deposits token ``c`` into a set of probes whose next token is ``c``
    and costs the border of that mask.  Two reductions keep the search small
    without losing optimality:

    * only grid-connected sets are tried (a disconnected mask costs the same
      as its components deposited one after another);
    * a probe whose next token appears in no neighbour's remaining suffix is
      deposited alone immediately, at cost equal to its number of neighbours.

    The heuristic sums, over adjacent pairs, the LCS distance of the unread
    suffixes; it is consistent, so the first goal popped is optimal.  More
    than ``max_states`` expansions raises ``OracleInfeasible``.
    """
    placement.check(instance.grid)
    n = instance.n
    enc = [tuple(int(x) for x in e) for e in instance.encoded()]
    lens = tuple(len(e) for e in enc)
    nbrs = _neighbor_lists(placement)
    deg = [len(nb) for nb in nbrs]
    pairs = [(i, j) for i in range(n) for j in nbrs[i] if i < j]
    arrs = instance.encoded()
    suf = {(i, j): kernels.suffix_lcs_table(arrs[i], arrs[j]) for i, j in pairs}
    suffix_tokens = [[frozenset(e[p:]) for p in range(len(e) + 1)] for e in enc]
    adjset = set(pairs)

    def h(state):
        total = 0
        for (i, j) in pairs:
            a, b = state[i], state[j]
            total += lens[i] - a + lens[j] - b - 2 * int(suf[(i, j)][a, b])
        return total

    def closure(state):
        state = list(state)
        steps, cost = [], 0
        changed = True
        while changed:
            changed = False
            for i in range(n):
                while state[i] < lens[i]:
                    c = enc[i][state[i]]
                    if any(c in suffix_tokens[j][state[j]] for j in nbrs[i]):
                        break
                    state[i] += 1
                    steps.append((c, (i,)))
                    cost += deg[i]
                    changed = True
        return tuple(state), steps, cost

    @lru_cache(maxsize=None)
    def subsets(members):
        out = []
        for S in _connected_subsets(members, nbrs):
            inner = sum(1 for a, b in itertools.combinations(S, 2) if (min(a, b), max(a, b)) in adjset)
            out.append((S, sum(deg[i] for i in S) - 2 * inner))
        return out

    start, steps0, c0 = closure((0,) * n)
    goal = lens
    best_g = {start: c0}
    parent = {start: (None, steps0)}
    counter = itertools.count()
    heap = [(c0 + h(start), -c0, next(counter), start)]
    closed = set()
    expanded = 0
    while heap:
        f, neg_g, _, s = heapq.heappop(heap)
        g = -neg_g
        if s in closed or g != best_g[s]:
            continue
        if s == goal:
            break
        closed.add(s)
        expanded += 1
        if expanded > max_states:
            raise OracleInfeasible(f"exact P-BMP search exceeded {max_states} states")
        by_token = {}
        for i in range(n):
            if s[i] < lens[i]:
                by_token.setdefault(enc[i][s[i]], []).append(i)
        for c in sorted(by_token):
            for S, mcost in subsets(tuple(by_token[c])):
                t = list(s)
                for i in S:
                    t[i] += 1
                t2, extra, ecost = closure(t)
                ng = g + mcost + ecost
                if ng < best_g.get(t2, kernels.INF):
                    best_g[t2] = ng
                    parent[t2] = (s, [(c, S)] + extra)
                    heapq.heappush(heap, (ng + h(t2), -ng, next(counter), t2))
    else:  # pragma: no cover - the goal is always reachable
        raise OracleInfeasible("search space exhausted without reaching the goal")

    masks = []
    s = goal
    while s is not None:
        prev, steps = parent[s]
        masks = steps + masks
        s = prev
    pat = np.zeros((n, len(masks)), dtype=np.uint8)
    for t, (_, S) in enumerate(masks):
        pat[list(S), t] = 1
    dep = tuple(instance.alphabet[c] for c, _ in masks)
    sched = DepositionSchedule(dep, pat)
    cost = best_g[goal]
    if border_length_fast(placement, sched, instance.grid) != cost:  # pragma: no cover
        raise AssertionError("exact search cost does not match the evaluated schedule")
    return Solution(placement, sched, int(cost))


def pair_lower_bound(instance: Instance, placement: Placement, metric=None) -> int:
    """Sum of LCS distances over grid-adjacent pairs; no schedule can beat it."""
    if metric is None:
        from .metric import build_metric
        metric = build_metric(instance)
    return int(sum(metric.dist[a, b] for a, b in placement.adjacent_probe_pairs(instance.grid)))
