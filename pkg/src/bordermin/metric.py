"""LCS distance between probes and the metric space it induces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .model import Instance, Probe


@dataclass(frozen=True, eq=False)
class MetricSpace:
    dist: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=np.int64).copy()
        d.flags.writeable = False
        object.__setattr__(self, "dist", d)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __call__(self, i: int, j: int) -> int:
        return int(self.dist[i, j])

    def check_axioms(self) -> None:
        d = self.dist
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if (d < 0).any() or (np.diag(d) != 0).any() or (d != d.T).any():
            raise ValueError("distance matrix is not a symmetric non-negative zero-diagonal matrix")
        # d[i,k] <= d[i,j] + d[j,k] for every j
        viol = d[:, None, :] > d[:, :, None] + d[None, :, :]
        if viol.any():
            i, j, k = np.argwhere(viol)[0]
            raise ValueError(f"triangle inequality fails for ({i},{j},{k})")


def _encode(a: Sequence[str], b: Sequence[str]):
    codes = {}
    ea = np.array([codes.setdefault(t, len(codes)) for t in a], dtype=np.int64)
    eb = np.array([codes.setdefault(t, len(codes)) for t in b], dtype=np.int64)
    return ea, eb


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of a longest common subsequence of two token sequences."""
    if isinstance(a, str):
        a = tuple(a)
    if isinstance(b, str):
        b = tuple(b)
    ea, eb = _encode(a, b)
    return int(kernels.lcs_length(ea, eb))


def lcs(a: Sequence[str], b: Sequence[str]) -> tuple[str, ...]:
    """One LCS, taking the leftmost matches on ties."""
    a, b = tuple(a), tuple(b)
    ea, eb = _encode(a, b)
    suf = kernels.suffix_lcs_table(ea, eb)
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif suf[i + 1, j] >= suf[i, j + 1]:
            i += 1
        else:
            j += 1
    return tuple(out)


def sequence_distance(a: Sequence[str], b: Sequence[str]) -> int:
    return len(a) + len(b) - 2 * lcs_length(a, b)


def probe_distance(a: Probe, b: Probe) -> int:
    """``len(a) + len(b) - 2 |LCS(a, b)|``: the indel distance."""
    return sequence_distance(a.seq, b.seq)


def build_metric(instance: Instance, check: bool = __debug__) -> MetricSpace:
    enc = instance.encoded()
    lengths = np.array([len(e) for e in enc], dtype=np.int64)
    offsets = np.zeros(len(enc) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum(lengths)
    flat = np.concatenate(enc) if enc else np.zeros(0, dtype=np.int64)
    flat = np.ascontiguousarray(flat, dtype=np.int64)
    common = kernels.lcs_matrix(flat, offsets)
    dist = lengths[:, None] + lengths[None, :] - 2 * common
    np.fill_diagonal(dist, 0)
    space = MetricSpace(dist)
    if check and space.n <= 200:
        space.check_axioms()
    return space


def format_metric(space: MetricSpace) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in space.dist) + "\n"
