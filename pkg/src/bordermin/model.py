"""Domain types and the two border-length accountings.

A solution's cost can be computed pairwise (sum over grid-adjacent probe pairs
of the Hamming distance between their deposit patterns) or per mask (sum over
deposition steps of the number of adjacent cell pairs with exactly one cell
deposited).  The two always agree; they are kept as separate code paths so
that each checks the other.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

GAP = "-"


class InvalidSolution(ValueError):
    """Raised when a placement or schedule violates its invariants."""


def check_token(tok: str) -> str:
    if not isinstance(tok, str) or not tok:
        raise ValueError(f"invalid token {tok!r}: must be a non-empty string")
    if tok == GAP:
        raise ValueError("the gap atom '-' cannot be used as a token")
    if any(ch.isspace() for ch in tok):
        raise ValueError(f"invalid token {tok!r}: contains whitespace")
    return tok


@dataclass(frozen=True)
class Probe:
    id: int
    seq: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))
        for tok in self.seq:
            check_token(tok)

    def __len__(self):
        return len(self.seq)


@dataclass(frozen=True)
class Grid:
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def cells(self):
        return [(r, c) for r in range(self.rows) for c in range(self.cols)]

    def neighbors(self, r: int, c: int):
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            rr, cc = r + dr, c + dc
            if 0 <= rr < self.rows and 0 <= cc < self.cols:
                yield rr, cc

    def adjacent_pairs(self):
        """Unordered 4-neighbour cell pairs, each listed once."""
        pairs = []
        for r in range(self.rows):
            for c in range(self.cols):
                if c + 1 < self.cols:
                    pairs.append(((r, c), (r, c + 1)))
                if r + 1 < self.rows:
                    pairs.append(((r, c), (r + 1, c)))
        return pairs

    def degree(self, r: int, c: int) -> int:
        return sum(1 for _ in self.neighbors(r, c))


@dataclass(frozen=True)
class Instance:
    alphabet: tuple[str, ...]
    probes: tuple[Probe, ...]
    grid: Grid

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "probes", tuple(sorted(self.probes, key=lambda p: p.id)))
        for tok in self.alphabet:
            check_token(tok)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet contains duplicate tokens")
        ids = [p.id for p in self.probes]
        if ids != list(range(len(ids))):
            raise ValueError("probe ids must be exactly 0..n-1")
        if len(self.probes) != self.grid.size:
            raise ValueError(
                f"{len(self.probes)} probes do not fill a {self.grid.rows}x{self.grid.cols} grid")
        alpha = set(self.alphabet)
        for p in self.probes:
            for tok in p.seq:
                if tok not in alpha:
                    raise ValueError(f"probe {p.id}: token {tok!r} not in alphabet")

    @property
    def n(self) -> int:
        return len(self.probes)

    @property
    def seqs(self) -> list[tuple[str, ...]]:
        return [p.seq for p in self.probes]

    def token_codes(self) -> dict[str, int]:
        return {tok: i for i, tok in enumerate(self.alphabet)}

    def encoded(self) -> list[np.ndarray]:
        codes = self.token_codes()
        return [np.array([codes[t] for t in p.seq], dtype=np.int64) for p in self.probes]

    @classmethod
    def from_sequences(cls, seqs: Sequence[Sequence[str]], rows: int, cols: int,
                       alphabet: Iterable[str] | None = None) -> "Instance":
        """Convenience constructor; a plain ``str`` is split into characters."""
        seqs = [tuple(s) for s in seqs]
        if alphabet is None:
            seen = []
            for s in seqs:
                for t in s:
                    if t not in seen:
                        seen.append(t)
            alphabet = sorted(seen)
        probes = tuple(Probe(i, s) for i, s in enumerate(seqs))
        return cls(tuple(alphabet), probes, Grid(rows, cols))


@dataclass(frozen=True)
class Placement:
    """``cells[i]`` is the (row, col) of probe ``i``."""

    cells: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple((int(r), int(c)) for r, c in self.cells))

    def cell_of(self, pid: int) -> tuple[int, int]:
        return self.cells[pid]

    def probe_at(self, grid: Grid) -> np.ndarray:
        """``grid.rows x grid.cols`` array of probe ids."""
        at = np.full((grid.rows, grid.cols), -1, dtype=np.int64)
        for pid, (r, c) in enumerate(self.cells):
            at[r, c] = pid
        return at

    def check(self, grid: Grid) -> None:
        if len(self.cells) != grid.size:
            raise InvalidSolution(
                f"placement has {len(self.cells)} probes for {grid.size} cells; not bijective")
        seen = {}
        for pid, (r, c) in enumerate(self.cells):
            if not (0 <= r < grid.rows and 0 <= c < grid.cols):
                raise InvalidSolution(f"probe {pid} placed outside the grid at ({r},{c})")
            if (r, c) in seen:
                raise InvalidSolution(
                    f"placement not bijective: probes {seen[(r, c)]} and {pid} share cell ({r},{c})")
            seen[(r, c)] = pid

    def adjacent_probe_pairs(self, grid: Grid) -> list[tuple[int, int]]:
        at = self.probe_at(grid)
        return [(int(at[a]), int(at[b])) for a, b in grid.adjacent_pairs()]

    @classmethod
    def row_major(cls, grid: Grid) -> "Placement":
        return cls(tuple(divmod(i, grid.cols) for i in range(grid.size)))


@dataclass(frozen=True, eq=False)
class DepositionSchedule:
    """Deposition sequence plus one 0/1 deposit pattern per probe.

    ``patterns[i, t] == 1`` means probe ``i`` receives ``deposition[t]``.
    """

    deposition: tuple[str, ...]
    patterns: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "deposition", tuple(self.deposition))
        pat = np.asarray(self.patterns, dtype=np.uint8)
        if pat.ndim != 2:
            pat = pat.reshape(-1, len(self.deposition))
        pat = pat.copy()
        pat.flags.writeable = False
        object.__setattr__(self, "patterns", pat)
        if pat.shape[1] != len(self.deposition):
            raise InvalidSolution(
                f"patterns have length {pat.shape[1]}, deposition has {len(self.deposition)}")

    @property
    def n(self) -> int:
        return self.patterns.shape[0]

    def bitstring(self, pid: int) -> str:
        return "".join("1" if b else "0" for b in self.patterns[pid])

    def embedded(self, pid: int) -> tuple[str, ...]:
        return tuple(tok for tok, b in zip(self.deposition, self.patterns[pid]) if b)

    def gapped(self, pid: int) -> str:
        """Human-readable embedding such as ``--AC``."""
        return "".join(tok if b else GAP for tok, b in zip(self.deposition, self.patterns[pid]))

    def __eq__(self, other):
        if not isinstance(other, DepositionSchedule):
            return NotImplemented
        return (self.deposition == other.deposition
                and self.patterns.shape == other.patterns.shape
                and bool(np.array_equal(self.patterns, other.patterns)))

    def __hash__(self):
        return hash((self.deposition, self.patterns.tobytes()))

    def drop_empty_steps(self) -> "DepositionSchedule":
        keep = self.patterns.any(axis=0) if self.n else np.zeros(len(self.deposition), bool)
        dep = tuple(t for t, k in zip(self.deposition, keep) if k)
        return DepositionSchedule(dep, self.patterns[:, keep])

    def with_pattern(self, pid: int, pattern) -> "DepositionSchedule":
        pat = self.patterns.copy()
        pat[pid] = pattern
        return DepositionSchedule(self.deposition, pat)

    @classmethod
    def from_bitstrings(cls, deposition: Sequence[str], bits: Sequence[str]) -> "DepositionSchedule":
        m = len(deposition)
        pat = np.zeros((len(bits), m), dtype=np.uint8)
        for i, b in enumerate(bits):
            if len(b) != m or set(b) - {"0", "1"}:
                raise InvalidSolution(f"probe {i}: bad bitstring {b!r} for |D|={m}")
            pat[i] = [ch == "1" for ch in b]
        return cls(tuple(deposition), pat)

    @classmethod
    def from_gapped(cls, deposition: Sequence[str], rows: Sequence[Sequence[str]]) -> "DepositionSchedule":
        """Build from gapped rows like ``"--AC"`` (single-character tokens only)."""
        bits = ["".join("0" if ch == GAP else "1" for ch in row) for row in rows]
        return cls.from_bitstrings(deposition, bits)


@dataclass(frozen=True)
class Mask:
    step: int
    token: str
    cells: frozenset


@dataclass(frozen=True)
class Solution:
    placement: Placement
    schedule: DepositionSchedule
    cost: int


# ------------------------------------------------------------------ costs

def _check_pid(schedule: DepositionSchedule, pid: int) -> None:
    if not (0 <= pid < schedule.n):
        raise KeyError(f"unknown probe id {pid}")


def border_asym(schedule: DepositionSchedule, i: int, j: int) -> int:
    """Steps where probe ``i`` is deposited and probe ``j`` is not."""
    _check_pid(schedule, i)
    _check_pid(schedule, j)
    pi, pj = schedule.patterns[i], schedule.patterns[j]
    return int(np.count_nonzero((pi == 1) & (pj == 0)))


def border_sym(schedule: DepositionSchedule, i: int, j: int) -> int:
    return border_asym(schedule, i, j) + border_asym(schedule, j, i)


def _check_shapes(placement: Placement, schedule: DepositionSchedule, grid: Grid) -> None:
    placement.check(grid)
    if schedule.n != grid.size:
        raise InvalidSolution(f"schedule has {schedule.n} patterns for {grid.size} cells")


def border_length_pairwise(placement: Placement, schedule: DepositionSchedule, grid: Grid) -> int:
    """Sum of ``border_asym`` over ordered pairs of grid neighbours."""
    _check_shapes(placement, schedule, grid)
    total = 0
    for a, b in placement.adjacent_probe_pairs(grid):
        total += border_asym(schedule, a, b) + border_asym(schedule, b, a)
    return total


def mask_border(cells, grid: Grid) -> int:
    """Adjacent cell pairs with exactly one endpoint in ``cells``."""
    cells = set(cells)
    count = 0
    for (r, c) in cells:
        for nb in grid.neighbors(r, c):
            if nb not in cells:
                count += 1
    return count


def masks_of(placement: Placement, schedule: DepositionSchedule) -> list[Mask]:
    out = []
    for t, tok in enumerate(schedule.deposition):
        ids = np.flatnonzero(schedule.patterns[:, t])
        out.append(Mask(t, tok, frozenset(placement.cells[i] for i in ids)))
    return out


def border_length_masks(placement: Placement, schedule: DepositionSchedule, grid: Grid) -> int:
    _check_shapes(placement, schedule, grid)
    return sum(mask_border(m.cells, grid) for m in masks_of(placement, schedule))


def border_length_fast(placement: Placement, schedule: DepositionSchedule, grid: Grid) -> int:
    """Vectorised pairwise cost; no validation.  Used inside solvers."""
    img = schedule.patterns[placement.probe_at(grid)]
    return int(np.count_nonzero(img[:, 1:] != img[:, :-1])
               + np.count_nonzero(img[1:, :] != img[:-1, :]))


# -------------------------------------------------------------- validation

@dataclass(frozen=True)
class Report:
    ok: bool
    message: str = "ok"

    def __bool__(self):
        return self.ok


def validate_solution(instance: Instance, solution: Solution) -> Report:
    """Check every invariant and describe the first violation found."""
    grid = instance.grid
    try:
        solution.placement.check(grid)
    except InvalidSolution as exc:
        return Report(False, str(exc))
    sched = solution.schedule
    if sched.n != instance.n:
        return Report(False, f"schedule has {sched.n} patterns for {instance.n} probes")
    alpha = set(instance.alphabet)
    for t, tok in enumerate(sched.deposition):
        if tok not in alpha:
            return Report(False, f"deposition step {t}: token {tok!r} not in alphabet")
    for p in instance.probes:
        got = sched.embedded(p.id)
        if got != p.seq:
            return Report(False, f"probe reconstruction mismatch: probe {p.id} at cell "
                                 f"{solution.placement.cells[p.id]} spells {' '.join(got)!r}, "
                                 f"expected {' '.join(p.seq)!r}")
    pairwise = border_length_pairwise(solution.placement, sched, grid)
    masks = border_length_masks(solution.placement, sched, grid)
    if not (pairwise == masks == solution.cost):
        return Report(False, f"cost mismatch (pairwise={pairwise} masks={masks} "
                             f"claimed={solution.cost})")
    return Report(True)


def make_solution(instance: Instance, placement: Placement, schedule: DepositionSchedule) -> Solution:
    return Solution(placement, schedule, border_length_pairwise(placement, schedule, instance.grid))


def natural_schedule(instance: Instance, deposition: Sequence[str]) -> DepositionSchedule:
    """Leftmost (greedy) embedding of every probe into ``deposition``."""
    m = len(deposition)
    pat = np.zeros((instance.n, m), dtype=np.uint8)
    for p in instance.probes:
        k = 0
        for t, tok in enumerate(deposition):
            if k < len(p.seq) and p.seq[k] == tok:
                pat[p.id, t] = 1
                k += 1
        if k != len(p.seq):
            raise InvalidSolution(f"probe {p.id} is not a subsequence of the deposition")
    return DepositionSchedule(tuple(deposition), pat)


# ---------------------------------------------------------- grid symmetry

def grid_symmetries(grid: Grid):
    """Cell maps of the grid's dihedral symmetry group (deduplicated)."""
    R, C = grid.rows, grid.cols
    maps = [
        lambda r, c: (r, c),
        lambda r, c: (r, C - 1 - c),
        lambda r, c: (R - 1 - r, c),
        lambda r, c: (R - 1 - r, C - 1 - c),
    ]
    if R == C:
        maps += [
            lambda r, c: (c, r),
            lambda r, c: (C - 1 - c, r),
            lambda r, c: (c, R - 1 - r),
            lambda r, c: (C - 1 - c, R - 1 - r),
        ]
    seen, out = set(), []
    for f in maps:
        key = tuple(f(r, c) for r, c in grid.cells())
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def transform_placement(placement: Placement, f) -> Placement:
    return Placement(tuple(f(r, c) for r, c in placement.cells))
