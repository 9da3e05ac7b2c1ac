"""Line-oriented text formats for instances, solutions and graphs."""
from __future__ import annotations

import re

from .model import DepositionSchedule, Grid, Instance, InvalidSolution, Placement, Probe, Solution


class ParseError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


def _fields(text: str):
    """Yield ``(lineno, [(col, word), ...])`` for non-blank lines."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        words = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]
        if words:
            yield lineno, words


def _int(lineno, word):
    col, w = word
    try:
        return int(w)
    except ValueError:
        raise ParseError(lineno, col, f"expected an integer, got {w!r}") from None


def parse_instance(text: str) -> Instance:
    lines = list(_fields(text))
    if len(lines) < 2:
        raise ParseError(len(lines) + 1, 1, "expected 'grid' and 'alphabet' header lines")
    lineno, words = lines[0]
    if words[0][1] != "grid" or len(words) != 3:
        raise ParseError(lineno, words[0][0], "expected 'grid <rows> <cols>'")
    rows, cols = _int(lineno, words[1]), _int(lineno, words[2])
    lineno, words = lines[1]
    if words[0][1] != "alphabet":
        raise ParseError(lineno, words[0][0], "expected 'alphabet <tok> ...'")
    alphabet = tuple(w for _, w in words[1:])
    probes = []
    for lineno, words in lines[2:]:
        if words[0][1] != "probe" or len(words) < 2:
            raise ParseError(lineno, words[0][0], "expected 'probe <id> <tok> ...'")
        pid = _int(lineno, words[1])
        for col, w in words[2:]:
            if w not in alphabet:
                raise ParseError(lineno, col, f"token {w!r} not in alphabet")
        probes.append(Probe(pid, tuple(w for _, w in words[2:])))
    try:
        return Instance(alphabet, tuple(probes), Grid(rows, cols))
    except ValueError as exc:
        raise ParseError(lines[0][0], 1, str(exc)) from None


def format_instance(inst: Instance) -> str:
    out = [f"grid {inst.grid.rows} {inst.grid.cols}",
           " ".join(["alphabet", *inst.alphabet])]
    for p in inst.probes:
        out.append(" ".join(["probe", str(p.id), *p.seq]))
    return "\n".join(out) + "\n"


def parse_solution(text: str) -> Solution:
    """Parse a solution file.  A missing ``cost`` line is reported as -1."""
    deposition = None
    places = {}
    cost = -1
    for lineno, words in _fields(text):
        head = words[0][1]
        if head == "deposition":
            deposition = tuple(w for _, w in words[1:])
        elif head == "place":
            if deposition is None:
                raise ParseError(lineno, words[0][0], "'place' before 'deposition'")
            if len(words) not in (4, 5):
                raise ParseError(lineno, words[0][0], "expected 'place <id> <row> <col> <bits>'")
            pid = _int(lineno, words[1])
            r, c = _int(lineno, words[2]), _int(lineno, words[3])
            bits = words[4][1] if len(words) == 5 else ""
            col = words[4][0] if len(words) == 5 else words[3][0]
            if len(bits) != len(deposition):
                raise ParseError(lineno, col,
                                 f"bitstring length {len(bits)} != |D|={len(deposition)}")
            bad = [i for i, ch in enumerate(bits) if ch not in "01"]
            if bad:
                raise ParseError(lineno, col + bad[0], "bitstring must contain only 0/1")
            if pid in places:
                raise ParseError(lineno, words[1][0], f"duplicate probe id {pid}")
            places[pid] = ((r, c), bits)
        elif head == "cost":
            if len(words) != 2:
                raise ParseError(lineno, words[0][0], "expected 'cost <int>'")
            cost = _int(lineno, words[1])
        else:
            raise ParseError(lineno, words[0][0], f"unknown record {head!r}")
    if deposition is None:
        raise ParseError(1, 1, "missing 'deposition' line")
    if sorted(places) != list(range(len(places))):
        raise ParseError(1, 1, "probe ids must be exactly 0..n-1")
    ids = range(len(places))
    placement = Placement(tuple(places[i][0] for i in ids))
    try:
        schedule = DepositionSchedule.from_bitstrings(deposition, [places[i][1] for i in ids])
    except InvalidSolution as exc:
        raise ParseError(1, 1, str(exc)) from None
    return Solution(placement, schedule, cost)


def format_solution(sol: Solution) -> str:
    out = [" ".join(["deposition", *sol.schedule.deposition])]
    for pid, (r, c) in enumerate(sol.placement.cells):
        bits = sol.schedule.bitstring(pid)
        out.append(f"place {pid} {r} {c} {bits}".rstrip())
    out.append(f"cost {sol.cost}")
    return "\n".join(out) + "\n"


def parse_graph(text: str):
    """Edge list: ``n m`` header, then ``i j`` lines with 1-based vertices."""
    from .reductions import GraphInput

    lines = list(_fields(text))
    if not lines:
        raise ParseError(1, 1, "empty graph file")
    lineno, words = lines[0]
    if len(words) != 2:
        raise ParseError(lineno, 1, "expected header 'n m'")
    n, m = _int(lineno, words[0]), _int(lineno, words[1])
    edges = []
    seen = set()
    for lineno, words in lines[1:]:
        if len(words) != 2:
            raise ParseError(lineno, 1, "expected 'i j'")
        i, j = _int(lineno, words[0]), _int(lineno, words[1])
        if i == j:
            raise ParseError(lineno, words[1][0], f"self-loop at vertex {i}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(lineno, 1, f"vertex out of range 1..{n}")
        e = (min(i, j), max(i, j))
        if e in seen:
            raise ParseError(lineno, 1, f"duplicate edge {e}")
        seen.add(e)
        edges.append(e)
    if len(edges) != m:
        raise ParseError(lines[0][0], 1, f"header declares {m} edges, found {len(edges)}")
    return GraphInput(n, tuple(sorted(edges)))


def format_graph(g) -> str:
    return "\n".join([f"{g.n} {len(g.edges)}"] + [f"{i} {j}" for i, j in g.edges]) + "\n"
