"""``bordermin`` command line.

Exit codes: 0 success, 1 bad input, 2 search budget exceeded, 3 a
verification failed.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import bench
from .metric import build_metric, format_metric
from .model import (
    Grid,
    Instance,
    Probe,
    border_length_masks,
    border_length_pairwise,
    make_solution,
    mask_border,
    masks_of,
    validate_solution,
)
from .oracle import bmp_exact
from .pbmp import OracleInfeasible
from .pipeline import DEFAULT_SEED, DEFAULT_TRIALS, format_report, ratio_report, solve_bmp_detailed
from .reductions import (
    ScsInput,
    build_hampath_instance,
    build_ipq,
    check_hampath_certificate,
    extract_scs,
    lift_1d_to_2d,
    scs_exact_dp,
)
from .textio import (
    ParseError,
    format_instance,
    format_solution,
    parse_graph,
    parse_instance,
    parse_solution,
)

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3


class VerifyFailed(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# ------------------------------------------------------------------ solve

def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    if args.algo == "exact":
        sol = bmp_exact(inst, max_states=args.max_states)
        rep = ratio_report(inst, sol)
    else:
        res = solve_bmp_detailed(inst, seed=args.seed, trials=args.trials,
                                 refine_rounds=args.rounds, workers=args.workers,
                                 shared_tree=args.shared_tree)
        sol = res.best
        rep = ratio_report(inst, sol, result=res)
    rep = {"algo": args.algo, **rep}
    if args.algo == "pipeline":
        rep.update(seed=args.seed)
    _emit(format_solution(sol), args.out)
    text = format_report(rep)
    if args.report:
        _emit(text, args.report)
    else:
        sys.stderr.write(text)
    return EXIT_OK


# ----------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    if args.paths and args.paths[0] == "hampath-cert":
        if len(args.paths) < 3:
            raise ValueError("usage: verify hampath-cert GRAPH V1 V2 ...")
        g = parse_graph(_read(args.paths[1]))
        order = [int(v) for v in args.paths[2:]]
        cert = check_hampath_certificate(g, order)
        print(f"cost={cert.cost} bound={cert.bound} shared_edges={cert.shared_edges} "
              f"achieves_bound={str(cert.achieves_bound).lower()}")
        return EXIT_OK if cert.achieves_bound else EXIT_VERIFY
    if len(args.paths) != 2:
        raise ValueError("usage: verify INSTANCE SOLUTION")
    inst = parse_instance(_read(args.paths[0]))
    sol = parse_solution(_read(args.paths[1]))
    if sol.cost < 0:  # no cost line: nothing claimed, check the rest
        sol = make_solution(inst, sol.placement, sol.schedule)
    rep = validate_solution(inst, sol)
    if not rep:
        raise VerifyFailed(rep.message)
    pair = border_length_pairwise(sol.placement, sol.schedule, inst.grid)
    masks = border_length_masks(sol.placement, sol.schedule, inst.grid)
    print(f"ok pairwise={pair} masks={masks}")
    return EXIT_OK


# ----------------------------------------------------------------- render

def render_ascii(inst: Instance, sol) -> str:
    grid = inst.grid
    out, total = [], 0
    for m in masks_of(sol.placement, sol.schedule):
        b = mask_border(m.cells, grid)
        total += b
        out.append(f"mask {m.step + 1} token {m.token} border {b}")
        for r in range(grid.rows):
            out.append("".join("#" if (r, c) in m.cells else "." for c in range(grid.cols)))
        out.append("")
    out.append(f"total {total}")
    return "\n".join(out) + "\n"


def render_svg(inst: Instance, sol, cell: int = 24, gap: int = 16) -> str:
    grid = inst.grid
    masks = masks_of(sol.placement, sol.schedule)
    fw, fh = grid.cols * cell, grid.rows * cell
    width = max(1, len(masks)) * (fw + gap) + gap
    height = fh + 2 * gap + 12
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'font-family="monospace" font-size="11">']
    for k, m in enumerate(masks):
        x0, y0 = gap + k * (fw + gap), gap + 12
        b = mask_border(m.cells, grid)
        parts.append(f'<text x="{x0}" y="{y0 - 4}">{m.token} ({b})</text>')
        for r, c in grid.cells():
            fill = "#888" if (r, c) in m.cells else "#fff"
            parts.append(f'<rect x="{x0 + c * cell}" y="{y0 + r * cell}" width="{cell}" '
                         f'height="{cell}" fill="{fill}" stroke="#ccc"/>')
        for (r1, c1), (r2, c2) in grid.adjacent_pairs():
            if ((r1, c1) in m.cells) == ((r2, c2) in m.cells):
                continue
            if r1 == r2:  # vertical segment between horizontal neighbours
                x = x0 + max(c1, c2) * cell
                seg = (x, y0 + r1 * cell, x, y0 + (r1 + 1) * cell)
            else:
                y = y0 + max(r1, r2) * cell
                seg = (x0 + c1 * cell, y, x0 + (c1 + 1) * cell, y)
            parts.append('<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="#000" stroke-width="3"/>' % seg)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_render(args) -> int:
    inst = parse_instance(_read(args.instance))
    sol = parse_solution(_read(args.solution))
    if sol.cost < 0:
        sol = make_solution(inst, sol.placement, sol.schedule)
    rep = validate_solution(inst, sol)
    if not rep:
        raise VerifyFailed(rep.message)
    _emit(render_ascii(inst, sol), args.out)
    if args.svg:
        Path(args.svg).write_text(render_svg(inst, sol), encoding="utf-8")
    return EXIT_OK


def cmd_metric(args) -> int:
    inst = parse_instance(_read(args.instance))
    _emit(format_metric(build_metric(inst)), args.out)
    return EXIT_OK


# -------------------------------------------------------------------- gen

def _square_shape(n: int) -> tuple[int, int]:
    rows = int(math.isqrt(n))
    while n % rows:
        rows -= 1
    return rows, n // rows


def random_instance(n: int, length: int, alphabet: str, seed: int,
                    rows: int | None = None, cols: int | None = None,
                    fixed_length: bool = False) -> Instance:
    if n < 1:
        raise ValueError("--n must be at least 1")
    if length < 0:
        raise ValueError("--len must be non-negative")
    toks = tuple(dict.fromkeys(alphabet))
    if not toks:
        raise ValueError("--alphabet must not be empty")
    if rows is None and cols is None:
        rows, cols = _square_shape(n)
    elif rows is None:
        rows = n // cols
    elif cols is None:
        cols = n // rows
    if rows * cols != n:
        raise ValueError(f"a {rows}x{cols} grid does not hold {n} probes")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    probes = []
    for i in range(n):
        size = length if fixed_length else int(rng.integers(0, length + 1))
        probes.append(Probe(i, tuple(toks[j] for j in rng.integers(0, len(toks), size=size))))
    return Instance(toks, tuple(probes), Grid(rows, cols))


def cmd_gen(args) -> int:
    if args.kind == "random":
        inst = random_instance(args.n, args.len, args.alphabet, args.seed,
                               args.rows, args.cols, args.fixed_len)
    elif args.kind == "scs-ipq":
        inst, _ = build_ipq(ScsInput.parse(args.strings), args.p, args.q)
    elif args.kind == "hampath":
        inst = build_hampath_instance(parse_graph(_read(args.graph)))
    else:
        inst = lift_1d_to_2d(parse_instance(_read(args.instance)))
    _emit(format_instance(inst), args.out)
    return EXIT_OK


def cmd_scs(args) -> int:
    scs = ScsInput.parse(args.strings)
    res = extract_scs(scs)
    dp = scs_exact_dp(scs.strings)
    print(f"length={res.length} witness={res.witness} zeros={res.p} ones={res.q} "
          f"dp_length={dp.length} dp_witness={dp.witness}")
    return EXIT_OK if res.length == dp.length else EXIT_VERIFY


def cmd_bench(args) -> int:
    rows = bench.run_matrix(args.case or None)
    _emit(bench.format_table(rows), args.out)
    return EXIT_OK


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bordermin", description="Border length minimisation for probe arrays.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="place and embed an instance")
    p.add_argument("instance")
    p.add_argument("--algo", choices=("pipeline", "exact"), default="pipeline")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--rounds", type=int, default=10, help="re-embedding sweeps per trial")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--shared-tree", action="store_true",
                   help="guide the alignment with the placement tree instead of a fresh one")
    p.add_argument("--max-states", type=int, default=200_000, help="budget for --algo exact")
    p.add_argument("--out", "-o")
    p.add_argument("--report", help="write the report here instead of stderr")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution, or a Hamiltonian path certificate")
    p.add_argument("paths", nargs="+", metavar="ARG",
                   help="INSTANCE SOLUTION, or hampath-cert GRAPH V1 V2 ...")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw each mask as a text frame")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--svg")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("metric", help="print the LCS distance matrix")
    p.add_argument("instance")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("gen", help="write a generated instance")
    gsub = p.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--len", type=int, default=4)
    g.add_argument("--alphabet", default="ACGT")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--rows", type=int)
    g.add_argument("--cols", type=int)
    g.add_argument("--fixed-len", action="store_true", help="every probe has exactly --len tokens")
    g = gsub.add_parser("scs-ipq")
    g.add_argument("strings", nargs="+")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--q", type=int, required=True)
    g = gsub.add_parser("hampath")
    g.add_argument("graph")
    g = gsub.add_parser("lift2d")
    g.add_argument("instance")
    for g in gsub.choices.values():
        g.add_argument("--out", "-o")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("scs", help="shortest common supersequence tools")
    ssub = p.add_subparsers(dest="action", required=True)
    s = ssub.add_parser("extract")
    s.add_argument("strings", nargs="+")
    p.set_defaults(func=cmd_scs)

    p = sub.add_parser("bench", help="run the reference matrix")
    p.add_argument("--case", action="append")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OracleInfeasible as exc:
        print(f"error: search budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerifyFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
