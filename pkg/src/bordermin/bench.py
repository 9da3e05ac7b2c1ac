"""Reference matrix: fixed instances with the values they are expected to hit.

Each case returns ``(measured, expected)``; ``run_matrix`` times them and
``format_table`` prints one tab-separated row per case.
"""
from __future__ import annotations

import time

import numpy as np

from .model import (
    DepositionSchedule,
    Instance,
    Placement,
    border_length_masks,
    border_length_pairwise,
    mask_border,
    masks_of,
)
from .oracle import bmp_exact
from .pipeline import lower_bound, solve_bmp
from .reductions import (
    GraphInput,
    ScsInput,
    build_hampath_instance,
    check_hampath_certificate,
    extract_scs,
    hampath_bound,
    scs_exact_dp,
    solve_1d_exact,
    solve_ipq_exact,
)

DEMO_SEQS = ["AC", "TA", "CT", "CA"]
DEMO_DEPOSITION = "CTAC"
DEMO_GAPPED = ["--AC", "-TA-", "CT--", "C-A-"]
SCS_STRINGS = ["010", "100", "00"]
DEMO_GRAPH_EDGES = ((1, 2), (1, 5), (2, 3), (2, 4), (3, 4), (4, 5))


def demo_2x2():
    inst = Instance.from_sequences(DEMO_SEQS, 2, 2)
    placement = Placement.row_major(inst.grid)
    sched = DepositionSchedule.from_gapped(tuple(DEMO_DEPOSITION), DEMO_GAPPED)
    return inst, placement, sched


def _case_demo():
    inst, placement, sched = demo_2x2()
    per_mask = tuple(mask_border(m.cells, inst.grid) for m in masks_of(placement, sched))
    got = (border_length_pairwise(placement, sched, inst.grid),
           border_length_masks(placement, sched, inst.grid), per_mask)
    return got, (10, 10, (2, 4, 2, 2))


def _case_table2():
    r = solve_ipq_exact(ScsInput.parse(SCS_STRINGS), 3, 3)
    return (r.cost, r.cost_with_dollar, r.word), (100, 128, "010011")


def _case_table3():
    scs = ScsInput.parse(SCS_STRINGS)
    r = solve_ipq_exact(scs, 1, 1)
    ex = extract_scs(scs)
    return (r.cost, ex.length, ex.witness), (54, 4, "0100")


def _case_scs_random():
    rng = np.random.default_rng(4)
    bad = 0
    for _ in range(100):
        k = int(rng.integers(1, 4))
        strings = ["".join(rng.choice(["0", "1"], size=int(rng.integers(1, 6)))) for _ in range(k)]
        if extract_scs(ScsInput.parse(strings)).length != scs_exact_dp(strings).length:
            bad += 1
    return bad, 0


def _case_hampath():
    g = GraphInput(5, DEMO_GRAPH_EDGES)
    got = (solve_1d_exact(build_hampath_instance(g)).cost,
           check_hampath_certificate(g, [1, 2, 3, 4, 5]).cost,
           check_hampath_certificate(g, [1, 2, 3, 5, 4]).cost)
    return got, (hampath_bound(g), 28, 30)


def _case_sandwich():
    rng = np.random.default_rng(9)
    worst = 0.0
    violations = 0
    for _ in range(10):
        seqs = ["".join(rng.choice(["0", "1"], size=int(rng.integers(0, 4)))) for _ in range(4)]
        inst = Instance.from_sequences(seqs, 2, 2, alphabet=("0", "1"))
        lb, opt, heur = lower_bound(inst), bmp_exact(inst).cost, solve_bmp(inst).cost
        violations += not (lb <= opt <= heur)
        if opt:
            worst = max(worst, heur / opt)
    return (violations, worst <= 3.0), (0, True)


CASES = {
    "demo_border_length": _case_demo,
    "ipq_3_3": _case_table2,
    "ipq_1_1_and_scs": _case_table3,
    "scs_extract_random100": _case_scs_random,
    "hampath_demo": _case_hampath,
    "sandwich_2x2_random10": _case_sandwich,
}


def run_matrix(names=None) -> list[dict]:
    rows = []
    for name, fn in CASES.items():
        if names and name not in names:
            continue
        t0 = time.perf_counter()
        got, expected = fn()
        rows.append({"case": name, "measured": got, "expected": expected,
                     "match": got == expected, "seconds": time.perf_counter() - t0})
    return rows


def format_table(rows: list[dict]) -> str:
    lines = ["case\tmeasured\texpected\tmatch\tseconds"]
    for r in rows:
        lines.append(f"{r['case']}\t{r['measured']}\t{r['expected']}\t"
                     f"{'yes' if r['match'] else 'NO'}\t{r['seconds']:.3f}")
    return "\n".join(lines) + "\n"
