import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bordermin.metric import lcs_length
from bordermin.model import (
    DepositionSchedule,
    Instance,
    border_length_masks,
    border_length_pairwise,
    validate_solution,
)
from bordermin.pbmp import pbmp_exact
from bordermin.reductions import (
    GraphInput,
    ScsInput,
    build_hampath_instance,
    build_ipq,
    check_hampath_certificate,
    dollar_mask_cost,
    extract_scs,
    hampath_bound,
    ipq_formula,
    lift_1d_to_2d,
    scs_exact_dp,
    solve_1d_exact,
    solve_ipq_exact,
)
from oracles import has_hamiltonian_path, scs_brute

STRINGS = ["010", "100", "00"]
DEMO_GRAPH = GraphInput(5, ((1, 2), (1, 5), (2, 3), (2, 4), (3, 4), (4, 5)))
binary = st.text(alphabet="01", min_size=1, max_size=4)


def _layout(inst):
    g = inst.grid
    return [["".join(inst.probes[r * g.cols + c].seq) for c in range(g.cols)] for r in range(g.rows)]


def test_ipq_layout_3_3():
    inst, placement = build_ipq(ScsInput.parse(STRINGS), 3, 3)
    rows = _layout(inst)
    assert inst.grid.rows == inst.grid.cols == 7
    assert rows[0] == ["$"] * 7
    assert rows[1] == ["000"] * 7
    assert rows[2] == ["$", "010", "$", "100", "$", "00", "$"]
    assert rows[3] == ["111"] * 7
    assert all(r == ["$"] * 7 for r in rows[4:])
    assert placement.cells[8] == (1, 1)


def test_ipq_layout_single_string():
    inst, _ = build_ipq(ScsInput.parse(["0"]), 1, 1)
    assert _layout(inst) == [["$"] * 3, ["0"] * 3, ["$", "0", "$"], ["1"] * 3, ["$"] * 3]


def test_ipq_rejects_negative_counts():
    with pytest.raises(ValueError):
        build_ipq(ScsInput.parse(STRINGS), -1, 2)


def test_scs_input_validation():
    with pytest.raises(ValueError):
        ScsInput.parse(["012"])
    s = ScsInput.parse(STRINGS)
    assert (s.k, s.ell, s.L) == (3, 3, 8)


def test_ipq_3_3():
    r = solve_ipq_exact(ScsInput.parse(STRINGS), 3, 3)
    assert r.cost == 100 and r.cost_with_dollar == 128
    assert r.word == "010011"
    it = iter(r.deposition.replace("$", ""))
    assert all(ch in it for ch in "010011")
    assert validate_solution(build_ipq(ScsInput.parse(STRINGS), 3, 3)[0], r.solution)


def test_ipq_1_1_optimum_is_50():
    r = solve_ipq_exact(ScsInput.parse(STRINGS), 1, 1)
    assert r.cost == 50
    assert ipq_formula(ScsInput.parse(STRINGS), 1, 1) == 44


def test_ipq_1_1_explicit_schedule_costs_50():
    # D = $ 0 1 0 0: the 1-row deposits at step 2, the 0-row at step 3
    inst, placement = build_ipq(ScsInput.parse(STRINGS), 1, 1)
    dep = tuple("$0100")
    gapped = {"$": "$----", "0": "---0-", "1": "--1--",
              "010": "-010-", "100": "--100", "00": "---00"}
    rows = []
    for p in inst.probes:
        r, _ = placement.cells[p.id]
        key = "".join(p.seq)
        if r == 1:
            key = "0"
        elif r == 3:
            key = "1"
        rows.append(gapped[key])
    sched = DepositionSchedule.from_gapped(dep, rows)
    assert border_length_pairwise(placement, sched, inst.grid) == 50 + dollar_mask_cost(3)
    assert border_length_masks(placement, sched, inst.grid) == 50 + dollar_mask_cost(3)


def test_ipq_lower_bound_per_column():
    # each string column pays 2 per own token plus 2 per uniform-row step it
    # does not share; every uniform-row step costs 2(2k+1) in total
    scs = ScsInput.parse(STRINGS)
    best_shared = max(sum(lcs_length(s, w) for s in STRINGS) for w in ("01", "10"))
    assert 2 * 7 * 2 + 4 * scs.L - 2 * best_shared == 50


@settings(max_examples=25)
@given(st.lists(binary, min_size=1, max_size=1), st.integers(0, 2), st.integers(0, 2))
def test_ipq_single_string_matches_generic_search(strings, p, q):
    scs = ScsInput.parse(strings)
    inst, placement = build_ipq(scs, p, q)
    assert solve_ipq_exact(scs, p, q).cost_with_dollar == pbmp_exact(inst, placement).cost


def test_ipq_at_scs_counts_meets_formula():
    scs = ScsInput.parse(STRINGS)
    # "0100" has three zeros and one one
    assert solve_ipq_exact(scs, 3, 1).cost == ipq_formula(scs, 3, 1)
    assert solve_ipq_exact(scs, 1, 1).cost > ipq_formula(scs, 1, 1)


def test_extract_scs_examples():
    assert extract_scs(ScsInput.parse(STRINGS)).witness == "0100"
    assert extract_scs(ScsInput.parse(["0110"])).length == 4
    assert extract_scs(ScsInput.parse(["000", "00"])).witness == "000"
    assert extract_scs(ScsInput.parse(["0", "1"])).length == 2


@settings(max_examples=40)
@given(st.lists(binary, min_size=1, max_size=3))
def test_extract_scs_matches_dp_and_brute_force(strings):
    scs = ScsInput.parse(strings)
    res = extract_scs(scs)
    dp = scs_exact_dp(scs.strings)
    assert res.length == dp.length == scs_brute(strings)
    for s in strings:
        it = iter(res.witness)
        assert all(ch in it for ch in s)


def test_scs_dp_examples():
    assert scs_exact_dp(["0", "1"]).length == 2
    assert scs_exact_dp(STRINGS).witness == "0100"


@given(binary, binary)
def test_scs_pair_identity(a, b):
    assert scs_exact_dp([a, b]).length == len(a) + len(b) - lcs_length(a, b)


def test_hampath_instance_demo_graph():
    inst = build_hampath_instance(DEMO_GRAPH)
    seqs = [" ".join(p.seq) for p in inst.probes]
    assert seqs[:5] == ["e_1_2 e_1_5", "e_1_2 e_2_3 e_2_4", "e_2_3 e_3_4",
                        "e_2_4 e_3_4 e_4_5", "e_1_5 e_4_5"]
    assert inst.probes[5].seq == ("$",) * 6 and inst.probes[6].seq == ("#",) * 6
    assert (inst.grid.rows, inst.grid.cols) == (1, 7)


def test_hampath_instance_edge_cases():
    inst = build_hampath_instance(GraphInput(3, ()))
    assert all(p.seq == () for p in inst.probes[:3])
    inst = build_hampath_instance(GraphInput(2, ((1, 2),)))
    assert inst.probes[0].seq == inst.probes[1].seq == ("e_1_2",)


def test_graph_validation():
    with pytest.raises(ValueError):
        GraphInput(3, ((1, 1),))
    with pytest.raises(ValueError):
        GraphInput(3, ((1, 2), (2, 1)))


def test_hampath_certificates():
    good = check_hampath_certificate(DEMO_GRAPH, [1, 2, 3, 4, 5])
    assert (good.cost, good.achieves_bound, good.shared_edges) == (28, True, 4)
    bad = check_hampath_certificate(DEMO_GRAPH, [1, 2, 3, 5, 4])
    assert (bad.cost, bad.achieves_bound, bad.shared_edges) == (30, False, 3)
    assert check_hampath_certificate(GraphInput(3, ()), [1, 2, 3]).cost == 8
    with pytest.raises(ValueError):
        check_hampath_certificate(DEMO_GRAPH, [1, 2, 3, 4])


def test_solve_1d_demo_graph():
    sol = solve_1d_exact(build_hampath_instance(DEMO_GRAPH))
    assert sol.cost == 28 == hampath_bound(DEMO_GRAPH)


def test_solve_1d_small_graphs():
    k3 = GraphInput(3, ((1, 2), (1, 3), (2, 3)))
    assert solve_1d_exact(build_hampath_instance(k3)).cost == hampath_bound(k3)
    iso = GraphInput(2, ())
    assert solve_1d_exact(build_hampath_instance(iso)).cost == 2 * 3


@pytest.mark.parametrize("seed", range(6))
def test_pinning_dummies_loses_nothing(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    edges = [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.6]
    inst = build_hampath_instance(GraphInput(n, tuple(edges)))
    assert solve_1d_exact(inst).cost == solve_1d_exact(inst, pin_dummies=False).cost


def test_solve_1d_general_instance_matches_permutation_search():
    inst = Instance.from_sequences(["ACG", "CA", "GGA", "A"], 1, 4)
    best = min(
        pbmp_exact(inst, _row_placement(perm)).cost for perm in itertools.permutations(range(4)))
    assert solve_1d_exact(inst).cost == best


def _row_placement(perm):
    from bordermin.model import Placement
    cells = [None] * len(perm)
    for col, pid in enumerate(perm):
        cells[pid] = (0, col)
    return Placement(tuple(cells))


@pytest.mark.parametrize("seed", range(10))
def test_hampath_bound_iff_path(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(2, 6))
    edges = tuple(e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.45)
    g = GraphInput(n, edges)
    got = solve_1d_exact(build_hampath_instance(g)).cost
    assert got >= hampath_bound(g)
    assert (got == hampath_bound(g)) == has_hamiltonian_path(n, edges)


def test_lift_example():
    one = Instance.from_sequences(["A", "B"], 1, 2)
    two = lift_1d_to_2d(one)
    assert (two.grid.rows, two.grid.cols) == (2, 2)
    assert two.probes[0].seq == ("x_1",) * 16 + ("A",)
    assert two.probes[1].seq == ("x_2",) * 16 + ("B",)
    assert two.probes[2].seq == two.probes[3].seq == ("$",)


def test_lift_fresh_tokens():
    one = Instance.from_sequences([["x_1", "$"], ["$"]], 1, 2)
    two = lift_1d_to_2d(one)
    pad, dollar = two.probes[0].seq[0], two.probes[2].seq[0]
    assert pad not in one.alphabet and dollar not in one.alphabet


def test_lift_single_probe():
    two = lift_1d_to_2d(Instance.from_sequences(["AC"], 1, 1))
    assert two.grid.size == 1 and len(two.probes[0].seq) == 9
