import numpy as np
import pytest

from bordermin.bench import demo_2x2
from bordermin.model import Grid, Instance, grid_symmetries, transform_placement
from bordermin.oracle import bmp_exact, bmp_exact_unreduced, optimal_placements, symmetry_classes
from bordermin.pbmp import OracleInfeasible
from bordermin.reductions import lift_1d_to_2d


@pytest.mark.parametrize("shape,count", [((2, 2), 3), ((1, 2), 1), ((1, 3), 3), ((1, 4), 12), ((2, 3), 180)])
def test_symmetry_class_counts(shape, count):
    assert len(symmetry_classes(Grid(*shape))) == count


def test_demo_optimum():
    inst, _, _ = demo_2x2()
    sol = bmp_exact(inst)
    assert sol.cost == 8
    assert sol.cost <= 10


def test_trivial_optima():
    assert bmp_exact(Instance.from_sequences(["AC"] * 4, 2, 2)).cost == 0
    assert bmp_exact(Instance.from_sequences(["AC", "CA"], 1, 2)).cost == 2


@pytest.mark.parametrize("seed", range(6))
def test_reduction_changes_no_optimum(seed):
    rng = np.random.default_rng(seed)
    seqs = ["".join(rng.choice(list("01"), size=int(rng.integers(0, 4)))) for _ in range(4)]
    inst = Instance.from_sequences(seqs, 2, 2, alphabet="01")
    assert bmp_exact(inst).cost == bmp_exact_unreduced(inst)


def test_budget_is_explicit():
    with pytest.raises(OracleInfeasible):
        bmp_exact(Instance.from_sequences(["A"] * 9, 3, 3))


def test_optimal_placements_are_closed_under_symmetry():
    inst, _, _ = demo_2x2()
    cost, placements = optimal_placements(inst)
    assert cost == 8
    cells = {p.cells for p in placements}
    for p in placements:
        for f in grid_symmetries(inst.grid):
            assert transform_placement(p, f).cells in cells


def test_lifted_optimum_keeps_given_probes_on_one_side():
    two = lift_1d_to_2d(Instance.from_sequences(["AC", "CA"], 1, 2))
    _, placements = optimal_placements(two)
    assert placements
    for p in placements:
        (r0, c0), (r1, c1) = p.cells[0], p.cells[1]
        assert abs(r0 - r1) + abs(c0 - c1) == 1
