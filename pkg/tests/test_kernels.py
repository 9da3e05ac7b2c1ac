"""Both kernel paths against each other and against brute force."""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from bordermin import kernels
from oracles import lcs_brute

seqs = st.lists(st.integers(0, 2), max_size=7).map(lambda v: np.array(v, dtype=np.int64))


@given(seqs, seqs)
def test_lcs_tables_match(a, b):
    t_py, t_jit = kernels.lcs_table_py(a, b), kernels.lcs_table_jit(a, b)
    assert np.array_equal(t_py, t_jit)
    assert kernels.lcs_length_py(a, b) == kernels.lcs_length_jit(a, b) == t_py[-1, -1]
    assert t_py[-1, -1] == lcs_brute(list(a), list(b))


@given(seqs, seqs)
def test_suffix_table(a, b):
    s_py, s_jit = kernels.suffix_lcs_table_py(a, b), kernels.suffix_lcs_table_jit(a, b)
    assert np.array_equal(s_py, s_jit)
    for i in range(len(a) + 1):
        for j in range(len(b) + 1):
            assert s_py[i, j] == lcs_brute(list(a[i:]), list(b[j:]))


@given(st.lists(seqs, min_size=1, max_size=5))
def test_lcs_matrix(parts):
    flat = np.concatenate(parts + [np.zeros(0, np.int64)]).astype(np.int64)
    offsets = np.cumsum([0] + [len(p) for p in parts]).astype(np.int64)
    m_py, m_jit = kernels.lcs_matrix_py(flat, offsets), kernels.lcs_matrix_jit(flat, offsets)
    assert np.array_equal(m_py, m_jit)
    for i, a in enumerate(parts):
        for j, b in enumerate(parts):
            assert m_py[i, j] == lcs_brute(list(a), list(b))


@given(st.integers(0, 2**32 - 1))
def test_align_table(seed):
    rng = np.random.default_rng(seed)
    score = rng.integers(-1, 5, size=(int(rng.integers(0, 6)), int(rng.integers(0, 6)))).astype(np.int64)
    assert np.array_equal(kernels.align_table_py(score), kernels.align_table_jit(score))


@given(st.integers(0, 2**32 - 1))
def test_reembed_dp(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(0, 8))
    dep = rng.integers(0, 2, size=m).astype(np.int64)
    idx = np.sort(rng.choice(m, size=int(rng.integers(0, m + 1)), replace=False)) if m else np.zeros(0, int)
    seq = dep[idx].astype(np.int64)
    c0 = rng.integers(0, 4, size=m).astype(np.int64)
    c1 = rng.integers(0, 4, size=m).astype(np.int64)
    p_py, cost_py = kernels.reembed_dp_py(dep, seq, c0, c1)
    p_jit, cost_jit = kernels.reembed_dp_jit(dep, seq, c0, c1)
    assert cost_py == cost_jit
    assert np.array_equal(p_py, p_jit)
    assert list(dep[p_py.astype(bool)]) == list(seq)
    assert int(np.where(p_py == 1, c1, c0).sum()) == cost_py

    # brute force over all embeddings
    best = None
    from itertools import combinations
    for pos in combinations(range(m), len(seq)):
        if list(dep[list(pos)]) == list(seq):
            pat = np.zeros(m, int)
            pat[list(pos)] = 1
            c = int(np.where(pat == 1, c1, c0).sum())
            best = c if best is None else min(best, c)
    assert cost_py == best


def test_reembed_impossible():
    dep = np.array([0], dtype=np.int64)
    seq = np.array([1], dtype=np.int64)
    _, cost = kernels.reembed_dp_py(dep, seq, np.zeros(1, np.int64), np.zeros(1, np.int64))
    assert cost >= kernels.INF


@pytest.mark.parametrize("flag,expected", [("0", False), ("off", False), ("1", True)])
def test_env_flag(flag, expected):
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-c", "import bordermin; print(bordermin.USE_NUMBA)"],
                         env={"BORDERMIN_NUMBA": flag, "PATH": ""}, capture_output=True, text=True)
    assert out.stdout.strip() == str(expected)
