"""Hot dynamic-programming kernels.

Every kernel exists twice: a numba-compiled loop version (``*_jit``) and a
numpy version (``*_py``) that vectorises one DP row at a time.  The public
names are bound to one of the two according to ``BORDERMIN_NUMBA``.  Token
sequences are passed as ``int64`` arrays of token codes.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

NEG = -(1 << 40)
INF = 1 << 40


# --------------------------------------------------------------------- LCS

def lcs_table_py(a, b):
    """Prefix LCS table ``T[i, j] = |LCS(a[:i], b[:j])|``."""
    m, n = len(a), len(b)
    table = np.zeros((m + 1, n + 1), dtype=np.int64)
    if m == 0 or n == 0:
        return table
    for i in range(1, m + 1):
        prev = table[i - 1]
        eq = (b == a[i - 1]).astype(np.int64)
        cand = prev.copy()
        cand[1:] = np.maximum(prev[1:], prev[:-1] + eq)
        table[i] = np.maximum.accumulate(cand)
    return table


@njit
def lcs_table_jit(a, b):
    m, n = a.shape[0], b.shape[0]
    table = np.zeros((m + 1, n + 1), dtype=np.int64)
    for i in range(1, m + 1):
        ai = a[i - 1]
        for j in range(1, n + 1):
            if ai == b[j - 1]:
                table[i, j] = table[i - 1, j - 1] + 1
            elif table[i - 1, j] >= table[i, j - 1]:
                table[i, j] = table[i - 1, j]
            else:
                table[i, j] = table[i, j - 1]
    return table


def lcs_length_py(a, b):
    return int(lcs_table_py(a, b)[-1, -1])


@njit
def lcs_length_jit(a, b):
    m, n = a.shape[0], b.shape[0]
    if m == 0 or n == 0:
        return 0
    prev = np.zeros(n + 1, dtype=np.int64)
    cur = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, m + 1):
        ai = a[i - 1]
        for j in range(1, n + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            elif prev[j] >= cur[j - 1]:
                cur[j] = prev[j]
            else:
                cur[j] = cur[j - 1]
        for j in range(n + 1):
            prev[j] = cur[j]
    return prev[n]


def suffix_lcs_table_py(a, b):
    """``T[i, j] = |LCS(a[i:], b[j:])|``."""
    return lcs_table_py(a[::-1].copy(), b[::-1].copy())[::-1, ::-1].copy()


@njit
def suffix_lcs_table_jit(a, b):
    m, n = a.shape[0], b.shape[0]
    table = np.zeros((m + 1, n + 1), dtype=np.int64)
    for i in range(m - 1, -1, -1):
        for j in range(n - 1, -1, -1):
            if a[i] == b[j]:
                table[i, j] = table[i + 1, j + 1] + 1
            elif table[i + 1, j] >= table[i, j + 1]:
                table[i, j] = table[i + 1, j]
            else:
                table[i, j] = table[i, j + 1]
    return table


def lcs_matrix_py(flat, offsets):
    n = offsets.shape[0] - 1
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        a = flat[offsets[i]:offsets[i + 1]]
        out[i, i] = a.shape[0]
        for j in range(i + 1, n):
            v = lcs_length_py(a, flat[offsets[j]:offsets[j + 1]])
            out[i, j] = v
            out[j, i] = v
    return out


@njit
def lcs_matrix_jit(flat, offsets):
    n = offsets.shape[0] - 1
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        a = flat[offsets[i]:offsets[i + 1]]
        out[i, i] = a.shape[0]
        for j in range(i + 1, n):
            v = lcs_length_jit(a, flat[offsets[j]:offsets[j + 1]])
            out[i, j] = v
            out[j, i] = v
    return out


# --------------------------------------------------------- profile alignment

def align_table_py(score):
    """Max-weight indel-only alignment table.

    ``score[i, j] >= 0`` is the gain of merging column ``i`` of the first
    profile with column ``j`` of the second; negative entries forbid the
    merge.
    """
    m, n = score.shape
    table = np.zeros((m + 1, n + 1), dtype=np.int64)
    if m == 0 or n == 0:
        return table
    for i in range(1, m + 1):
        prev = table[i - 1]
        row = score[i - 1]
        diag = np.where(row >= 0, prev[:-1] + row, NEG)
        cand = prev.copy()
        cand[1:] = np.maximum(prev[1:], diag)
        table[i] = np.maximum.accumulate(cand)
    return table


@njit
def align_table_jit(score):
    m, n = score.shape
    table = np.zeros((m + 1, n + 1), dtype=np.int64)
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            best = table[i - 1, j]
            if table[i, j - 1] > best:
                best = table[i, j - 1]
            s = score[i - 1, j - 1]
            if s >= 0 and table[i - 1, j - 1] + s > best:
                best = table[i - 1, j - 1] + s
            table[i, j] = best
    return table


# ------------------------------------------------------ single-probe re-embed

def reembed_dp_py(dep, seq, c0, c1):
    """Cheapest embedding of ``seq`` into ``dep``.

    ``c1[t]`` is the cost of depositing at step ``t`` and ``c0[t]`` the cost
    of skipping it.  Returns ``(pattern, cost)``; cost is ``INF`` when
    ``seq`` is not a subsequence of ``dep``.
    """
    m, l = len(dep), len(seq)
    dp = np.full((m + 1, l + 1), INF, dtype=np.int64)
    dp[0, 0] = 0
    for t in range(m):
        row = dp[t]
        nxt = np.minimum(row + c0[t], INF)
        if l:
            match = seq == dep[t]
            take = np.where(match, np.minimum(row[:-1] + c1[t], INF), INF)
            nxt[1:] = np.minimum(nxt[1:], take)
        dp[t + 1] = nxt
    pattern = np.zeros(m, dtype=np.uint8)
    cost = dp[m, l]
    if cost >= INF:
        return pattern, INF
    k = l
    for t in range(m, 0, -1):
        if dp[t - 1, k] < INF and dp[t, k] == dp[t - 1, k] + c0[t - 1]:
            continue
        pattern[t - 1] = 1
        k -= 1
    return pattern, int(cost)


@njit
def reembed_dp_jit(dep, seq, c0, c1):
    m, l = dep.shape[0], seq.shape[0]
    dp = np.full((m + 1, l + 1), INF, dtype=np.int64)
    dp[0, 0] = 0
    for t in range(m):
        for k in range(l + 1):
            v = dp[t, k]
            if v < INF:
                w = v + c0[t]
                if w < dp[t + 1, k]:
                    dp[t + 1, k] = w
                if k < l and seq[k] == dep[t]:
                    w = v + c1[t]
                    if w < dp[t + 1, k + 1]:
                        dp[t + 1, k + 1] = w
    pattern = np.zeros(m, dtype=np.uint8)
    cost = dp[m, l]
    if cost >= INF:
        return pattern, INF
    k = l
    for t in range(m, 0, -1):
        # skipping is preferred on ties, which pushes deposits leftwards
        if dp[t - 1, k] < INF and dp[t, k] == dp[t - 1, k] + c0[t - 1]:
            continue
        pattern[t - 1] = 1
        k -= 1
    return pattern, cost


if USE_NUMBA:
    lcs_table = lcs_table_jit
    lcs_length = lcs_length_jit
    suffix_lcs_table = suffix_lcs_table_jit
    lcs_matrix = lcs_matrix_jit
    align_table = align_table_jit
    reembed_dp = reembed_dp_jit
else:
    lcs_table = lcs_table_py
    lcs_length = lcs_length_py
    suffix_lcs_table = suffix_lcs_table_py
    lcs_matrix = lcs_matrix_py
    align_table = align_table_py
    reembed_dp = reembed_dp_py
