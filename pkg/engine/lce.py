"""Suffix array, LCP array and constant-time longest-common-extension queries."""
from typing import List

import numpy as np


def suffix_array(letters: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling. O(n log^2 n) with numpy sorts."""
    n = int(letters.shape[0])
    if n == 0:
        return np.empty(0, dtype=np.int64)
    rank = np.unique(letters, return_inverse=True)[1].astype(np.int64).reshape(-1)
    k = 1
    while rank.max() < n - 1:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        r, s = rank[sa], second[sa]
        changed = (r[1:] != r[:-1]) | (s[1:] != s[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[sa] = np.concatenate(([0], np.cumsum(changed)))
        rank = new_rank
        k *= 2
    return np.argsort(rank, kind="stable")


def lcp_array(letters: np.ndarray, sa: np.ndarray) -> np.ndarray:
    """Kasai: lcp[r] = LCP(suffix sa[r-1], suffix sa[r]); lcp[0] = 0."""
    n = int(letters.shape[0])
    if n == 0:
        return np.empty(0, dtype=np.int64)
    s = letters.tolist()
    sa_l = sa.tolist()
    rank = [0] * n
    for r, i in enumerate(sa_l):
        rank[i] = r
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa_l[r - 1]
        while i + h < n and j + h < n and s[i + h] == s[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.asarray(lcp, dtype=np.int64)


class LongestCommonExtension:
    """LCE(i, j) = length of the longest common prefix of suffixes i and j.

    Built once per word: suffix array, Kasai LCP and a sparse table over the
    LCP array, so each batch of queries is a handful of numpy gathers.
    """

    def __init__(self, letters: np.ndarray) -> None:
        self.n = int(letters.shape[0])
        sa = suffix_array(letters)
        self.rank = np.empty(self.n, dtype=np.int64)
        self.rank[sa] = np.arange(self.n, dtype=np.int64)
        lcp = lcp_array(letters, sa)
        self._table = self._sparse_table(lcp)
        self._log = np.zeros(self.n + 1, dtype=np.int64)
        for i in range(2, self.n + 1):
            self._log[i] = self._log[i >> 1] + 1

    @staticmethod
    def _sparse_table(lcp: np.ndarray) -> np.ndarray:
        n = int(lcp.shape[0])
        levels: List[np.ndarray] = [lcp]
        span = 1
        while 2 * span <= n:
            prev = levels[-1]
            cur = np.zeros(n, dtype=np.int64)
            cur[: n - 2 * span + 1] = np.minimum(prev[: n - 2 * span + 1], prev[span : n - span + 1])
            levels.append(cur)
            span *= 2
        return np.stack(levels) if n else np.zeros((1, 0), dtype=np.int64)

    def query(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Vectorised LCE for position pairs with i != j elementwise."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        if i.size == 0:
            return np.empty(0, dtype=np.int64)
        ri, rj = self.rank[i], self.rank[j]
        lo = np.minimum(ri, rj) + 1
        hi = np.maximum(ri, rj)
        level = self._log[hi - lo + 1]
        return np.minimum(self._table[level, lo], self._table[level, hi - (1 << level) + 1])
