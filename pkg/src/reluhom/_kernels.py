"""Hot numeric kernels.

Two implementations live here: numba ``@njit`` kernels and pure-numpy/python
fallbacks with identical semantics.  The env variable ``RELUHOM_NUMBA``
selects the backend (``0``/``false`` forces the fallback; default is numba
when importable).  ``benchmarks/bench_kernels.py`` times both paths.
"""

import heapq
import os

import numpy as np

_flag = os.environ.get("RELUHOM_NUMBA", "1").strip().lower()
USING_NUMBA = _flag not in ("0", "false", "no", "off")

if USING_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USING_NUMBA = False


# ---------------------------------------------------------------------------
# Hamming distance over packed 64-bit words
# ---------------------------------------------------------------------------

def _hamming_matrix_np(words):
    """Pairwise popcount(xor) for rows of a (k, w) uint64 array."""
    x = np.bitwise_xor(words[:, None, :], words[None, :, :])
    return np.bitwise_count(x).sum(axis=2).astype(np.int64)


if USING_NUMBA:

    @njit(cache=True)
    def _popcount64(x):
        # SWAR popcount on one uint64
        x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
        x = (x & np.uint64(0x3333333333333333)) + (
            (x >> np.uint64(2)) & np.uint64(0x3333333333333333)
        )
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)

    @njit(cache=True)
    def _hamming_matrix_nb(words):
        k, w = words.shape
        out = np.zeros((k, k), dtype=np.int64)
        for i in range(k):
            for j in range(i + 1, k):
                acc = np.uint64(0)
                for t in range(w):
                    acc += _popcount64(words[i, t] ^ words[j, t])
                out[i, j] = np.int64(acc)
                out[j, i] = np.int64(acc)
        return out

    hamming_matrix_packed = _hamming_matrix_nb
else:
    hamming_matrix_packed = _hamming_matrix_np


# ---------------------------------------------------------------------------
# Boundary-matrix column reduction over GF(2)
# ---------------------------------------------------------------------------
#
# Columns arrive in filtration order as a CSR triple (col_ptr, col_rows);
# rows are the filtration-ordered simplices one dimension down.  Returns the
# pivot row of each column (-1 when the column reduces to zero).  Columns
# flagged in `skip` are known to reduce to zero (clearing) and are not touched.

def _reduce_columns_py(col_ptr, col_rows, n_rows, skip):
    n_cols = len(col_ptr) - 1
    low = np.full(n_cols, -1, dtype=np.int64)
    owner = {}
    stored = {}
    for j in range(n_cols):
        if skip[j]:
            continue
        heap = [-int(r) for r in col_rows[col_ptr[j]:col_ptr[j + 1]]]
        heapq.heapify(heap)
        pivot = -1
        while heap:
            v = -heapq.heappop(heap)
            odd = True
            while heap and -heap[0] == v:
                heapq.heappop(heap)
                odd = not odd
            if not odd:
                continue
            k = owner.get(v, -1)
            if k < 0:
                pivot = v
                break
            for r in stored[k][1:]:
                heapq.heappush(heap, -r)
        if pivot >= 0:
            col = [pivot]
            while heap:
                v = -heapq.heappop(heap)
                odd = True
                while heap and -heap[0] == v:
                    heapq.heappop(heap)
                    odd = not odd
                if odd:
                    col.append(v)
            low[j] = pivot
            owner[pivot] = j
            stored[j] = col
    return low


if USING_NUMBA:

    @njit(cache=True)
    def _hpush(heap, hn, v):
        if hn >= heap.size:
            nh = np.empty(heap.size * 2, dtype=np.int64)
            nh[:hn] = heap[:hn]
            heap = nh
        heap[hn] = v
        hn += 1
        c = hn - 1
        while c > 0:
            p = (c - 1) >> 1
            if heap[p] < heap[c]:
                heap[p], heap[c] = heap[c], heap[p]
                c = p
            else:
                break
        return heap, hn

    @njit(cache=True)
    def _hpop(heap, hn):
        v = heap[0]
        hn -= 1
        heap[0] = heap[hn]
        c = 0
        while True:
            l = 2 * c + 1
            if l >= hn:
                break
            b = l
            r = l + 1
            if r < hn and heap[r] > heap[l]:
                b = r
            if heap[b] > heap[c]:
                heap[b], heap[c] = heap[c], heap[b]
                c = b
            else:
                break
        return v, hn

    @njit(cache=True)
    def _pop_distinct(heap, hn):
        """Pop the max entry, cancelling mod-2 duplicates.

        Returns (value, hn, odd): odd is False when the value cancelled out.
        """
        v, hn = _hpop(heap, hn)
        odd = True
        while hn > 0 and heap[0] == v:
            _, hn = _hpop(heap, hn)
            odd = not odd
        return v, hn, odd

    @njit(cache=True)
    def _reduce_columns_nb(col_ptr, col_rows, n_rows, skip):
        n_cols = col_ptr.size - 1
        low = np.full(n_cols, -1, dtype=np.int64)
        owner = np.full(n_rows, -1, dtype=np.int64)
        pool = np.empty(max(64, col_rows.size * 2), dtype=np.int64)
        pool_top = 0
        cstart = np.zeros(n_cols, dtype=np.int64)
        clen = np.zeros(n_cols, dtype=np.int64)
        heap = np.empty(64, dtype=np.int64)
        for j in range(n_cols):
            if skip[j]:
                continue
            hn = 0
            for t in range(col_ptr[j], col_ptr[j + 1]):
                heap, hn = _hpush(heap, hn, col_rows[t])
            pivot = np.int64(-1)
            while hn > 0:
                v, hn, odd = _pop_distinct(heap, hn)
                if not odd:
                    continue
                k = owner[v]
                if k < 0:
                    pivot = v
                    break
                # add owner's stored column; its pivot (entry 0) cancels v
                s = cstart[k]
                for t in range(1, clen[k]):
                    heap, hn = _hpush(heap, hn, pool[s + t])
            if pivot >= 0:
                low[j] = pivot
                owner[pivot] = j
                cstart[j] = pool_top
                n_stored = 0
                if pool_top >= pool.size:
                    npool = np.empty(pool.size * 2, dtype=np.int64)
                    npool[:pool_top] = pool[:pool_top]
                    pool = npool
                pool[pool_top] = pivot
                pool_top += 1
                n_stored += 1
                while hn > 0:
                    v, hn, odd = _pop_distinct(heap, hn)
                    if odd:
                        if pool_top >= pool.size:
                            npool = np.empty(pool.size * 2, dtype=np.int64)
                            npool[:pool_top] = pool[:pool_top]
                            pool = npool
                        pool[pool_top] = v
                        pool_top += 1
                        n_stored += 1
                clen[j] = n_stored
        return low

    reduce_columns = _reduce_columns_nb
else:
    reduce_columns = _reduce_columns_py
