"""Pure numpy closure kernel (fallback for the compiled ``_closure``).

Both kernels enumerate candidates in the same canonical order, so they
return identical element orderings and identical parent records.

Order: rounds of semi-naive evaluation.  A round sees the elements
``[0, hi)`` with frontier ``[lo, hi)``.  For each operation (in signature
order) and each position ``p`` holding the first frontier argument, the
argument tuples are visited lexicographically with positions ``< p`` in
``[0, lo)``, position ``p`` in ``[lo, hi)`` and positions ``> p`` in
``[0, hi)``.  New tuples are appended in visiting order.
"""

from __future__ import annotations

import numpy as np

from .errors import CapExceeded

_CHUNK_BYTES = 1 << 24


def element_dtype(size: int):
    """Smallest unsigned dtype holding ``range(size)``."""
    if size <= 1 << 8:
        return np.uint8
    if size <= 1 << 16:
        return np.uint16
    return np.uint32


class _Store:
    def __init__(self, L: int, maxar: int, dtype):
        self.L = L
        self.dtype = dtype
        self.maxar = maxar
        self.count = 0
        self.rows = np.zeros((64, L), dtype=dtype)
        self.pop = np.full(64, -1, dtype=np.int32)
        self.pargs = np.full((64, maxar), -1, dtype=np.int32)
        self.index: dict[bytes, int] = {}

    def _grow(self):
        cap = 2 * self.rows.shape[0]
        rows = np.zeros((cap, self.L), dtype=self.dtype)
        rows[: self.count] = self.rows[: self.count]
        pop = np.full(cap, -1, dtype=np.int32)
        pop[: self.count] = self.pop[: self.count]
        pargs = np.full((cap, self.maxar), -1, dtype=np.int32)
        pargs[: self.count] = self.pargs[: self.count]
        self.rows, self.pop, self.pargs = rows, pop, pargs

    def add(self, row: np.ndarray, key: bytes, op: int, args, cap: int) -> None:
        if self.count >= cap:
            raise CapExceeded(cap)
        if self.count == self.rows.shape[0]:
            self._grow()
        i = self.count
        self.rows[i] = row
        self.pop[i] = op
        for j, a in enumerate(args):
            self.pargs[i, j] = a
        self.index[key] = i
        self.count += 1


def closure(size: int, ops, seeds: np.ndarray, cap: int):
    """Close ``seeds`` (rows over ``range(size)``) under componentwise ``ops``.

    ``ops`` is a sequence of ``(arity, table)`` with row-major tables.
    Returns ``(rows, parent_op, parent_args)``; seeds have ``parent_op == -1``
    and their original seed position in ``parent_args[:, 0]``.
    """
    dtype = element_dtype(size)
    seeds = np.ascontiguousarray(seeds, dtype=dtype)
    if seeds.ndim != 2:
        raise ValueError("seeds must be a 2-d array")
    L = seeds.shape[1]
    maxar = max([ar for ar, _ in ops] + [1])
    tables = [np.asarray(t, dtype=dtype) for _, t in ops]
    st = _Store(L, maxar, dtype)

    for s in range(seeds.shape[0]):
        key = seeds[s].tobytes()
        if key not in st.index:
            st.add(seeds[s], key, -1, (s,), cap)
    for oi, (ar, _) in enumerate(ops):
        if ar == 0:
            row = np.full(L, tables[oi][0], dtype=dtype)
            key = row.tobytes()
            if key not in st.index:
                st.add(row, key, oi, (), cap)

    chunk = max(1, _CHUNK_BYTES // (8 * max(L, 1)))
    void = np.dtype((np.void, max(L, 1) * np.dtype(dtype).itemsize))
    lo, hi = 0, st.count
    while lo < hi:
        for oi, (ar, _) in enumerate(ops):
            if ar == 0:
                continue
            tab = tables[oi]
            for p in range(ar):
                starts = [0] * p + [lo] + [0] * (ar - p - 1)
                sizes = [lo] * p + [hi - lo] + [hi] * (ar - p - 1)
                total = int(np.prod(sizes, dtype=np.int64))
                if total == 0:
                    continue
                for begin in range(0, total, chunk):
                    flat = np.arange(begin, min(total, begin + chunk), dtype=np.int64)
                    idx = np.unravel_index(flat, sizes)
                    args = [idx[j] + starts[j] for j in range(ar)]
                    rows = st.rows
                    code = rows[args[0]].astype(np.intp)
                    for j in range(1, ar):
                        code *= size
                        code += rows[args[j]]
                    res = np.ascontiguousarray(tab[code])
                    if L == 0:
                        first = np.zeros(1, dtype=np.intp)
                    else:
                        _, first = np.unique(res.view(void).ravel(), return_index=True)
                        first.sort()
                    index = st.index
                    for k in first:
                        key = res[k].tobytes()
                        if key not in index:
                            st.add(res[k], key, oi, [int(a[k]) for a in args], cap)
        lo, hi = hi, st.count

    n = st.count
    return st.rows[:n].copy(), st.pop[:n].copy(), st.pargs[:n].copy()
