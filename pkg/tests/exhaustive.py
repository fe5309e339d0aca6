"""Batched exhaustive check of the component criterion on ``m x m``.

For componentwise ``f = (f1, f2)`` of arity ``k``, each relation tuple
matrix of the structure pins one constraint ``(f(I), f(J)) in R``.  With
``f1`` fixed that constraint only involves the entries ``f2[b(I)]`` and
``f2[b(J)]``, so every ``f1`` reduces to a table of allowed value pairs per
pair of ``f2`` entries.  Identical reductions are evaluated once against
every ``f2`` simultaneously.
"""

from __future__ import annotations

import itertools

import numpy as np


def all_tables(m: int, k: int) -> np.ndarray:
    """Every ``k``-ary table on ``[0,m)`` as rows, lexicographic."""
    cells = m**k
    return np.indices((m,) * cells).reshape(cells, -1).T.astype(np.int64)


def _split_codes(m: int, k: int):
    """For each flat argument code over ``m*m``, its first and second component codes."""
    grid = np.indices((m * m,) * k).reshape(k, -1)
    a = np.zeros(grid.shape[1], dtype=np.int64)
    b = np.zeros(grid.shape[1], dtype=np.int64)
    for g in grid:
        a = a * m + g // m
        b = b * m + g % m
    return a, b


def _constraints(structure, k: int):
    """Unique ``(I, J, member)`` argument-code pairs for every binary relation."""
    n = structure.size
    out = []
    for rel in structure.relations:
        if rel.arity != 2:
            raise ValueError("only binary relations are handled")
        T = rel.array()
        member = np.zeros((n, n), dtype=bool)
        member[T[:, 0], T[:, 1]] = True
        pairs = set()
        for rows in itertools.product(range(len(T)), repeat=k):
            I = J = 0
            for r in rows:
                I = I * n + int(T[r, 0])
                J = J * n + int(T[r, 1])
            pairs.add((I, J))
        IJ = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)
        out.append((IJ[:, 0], IJ[:, 1], member))
    return out


def oracle_masks(structure, m: int, k: int, chunk: int = 1024):
    """``(keys, tables, masks)``: ``keys[f1]`` indexes ``masks``, a boolean
    ``(n_keys, m**(m**k))`` array saying which ``f2`` make ``(f1, f2)`` a polymorphism."""
    a_of, b_of = _split_codes(m, k)
    F = all_tables(m, k)
    cons = _constraints(structure, k)
    # group constraints by the f2 entry pair they touch
    groups = {}
    for ci, (I, J, member) in enumerate(cons):
        for t, (i, j) in enumerate(zip(I, J)):
            groups.setdefault((int(b_of[i]), int(b_of[j])), []).append((ci, t))
    gkeys = sorted(groups)
    s, t = np.indices((m, m)).reshape(2, -1)
    per_f1 = []
    for lo in range(0, len(F), chunk):
        F1 = F[lo : lo + chunk]
        acc = np.ones((len(F1), len(gkeys), m * m), dtype=bool)
        for g, key in enumerate(gkeys):
            for ci, idx in groups[key]:
                I, J, member = cons[ci]
                v0 = F1[:, a_of[I[idx]]][:, None] * m + s[None, :]
                v1 = F1[:, a_of[J[idx]]][:, None] * m + t[None, :]
                acc[:, g, :] &= member[v0, v1]
        per_f1.append(np.packbits(acc.reshape(len(F1), -1), axis=1))
    packed = np.concatenate(per_f1)
    uniq, keys = np.unique(packed, axis=0, return_inverse=True)
    width = len(gkeys) * m * m
    tables = np.unpackbits(uniq, axis=1)[:, :width].astype(bool).reshape(len(uniq), len(gkeys), m * m)
    masks = np.ones((len(uniq), len(F)), dtype=bool)
    vi = np.array([p[0] for p in gkeys])
    vj = np.array([p[1] for p in gkeys])
    for u in range(len(uniq)):
        for g in range(len(gkeys)):
            allowed = tables[u, g]
            if allowed.all():
                continue
            masks[u] &= allowed[F[:, vi[g]] * m + F[:, vj[g]]]
    return keys.ravel(), masks


def criterion_masks(m: int, k: int, U):
    """Direct transcription of the criterion: ``D[f1]`` is the bitmask of
    coordinates ``i`` with some ``a`` having ``a_i in U`` and ``f1(a) not in U``;
    ``dep[f2]`` the bitmask of coordinates ``f2`` depends on."""
    F = all_tables(m, k)
    grid = np.indices((m,) * k).reshape(k, -1)
    inU = np.isin(np.arange(m), list(U))
    outside = ~inU[F]  # (tables, cells)
    D = np.zeros(len(F), dtype=np.int64)
    dep = np.zeros(len(F), dtype=np.int64)
    cube_shape = (len(F),) + (m,) * k
    cubes = F.reshape(cube_shape)
    for i in range(k):
        hit = inU[grid[i]]
        D |= np.any(outside & hit[None, :], axis=1).astype(np.int64) << i
        moved = np.moveaxis(cubes, i + 1, 1)
        varies = np.any((moved != moved[:, :1]).reshape(len(F), -1), axis=1)
        dep |= varies.astype(np.int64) << i
    return D, dep


def count_mismatches(structure, m: int, k: int, U) -> tuple[int, int]:
    """``(mismatches, ops_compared)`` over every componentwise ``k``-ary op."""
    keys, masks = oracle_masks(structure, m, k)
    D, dep = criterion_masks(m, k, U)
    crit = {d: (d & dep) == 0 for d in np.unique(D)}
    pairs, counts = np.unique(np.stack([keys, D], axis=1), axis=0, return_counts=True)
    bad = 0
    for (key, d), c in zip(pairs, counts):
        bad += int(c) * int(np.count_nonzero(masks[key] != crit[int(d)]))
    return bad, len(keys) * masks.shape[1]
