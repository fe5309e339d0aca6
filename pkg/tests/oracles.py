"""Slow, obviously-correct reference implementations used as test oracles.

Everything here works on plain Python sets and tuples and never calls the
library's own closure, partition or search code.
"""

from __future__ import annotations

import itertools
from typing import Iterable


def table_call(table, size, arity, args):
    code = 0
    for a in args:
        code = code * size + a
    return int(table[code])


# ---------------------------------------------------------------- relations


def refl(n):
    return {(a, a) for a in range(n)}


def transitive(pairs):
    pairs = set(pairs)
    while True:
        new = {(a, d) for a, b in pairs for c, d in pairs if b == c} - pairs
        if not new:
            return pairs
        pairs |= new


def equiv_closure(n, pairs):
    pairs = set(pairs) | refl(n)
    pairs |= {(b, a) for a, b in pairs}
    return transitive(pairs)


def compose(r, s):
    return {(a, d) for a, b in r for c, d in s if b == c}


def compose_alternating(r, s, k):
    out = set(r)
    for i in range(1, k):
        out = compose(out, s if i % 2 else r)
    return out


def cg_oracle(n, ops, pairs):
    """Least congruence containing ``pairs``; ``ops`` is a list of ``(arity, table)``."""
    theta = equiv_closure(n, pairs)
    while True:
        new = set()
        for arity, table in ops:
            if arity == 0:
                continue
            for rows in itertools.product(theta, repeat=arity):
                left = table_call(table, n, arity, [p[0] for p in rows])
                right = table_call(table, n, arity, [p[1] for p in rows])
                new.add((left, right))
        if new <= theta:
            return theta
        theta = equiv_closure(n, theta | new)


def partition_pairs(labels):
    n = len(labels)
    return {(a, b) for a in range(n) for b in range(n) if labels[a] == labels[b]}


# ---------------------------------------------------------------- algebras


def subuniverse_oracle(n, ops, seed):
    s = set(seed)
    while True:
        new = set()
        for arity, table in ops:
            for args in itertools.product(sorted(s), repeat=arity):
                new.add(table_call(table, n, arity, args))
        if new <= s:
            return tuple(sorted(s))
        s |= new


def term_functions(n, ops, k):
    """All ``k``-ary term functions as tuples over ``itertools.product(range(n), repeat=k)``."""
    assigns = list(itertools.product(range(n), repeat=k))
    funcs = {tuple(a[i] for a in assigns) for i in range(k)}
    for arity, table in ops:
        if arity == 0:
            funcs.add(tuple(int(table[0]) for _ in assigns))
    while True:
        new = set()
        for arity, table in ops:
            if arity == 0:
                continue
            for args in itertools.product(sorted(funcs), repeat=arity):
                new.add(
                    tuple(
                        table_call(table, n, arity, [f[j] for f in args]) for j in range(len(assigns))
                    )
                )
        if new <= funcs:
            return funcs
        funcs |= new


# ---------------------------------------------------------------- structures


def homs(src_size, src_rels, tgt_size, tgt_rels, pinned=None):
    """Every homomorphism; relations are dicts ``name -> set of tuples``."""
    pinned = pinned or {}
    for h in itertools.product(range(tgt_size), repeat=src_size):
        if any(h[v] != t for v, t in pinned.items()):
            continue
        if all(tuple(h[x] for x in t) in tgt_rels[name] for name, ts in src_rels.items() for t in ts):
            yield h


def preserves(size, rel: Iterable[tuple], rel_arity, arity, table):
    """Whether the operation (flat table over ``size``) preserves the relation."""
    rel = set(rel)
    if arity == 0:
        return (int(table[0]),) * rel_arity in rel
    for rows in itertools.product(sorted(rel), repeat=arity):
        image = tuple(table_call(table, size, arity, [r[j] for r in rows]) for j in range(rel_arity))
        if image not in rel:
            return False
    return True
