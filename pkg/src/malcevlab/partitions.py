"""Equivalence relations and congruences on ``{0, ..., n-1}``.

A ``Partition`` is stored in canonical form: ``rep[i]`` is the least
element of the class of ``i``.  That array is also a valid union-find
parent array (every element points straight at its root).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class UnionFind:
    """Union by least root, with path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def to_partition(self) -> "Partition":
        return Partition(np.array([self.find(i) for i in range(len(self.parent))], dtype=np.int64))


def _canonical(labels: np.ndarray) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.size == 0:
        return np.zeros(0, dtype=np.int64)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    return first[inverse.ravel()].astype(np.int64)


@dataclass(frozen=True, eq=False)
class Partition:
    rep: np.ndarray

    def __post_init__(self):
        rep = _canonical(self.rep)
        rep.flags.writeable = False
        object.__setattr__(self, "rep", rep)

    # construction ----------------------------------------------------
    @classmethod
    def bottom(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @classmethod
    def top(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Elements with equal labels share a class.  Labels may be rows of a 2-d array."""
        labels = np.asarray(labels)
        if labels.ndim == 2:
            labels = np.unique(labels, axis=0, return_inverse=True)[1].ravel()
        return cls(labels)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Partition":
        uf = UnionFind(n)
        for a, b in pairs:
            _check(n, a, b)
            uf.union(a, b)
        return uf.to_partition()

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        uf = UnionFind(n)
        for block in blocks:
            block = list(block)
            for x in block:
                _check(n, x)
                uf.union(block[0], x)
        return uf.to_partition()

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read ``"01|23"`` (single digits) or ``"0,1|2,3"``."""
        blocks = []
        for part in text.split("|"):
            part = part.strip()
            items = part.split(",") if "," in part else list(part)
            blocks.append([int(x) for x in items if x.strip()])
        n = 1 + max(x for b in blocks for x in b)
        return cls.from_blocks(n, blocks)

    # queries ---------------------------------------------------------
    @property
    def size(self) -> int:
        return int(self.rep.shape[0])

    @property
    def parent(self) -> np.ndarray:
        return self.rep

    def find(self, i: int) -> int:
        return int(self.rep[i])

    def normalize(self) -> "Partition":
        return self

    def related(self, a: int, b: int) -> bool:
        return self.rep[a] == self.rep[b]

    def __contains__(self, pair) -> bool:
        a, b = pair
        return bool(self.rep[a] == self.rep[b])

    def classes(self) -> list[tuple[int, ...]]:
        """Blocks ordered by least element, each ascending."""
        order = np.argsort(self.rep, kind="stable")
        cuts = np.nonzero(np.diff(self.rep[order]))[0] + 1
        return [tuple(int(x) for x in blk) for blk in np.split(order, cuts)] if self.size else []

    def class_of(self, a: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.nonzero(self.rep == self.rep[a])[0])

    def block_count(self) -> int:
        return int(np.count_nonzero(self.rep == np.arange(self.size)))

    def labels(self) -> np.ndarray:
        """Class numbers ``0..c-1`` in order of least element."""
        roots = self.rep == np.arange(self.size)
        number = np.cumsum(roots) - 1
        return number[self.rep]

    def pairs(self) -> set[tuple[int, int]]:
        out = set()
        for blk in self.classes():
            out.update((a, b) for a in blk for b in blk)
        return out

    def is_bottom(self) -> bool:
        return self.block_count() == self.size

    def is_top(self) -> bool:
        return self.block_count() <= 1

    def le(self, other: "Partition") -> bool:
        _same(self, other)
        return bool(np.all(other.rep[self.rep] == other.rep))

    def __le__(self, other):
        return self.le(other)

    def __lt__(self, other):
        return self.le(other) and self != other

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.rep, other.rep)

    def __hash__(self):
        return hash(self.rep.tobytes())

    def __str__(self):
        sep = "" if self.size <= 10 else ","
        return "|".join(sep.join(str(x) for x in blk) for blk in self.classes())

    def __repr__(self):
        return f"Partition({self})"


def _check(n: int, *xs: int):
    for x in xs:
        if not 0 <= x < n:
            raise ValueError(f"element {x} outside universe of size {n}")


def _same(p: Partition, q: Partition):
    if p.size != q.size:
        raise ValueError(f"partition sizes differ: {p.size} vs {q.size}")


def join(p: Partition, q: Partition) -> Partition:
    _same(p, q)
    uf = UnionFind(p.size)
    for i in range(p.size):
        uf.union(i, int(p.rep[i]))
        uf.union(i, int(q.rep[i]))
    return uf.to_partition()


def meet(p: Partition, q: Partition) -> Partition:
    _same(p, q)
    return Partition(p.rep * p.size + q.rep)


# ---------------------------------------------------------------- relations


@dataclass(frozen=True)
class BinRelation:
    size: int
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((int(a), int(b)) for a, b in self.pairs)
        for a, b in pairs:
            _check(self.size, a, b)
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "BinRelation":
        xs, ys = np.nonzero(m)
        return cls(m.shape[0], frozenset(zip(xs.tolist(), ys.tolist())))

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.size, self.size), dtype=bool)
        for a, b in self.pairs:
            m[a, b] = True
        return m

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __len__(self):
        return len(self.pairs)

    def is_reflexive(self) -> bool:
        return all((a, a) in self.pairs for a in range(self.size))

    def is_transitive(self) -> bool:
        m = self.matrix().astype(np.int64)
        return bool(np.all((m @ m > 0) <= (m > 0)))

    def is_antisymmetric(self) -> bool:
        return all(a == b or (b, a) not in self.pairs for a, b in self.pairs)


class ComposedRelation:
    """``p o q o p ...`` with ``n`` factors, answered by class-hop search."""

    def __init__(self, p: Partition, q: Partition, n: int):
        self.p, self.q, self.n = p, q, n
        self.size = p.size

    def __contains__(self, pair) -> bool:
        a, b = pair
        return in_compose_n(self.p, self.q, self.n, a, b)

    def image(self, a: int) -> np.ndarray:
        return _reach(self.p, self.q, self.n, a)


def _reach(p: Partition, q: Partition, n: int, a: int) -> np.ndarray:
    """Boolean mask of ``{b : (a, b) in p o q o ... (n factors)}``."""
    mask = np.zeros(p.size, dtype=bool)
    mask[a] = True
    for i in range(n):
        r = p if i % 2 == 0 else q
        hit = np.zeros(r.size, dtype=bool)
        hit[r.rep[mask]] = True
        mask = hit[r.rep]
    return mask


def compose_n(p: Partition, q: Partition, n: int):
    """Alternating composition ``p o q o p o ...`` with ``n`` factors.

    Materialized as a ``BinRelation`` when ``size**2 <= 10000``; otherwise a
    ``ComposedRelation`` answering membership lazily.
    """
    _same(p, q)
    if n < 1:
        raise ValueError("n must be positive")
    if p.size**2 > 10_000:
        return ComposedRelation(p, q, n)
    size = p.size

    def mat(r):
        return (r.rep[:, None] == r.rep[None, :]).astype(np.int64)

    m = mat(p)
    for i in range(1, n):
        m = ((m @ mat(q if i % 2 else p)) > 0).astype(np.int64)
    return BinRelation.from_matrix(m > 0) if size else BinRelation(0, frozenset())


def in_compose_n(p: Partition, q: Partition, n: int, a: int, b: int) -> bool:
    _same(p, q)
    if n < 1:
        raise ValueError("n must be positive")
    _check(p.size, a, b)
    return bool(_reach(p, q, n, a)[b])


def modularity_law_holds(alpha: Partition, beta: Partition, gamma: Partition) -> bool:
    """``alpha ^ (beta v gamma) == (alpha ^ beta) v gamma``, assuming ``gamma <= alpha``."""
    _same(alpha, beta)
    _same(alpha, gamma)
    if not gamma.le(alpha):
        raise ValueError("modular law is only asserted for gamma <= alpha")
    return meet(alpha, join(beta, gamma)) == join(meet(alpha, beta), gamma)


# ---------------------------------------------------------------- congruences


def _translations(alg):
    """For each op and position, the table as ``(n, n**(arity-1))`` with that axis first."""
    n = alg.size
    out = []
    for op in alg.ops:
        if op.arity == 0:
            continue
        cube = op.table.reshape((n,) * op.arity)
        for pos in range(op.arity):
            out.append((op.name, pos, np.moveaxis(cube, pos, 0).reshape(n, -1)))
    return out


def congruence_violation(alg, theta: Partition):
    """``None`` if ``theta`` is a congruence of ``alg``; else ``(op_name, detail)``."""
    if theta.size != alg.size:
        raise ValueError("partition size does not match algebra")
    r = theta.rep
    n = alg.size
    for name, pos, t in _translations(alg):
        bad = r[t] != r[t[r]]
        if bad.any():
            a, c = map(int, np.argwhere(bad)[0])
            b = int(r[a])
            rest = alg.op(name).arity - 1
            ctx = [int(x) for x in np.unravel_index(c, (n,) * rest)] if rest else []
            args_a = ctx[:pos] + [a] + ctx[pos:]
            args_b = ctx[:pos] + [b] + ctx[pos:]
            return name, (
                f"arguments {tuple(int(x) for x in args_a)} and {tuple(int(x) for x in args_b)} "
                f"are related but their values {int(t[a, c])} and {int(t[b, c])} are not"
            )
    return None


def is_congruence(alg, theta: Partition) -> bool:
    return congruence_violation(alg, theta) is None


def cg(alg, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Least congruence of ``alg`` containing ``pairs``."""
    n = alg.size
    uf = UnionFind(n)
    frontier = []
    for a, b in pairs:
        _check(n, a, b)
        if uf.union(a, b):
            frontier.append((a, b))
    trans = [t for _, _, t in _translations(alg)]
    while frontier:
        fa = np.array([a for a, _ in frontier], dtype=np.int64)
        fb = np.array([b for _, b in frontier], dtype=np.int64)
        cand = []
        for t in trans:
            xs, ys = t[fa].ravel(), t[fb].ravel()
            keep = xs != ys
            cand.append(np.stack([xs[keep], ys[keep]], axis=1))
        frontier = []
        allc = np.concatenate(cand) if cand else np.zeros((0, 2), dtype=np.int64)
        if allc.size:
            allc = np.unique(np.sort(allc, axis=1), axis=0)
        for x, y in allc.tolist():
            if uf.union(x, y):
                frontier.append((x, y))
    return uf.to_partition()


def _transitive_closure(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    for k in range(m.shape[0]):
        m |= m[:, k : k + 1] & m[k : k + 1, :]
    return m


def find_compatible_order(alg):
    """A compatible partial order with two comparable distinct elements, or ``None``.

    Pairs ``(a, b)`` are tried in lexicographic order; each seeds the least
    compatible quasi-order containing it, which is returned if antisymmetric.
    """
    n = alg.size
    trans = [t for _, _, t in _translations(alg)]
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            m = np.eye(n, dtype=bool)
            m[a, b] = True
            while True:
                xs, ys = np.nonzero(m)
                new = m.copy()
                for t in trans:
                    new[t[xs], t[ys]] = True
                new = _transitive_closure(new)
                if np.any(new & new.T & ~np.eye(n, dtype=bool)):
                    new = None
                    break
                if np.array_equal(new, m):
                    break
                m = new
            if new is not None:
                return BinRelation.from_matrix(m)
    return None


__all__ = [
    "BinRelation",
    "ComposedRelation",
    "Partition",
    "UnionFind",
    "cg",
    "compose_n",
    "congruence_violation",
    "find_compatible_order",
    "in_compose_n",
    "is_congruence",
    "join",
    "meet",
    "modularity_law_holds",
]
