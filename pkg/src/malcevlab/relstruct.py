"""Finite relational structures, named builders, polymorphisms, and
homomorphism search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .partitions import Partition, congruence_violation, join, meet


# ---------------------------------------------------------------- relations


@dataclass(frozen=True, eq=False)
class Relation:
    """A named relation; ``tuples`` is a sorted unique ``(k, arity)`` array.

    An equivalence relation may be held only as its ``partition`` mirror,
    in which case ``tuples`` is materialized on first use.
    """

    name: str
    arity: int
    size: int
    tuples: np.ndarray | None = None
    partition: Partition | None = None
    _codes: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.tuples is None and self.partition is None:
            raise ValueError(f"relation {self.name}: no tuples given")
        if self.tuples is not None:
            t = np.asarray(self.tuples, dtype=np.int64).reshape(-1, self.arity)
            if t.size and (t.min() < 0 or t.max() >= self.size):
                raise ValueError(f"relation {self.name}: entry outside universe")
            t = np.unique(t, axis=0) if len(t) else t
            t.flags.writeable = False
            object.__setattr__(self, "tuples", t)
        if self.partition is not None:
            if self.arity != 2 or self.partition.size != self.size:
                raise ValueError(f"relation {self.name}: partition mirror mismatch")

    @classmethod
    def of(cls, name: str, size: int, arity: int, tuples: Iterable[Sequence[int]], equivalence=False):
        rows = [tuple(t) for t in tuples]
        for r in rows:
            if len(r) != arity:
                raise ValueError(f"relation {name}: tuple {r} has wrong arity")
        arr = np.array(rows, dtype=np.int64).reshape(len(rows), arity)
        part = None
        if equivalence:
            part = as_partition(size, arr)
            if part is None:
                raise ValueError(f"relation {name} is not an equivalence")
        return cls(name, arity, size, arr, part)

    @classmethod
    def from_partition(cls, name: str, p: Partition):
        return cls(name, 2, p.size, None, p)

    def array(self) -> np.ndarray:
        if self.tuples is None:
            rows = [(a, b) for blk in self.partition.classes() for a in blk for b in blk]
            t = np.array(sorted(rows), dtype=np.int64).reshape(-1, 2)
            t.flags.writeable = False
            object.__setattr__(self, "tuples", t)
        return self.tuples

    def codes(self) -> np.ndarray:
        """Sorted integer codes of the tuples (mixed radix, first entry most significant)."""
        if not self._codes:
            self._codes.append(encode(self.array(), self.size))
        return self._codes[0]

    def contains_rows(self, rows: np.ndarray) -> np.ndarray:
        if self.partition is not None:
            r = self.partition.rep
            return r[rows[:, 0]] == r[rows[:, 1]]
        codes = self.codes()
        q = encode(rows, self.size)
        pos = np.searchsorted(codes, q)
        pos = np.minimum(pos, max(len(codes) - 1, 0))
        return (codes[pos] == q) if len(codes) else np.zeros(len(q), dtype=bool)

    def __contains__(self, tup) -> bool:
        row = np.asarray(tup, dtype=np.int64).reshape(1, self.arity)
        return bool(self.contains_rows(row)[0])

    def __len__(self):
        if self.tuples is None:
            return sum(len(b) ** 2 for b in self.partition.classes())
        return len(self.tuples)

    def as_set(self) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in r) for r in self.array()}

    def same_as(self, other: "Relation") -> bool:
        if self.arity != other.arity or self.size != other.size:
            return False
        if self.partition is not None and other.partition is not None:
            return self.partition == other.partition
        return np.array_equal(self.array(), other.array())


def encode(rows: np.ndarray, size: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    code = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        code = code * size + rows[:, j]
    return code


def as_partition(size: int, pairs: np.ndarray) -> Partition | None:
    """The partition whose pair set is exactly ``pairs``, or ``None``."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    p = Partition.from_pairs(size, pairs.tolist())
    uniq = np.unique(pairs, axis=0) if len(pairs) else pairs
    expected = sum(len(b) ** 2 for b in p.classes())
    if len(uniq) != expected:
        return None
    return p


@dataclass(frozen=True, eq=False)
class RelStructure:
    name: str
    size: int
    relations: tuple[Relation, ...]
    factors: tuple[int, ...] | None = None

    def __post_init__(self):
        rels = tuple(self.relations)
        object.__setattr__(self, "relations", rels)
        names = [r.name for r in rels]
        if len(set(names)) != len(names):
            raise ValueError("relation names must be pairwise distinct")
        for r in rels:
            if r.size != self.size:
                raise ValueError(f"relation {r.name} has size {r.size}, structure has {self.size}")
        if self.factors is not None and int(np.prod(self.factors)) != self.size:
            raise ValueError("factor sizes do not multiply to the universe size")

    @property
    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple((r.name, r.arity) for r in self.relations)

    def rel(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(f"unknown relation {name!r}")

    def replace(self, name: str, new: Relation) -> "RelStructure":
        rels = tuple(new if r.name == name else r for r in self.relations)
        return RelStructure(self.name, self.size, rels, self.factors)

    def same_as(self, other: "RelStructure") -> bool:
        if self.size != other.size or self.signature != other.signature:
            return False
        return all(r.same_as(other.rel(r.name)) for r in self.relations)

    def __repr__(self):
        sig = ", ".join(f"{n}/{a}" for n, a in self.signature)
        return f"RelStructure({self.name!r}, size={self.size}, rels=[{sig}])"


def equivalence(name: str, p: Partition) -> Relation:
    arr = np.array(sorted(p.pairs()), dtype=np.int64).reshape(-1, 2)
    return Relation(name, 2, p.size, arr, p)


# ---------------------------------------------------------------- builders


def build_p0() -> RelStructure:
    """Four elements with alpha = 12|03, beta = 01|23, gamma = 12|0|3."""
    return RelStructure(
        "P0",
        4,
        (
            equivalence("alpha", Partition.from_blocks(4, [[1, 2], [0, 3]])),
            equivalence("beta", Partition.from_blocks(4, [[0, 1], [2, 3]])),
            equivalence("gamma", Partition.from_blocks(4, [[1, 2]])),
        ),
    )


def build_wn(n: int) -> RelStructure:
    """Universe ``0..n``, alpha = 01|23|..., beta = 0|12|34|..."""
    if n < 2:
        raise ValueError("W_n needs n >= 2")
    size = n + 1
    alpha = Partition.from_blocks(size, [[i, i + 1] for i in range(0, n, 2)])
    beta = Partition.from_blocks(size, [[i, i + 1] for i in range(1, n, 2)])
    return RelStructure(f"W{n}", size, (equivalence("alpha", alpha), equivalence("beta", beta)))


def build_order2() -> RelStructure:
    return RelStructure("order2", 2, (Relation.of("le", 2, 2, [(0, 0), (0, 1), (1, 1)]),))


def build_s() -> RelStructure:
    """Two elements with ``J`` the graph of join."""
    j = [(x, y, max(x, y)) for x in (0, 1) for y in (0, 1)]
    return RelStructure("S", 2, (Relation.of("J", 2, 3, j),))


def _nonzero_cube(k: int) -> list[tuple[int, ...]]:
    return [t for t in itertools.product((0, 1), repeat=k) if any(t)]


def build_bn(n: int) -> RelStructure:
    if n < 2:
        raise ValueError("B_n needs n >= 2")
    return RelStructure(f"B{n}", 2, (Relation.of("R", 2, n, _nonzero_cube(n)),))


def build_b0(kmax: int = 4) -> RelStructure:
    """Relations ``R1..R{kmax}``; ``Rk`` is ``{0,1}^k`` minus the zero tuple."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    rels = tuple(Relation.of(f"R{k}", 2, k, _nonzero_cube(k)) for k in range(1, kmax + 1))
    return RelStructure(f"B0[k<={kmax}]", 2, rels)


# ---------------------------------------------------------------- compatibility


@dataclass
class Check:
    """Truthy outcome carrying a diagnostic when false."""

    ok: bool
    message: str = ""
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _op_apply_rows(op, args: list[np.ndarray], size: int) -> np.ndarray:
    code = np.zeros_like(args[0])
    for a in args:
        code = code * size + a
    return op.table[code]


def polymorphism_violation(st: RelStructure, op, chunk: int = 1 << 18):
    """First ``(relation, matrix)`` whose image leaves the relation, or ``None``.

    The matrix is a tuple of argument tuples (one per op argument), each a
    member of the relation.
    """
    if op.size != st.size:
        raise ValueError(f"op {op.name} has size {op.size}, structure has {st.size}")
    for rel in st.relations:
        if op.arity == 0:
            row = np.full((1, rel.arity), op.table[0], dtype=np.int64)
            if not rel.contains_rows(row)[0]:
                return rel.name, ()
            continue
        if rel.partition is not None:
            if _partition_violation(rel.partition, op) is not None:
                return rel.name, _partition_matrix(rel, op)
            continue
        tup = rel.array()
        k = len(tup)
        if k == 0:
            continue
        total = k**op.arity
        for start in range(0, total, chunk):
            flat = np.arange(start, min(total, start + chunk), dtype=np.int64)
            idx = np.unravel_index(flat, (k,) * op.arity)
            cols = [
                _op_apply_rows(op, [tup[i][:, c] for i in idx], st.size) for c in range(rel.arity)
            ]
            image = np.stack(cols, axis=1)
            ok = rel.contains_rows(image)
            if not ok.all():
                w = int(np.argmin(ok))
                return rel.name, tuple(tuple(int(v) for v in tup[i[w]]) for i in idx)
    return None


class _OneOp:
    def __init__(self, op):
        self.ops = (op,)
        self.size = op.size

    def op(self, name):
        return self.ops[0]


def _partition_violation(p: Partition, op):
    return congruence_violation(_OneOp(op), p)


def _partition_matrix(rel: Relation, op):
    # locate a concrete violating matrix by brute force over the translation witness
    tup = rel.array()
    for idx in itertools.product(range(len(tup)), repeat=op.arity):
        left = op(*(int(tup[i][0]) for i in idx))
        right = op(*(int(tup[i][1]) for i in idx))
        if (left, right) not in rel:
            return tuple(tuple(int(v) for v in tup[i]) for i in idx)
    raise AssertionError("translation check and matrix search disagree")


def is_polymorphism(st: RelStructure, op) -> bool:
    return polymorphism_violation(st, op) is None


def compatible(st: RelStructure, alg) -> Check:
    """Whether every basic operation of ``alg`` preserves every relation of ``st``."""
    if alg.size != st.size:
        raise ValueError(f"algebra has size {alg.size}, structure has {st.size}")
    for op in alg.ops:
        bad = polymorphism_violation(st, op)
        if bad is not None:
            rel, matrix = bad
            return Check(
                False,
                f"op {op.name} does not preserve {rel}: argument tuples {matrix}",
                {"op": op.name, "relation": rel, "matrix": matrix},
            )
    return Check(True)


# ---------------------------------------------------------------- pentagons


def _equivalence_of(st: RelStructure, name: str) -> Partition:
    if name not in dict(st.signature):
        raise ValueError(f"structure {st.name} has no relation {name}")
    rel = st.rel(name)
    if rel.partition is not None:
        return rel.partition
    if rel.arity != 2:
        raise ValueError(f"relation {name} is not binary")
    p = as_partition(st.size, rel.array())
    if p is None:
        raise ValueError(f"relation {name} is not an equivalence")
    return p


def verify_pentagon(st: RelStructure) -> Check:
    """Check the four pentagon axioms; the message names the first failure."""
    a, b, g = (_equivalence_of(st, x) for x in ("alpha", "beta", "gamma"))
    n = st.size
    if not meet(a, b).is_bottom():
        return Check(False, "alpha meet beta is not the identity")
    pairs = {(int(x), int(y)) for x, y in zip(a.labels(), b.labels())}
    if len(pairs) != a.block_count() * b.block_count():
        return Check(False, "alpha composed with beta is not the full relation")
    if not join(g, b).is_top():
        return Check(False, "gamma join beta is not the full relation")
    if not (g.le(a) and g != a):
        return Check(False, "gamma is not strictly below alpha")
    return Check(True, f"pentagon on {n} elements")


@dataclass(frozen=True, eq=False)
class PentagonView:
    """A pentagon with its product decomposition ``P = A x B``.

    ``coords[p] = (a, b)``; ``alpha`` is the kernel of ``p -> a`` and
    ``beta`` the kernel of ``p -> b``.  ``fibers[a]`` is gamma restricted
    to ``{a} x B``, as a partition of ``B``.
    """

    structure: RelStructure
    sizes: tuple[int, int]
    coords: tuple[tuple[int, int], ...]
    fibers: tuple[Partition, ...]

    def element(self, a: int, b: int) -> int:
        return self.coords.index((a, b))


def factor_pentagon(st: RelStructure, sizes: tuple[int, int] | None = None) -> PentagonView:
    """Factor via class indices: ``a`` numbers alpha-classes, ``b`` beta-classes,
    each in order of least element."""
    check = verify_pentagon(st)
    if not check:
        raise ValueError(f"not a pentagon: {check.message}")
    alpha, beta, gamma = (_equivalence_of(st, x) for x in ("alpha", "beta", "gamma"))
    na, nb = alpha.block_count(), beta.block_count()
    if sizes is not None and tuple(sizes) != (na, nb):
        raise ValueError(
            f"factorization {sizes[0]}x{sizes[1]} inconsistent with alpha/beta ({na}x{nb})"
        )
    la, lb = alpha.labels(), beta.labels()
    coords = tuple((int(x), int(y)) for x, y in zip(la, lb))
    return PentagonView(st, (na, nb), coords, _fibers(gamma, coords, na, nb))


def product_view(st: RelStructure, na: int, nb: int) -> PentagonView:
    """View with the fixed indexing ``p = a * nb + b``; alpha/beta must be the projection kernels."""
    if na * nb != st.size:
        raise ValueError("factor sizes do not match the universe")
    alpha, beta, gamma = (_equivalence_of(st, x) for x in ("alpha", "beta", "gamma"))
    idx = np.arange(st.size)
    if alpha != Partition(idx // nb) or beta != Partition(idx % nb):
        raise ValueError("alpha and beta are not the projection kernels of the factorization")
    coords = tuple((int(p // nb), int(p % nb)) for p in idx)
    return PentagonView(st, (na, nb), coords, _fibers(gamma, coords, na, nb))


def _fibers(gamma: Partition, coords, na: int, nb: int) -> tuple[Partition, ...]:
    where = {c: p for p, c in enumerate(coords)}
    out = []
    for a in range(na):
        row = [where[(a, b)] for b in range(nb)]
        out.append(Partition(gamma.rep[row]))
    return tuple(out)


@dataclass(frozen=True)
class PentagonClass:
    kind: str  # "not-special" | "special" | "very-special"
    eta: Partition | None
    full_fibers: tuple[int, ...]  # the a with gamma^a = 1_B

    def __str__(self):
        if self.kind == "special":
            return f"special(eta={self.eta})"
        return self.kind


def classify_pentagon(pv: PentagonView) -> PentagonClass:
    nb = pv.sizes[1]
    top = Partition.top(nb)
    distinct = []
    for f in pv.fibers:
        if f not in distinct:
            distinct.append(f)
    full = tuple(a for a, f in enumerate(pv.fibers) if f == top)
    others = [f for f in distinct if f != top]
    if len(distinct) == 2 and top in distinct and len(others) == 1:
        eta = others[0]
        kind = "very-special" if eta.is_bottom() else "special"
        return PentagonClass(kind, eta, full)
    return PentagonClass("not-special", None, full)


# ---------------------------------------------------------------- homomorphisms


def _bit_values(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


class _Search:
    """Backtracking with generalized arc consistency and a trail."""

    def __init__(self, source: RelStructure, target: RelStructure, pinned: Mapping[int, int]):
        n, m = source.size, target.size
        self.n, self.m = n, m
        full = (1 << m) - 1
        self.dom = [full] * n
        for v, t in pinned.items():
            if not 0 <= v < n or not 0 <= t < m:
                raise ValueError(f"pin {v} -> {t} outside universes")
            self.dom[v] &= 1 << t
        self.trail: list[tuple] = []
        self.watch: list[list[tuple[str, int]]] = [[] for _ in range(n)]
        self.degree = [0] * n

        # class constraints: equivalence on both sides
        self.cls_members: list[list[int]] = []
        self.cls_tmasks: list[list[int]] = []  # target class element masks
        self.cls_allowed: list[int] = []
        # tuple constraints
        self.scopes: list[tuple[int, ...]] = []
        self.tables: list[list[tuple[int, ...]]] = []

        for srel in source.relations:
            trel = target.rel(srel.name)
            if srel.partition is not None and trel.partition is not None:
                tcls = trel.partition.classes()
                tmasks = [sum(1 << x for x in blk) for blk in tcls]
                for blk in srel.partition.classes():
                    if len(blk) < 2:
                        continue
                    cid = len(self.cls_members)
                    self.cls_members.append(list(blk))
                    self.cls_tmasks.append(tmasks)
                    self.cls_allowed.append((1 << len(tmasks)) - 1)
                    for v in blk:
                        self.watch[v].append(("c", cid))
                        self.degree[v] += len(blk) - 1
                continue
            table = [tuple(int(x) for x in r) for r in trel.array()]
            for row in srel.array():
                scope = tuple(int(x) for x in row)
                cid = len(self.scopes)
                self.scopes.append(scope)
                self.tables.append(table)
                for v in set(scope):
                    self.watch[v].append(("t", cid))
                    self.degree[v] += len(scope) - 1

        self.order = sorted(range(n), key=lambda v: (-self.degree[v], v))

    # domain edits are logged on the trail
    def _set_dom(self, v: int, new: int) -> None:
        self.trail.append(("d", v, self.dom[v]))
        self.dom[v] = new

    def _set_allowed(self, cid: int, new: int) -> None:
        self.trail.append(("c", cid, self.cls_allowed[cid]))
        self.cls_allowed[cid] = new

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            kind, i, old = self.trail.pop()
            if kind == "d":
                self.dom[i] = old
            else:
                self.cls_allowed[i] = old

    def _class_hits(self, cid: int, d: int) -> int:
        hit = 0
        for c, tm in enumerate(self.cls_tmasks[cid]):
            if d & tm:
                hit |= 1 << c
        return hit

    def _revise_class(self, cid: int, v: int | None, queue: list, queued: set) -> bool:
        """Members must share one target class; ``v`` names the member that changed.

        Invariant after a revision: every member's domain lies inside the
        allowed target classes, so a change at ``v`` only matters when it
        shrinks the allowed set.
        """
        allowed = self.cls_allowed[cid]
        members = [v] if v is not None else self.cls_members[cid]
        for w in members:
            allowed &= self._class_hits(cid, self.dom[w])
        if not allowed:
            return False
        if allowed == self.cls_allowed[cid] and v is not None:
            return True
        if allowed != self.cls_allowed[cid]:
            self._set_allowed(cid, allowed)
        keep = 0
        for c, tm in enumerate(self.cls_tmasks[cid]):
            if allowed >> c & 1:
                keep |= tm
        for w in self.cls_members[cid]:
            d = self.dom[w]
            if d & ~keep:
                nd = d & keep
                if not nd:
                    return False
                self._set_dom(w, nd)
                if w not in queued:
                    queued.add(w)
                    queue.append(w)
        return True

    def _revise_tuple(self, cid: int, queue: list, queued: set) -> bool:
        scope = self.scopes[cid]
        dom = self.dom
        support = [0] * len(scope)
        for row in self.tables[cid]:
            ok = True
            for i, v in enumerate(scope):
                if not dom[v] >> row[i] & 1:
                    ok = False
                    break
            if not ok:
                continue
            # repeated variables must receive equal values
            seen = {}
            for i, v in enumerate(scope):
                if seen.setdefault(v, row[i]) != row[i]:
                    ok = False
                    break
            if not ok:
                continue
            for i in range(len(scope)):
                support[i] |= 1 << row[i]
        newdom: dict[int, int] = {}
        for i, v in enumerate(scope):
            newdom[v] = newdom.get(v, dom[v]) & support[i]
        for v, nd in newdom.items():
            if nd != dom[v]:
                if not nd:
                    return False
                self._set_dom(v, nd)
                if v not in queued:
                    queued.add(v)
                    queue.append(v)
        return True

    def propagate(self, start: Iterable[int], initial: bool = False) -> bool:
        queue: list[int] = []
        queued: set[int] = set()
        if initial:
            for cid in range(len(self.cls_members)):
                if not self._revise_class(cid, None, queue, queued):
                    return False
            for cid in range(len(self.scopes)):
                if not self._revise_tuple(cid, queue, queued):
                    return False
        for v in start:
            if v not in queued:
                queued.add(v)
                queue.append(v)
        while queue:
            v = queue.pop()
            queued.discard(v)
            for kind, cid in self.watch[v]:
                if kind == "c":
                    ok = self._revise_class(cid, v, queue, queued)
                else:
                    ok = self._revise_tuple(cid, queue, queued)
                if not ok:
                    return False
        return True

    def run(self) -> list[int] | None:
        if any(d == 0 for d in self.dom):
            return None
        if not self.propagate((), initial=True):
            return None
        return self._search()

    def _search(self) -> list[int] | None:
        stack: list[tuple[int, int, list[int]]] = []
        while True:
            var = next((v for v in self.order if self.dom[v] & (self.dom[v] - 1)), None)
            if var is None:
                return [self.dom[v].bit_length() - 1 for v in range(self.n)]
            stack.append((var, len(self.trail), _bit_values(self.dom[var])))
            while stack:
                var, mark, values = stack[-1]
                self._undo(mark)
                if not values:
                    stack.pop()
                    continue
                val = values.pop(0)
                self._set_dom(var, 1 << val)
                if self.propagate([var]):
                    break
            else:
                return None


def _check_signatures(source: RelStructure, target: RelStructure) -> None:
    if dict(source.signature) != dict(target.signature):
        raise ValueError(
            f"signature mismatch: {sorted(source.signature)} vs {sorted(target.signature)}"
        )


def hom_search(
    source: RelStructure, target: RelStructure, pinned: Mapping[int, int] | None = None
) -> list[int] | None:
    """A homomorphism ``source -> target`` extending ``pinned``, or ``None``.

    Variables are branched in order of descending constraint degree and
    values ascending, so the result is deterministic.
    """
    _check_signatures(source, target)
    return _Search(source, target, dict(pinned or {})).run()


def is_homomorphism(source: RelStructure, target: RelStructure, h: Sequence[int]) -> bool:
    _check_signatures(source, target)
    h = np.asarray(h, dtype=np.int64)
    for srel in source.relations:
        trel = target.rel(srel.name)
        if srel.partition is not None and trel.partition is not None:
            img = trel.partition.rep[h]
            if not np.all(img[srel.partition.rep] == img):
                return False
            continue
        rows = srel.array()
        if len(rows) and not trel.contains_rows(h[rows]).all():
            return False
    return True


def brute_force_homs(source: RelStructure, target: RelStructure, pinned=None):
    """Every homomorphism, by exhaustive enumeration (small sources only)."""
    _check_signatures(source, target)
    pinned = dict(pinned or {})
    rels = [(srel.as_set(), target.rel(srel.name).as_set()) for srel in source.relations]
    for h in itertools.product(range(target.size), repeat=source.size):
        if any(h[v] != t for v, t in pinned.items()):
            continue
        if all(tuple(h[x] for x in t) in tr for sr, tr in rels for t in sr):
            yield list(h)


def find_isomorphism(a: RelStructure, b: RelStructure) -> list[int] | None:
    """A bijection carrying every relation of ``a`` onto that of ``b`` (small sizes)."""
    if a.size != b.size:
        return None
    _check_signatures(a, b)
    rels = [(r.as_set(), b.rel(r.name).as_set()) for r in a.relations]
    for perm in itertools.permutations(range(a.size)):
        if all({tuple(perm[x] for x in t) for t in ra} == rb for ra, rb in rels):
            return list(perm)
    return None


__all__ = [
    "Check",
    "PentagonClass",
    "PentagonView",
    "RelStructure",
    "Relation",
    "brute_force_homs",
    "build_b0",
    "build_bn",
    "build_order2",
    "build_p0",
    "build_s",
    "build_wn",
    "classify_pentagon",
    "compatible",
    "equivalence",
    "factor_pentagon",
    "find_isomorphism",
    "hom_search",
    "is_homomorphism",
    "is_polymorphism",
    "polymorphism_violation",
    "product_view",
    "verify_pentagon",
]
