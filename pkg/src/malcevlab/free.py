"""Free algebras as value tables, free structures, and strong colorings.

An element of the free algebra on ``k`` generators over ``A`` is the value
table of a term over all assignments ``[k] -> A``.  Assignments are listed
lexicographically with the first generator most significant, so generator
``i`` is the table of the ``i``-th coordinate projection.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_CAP, FiniteAlgebra, OpTable, Subpower, Term, generate_subpower
from .closure import closure
from .partitions import Partition
from .relstruct import RelStructure, Relation, as_partition, hom_search, is_homomorphism


def assignments(n: int, k: int) -> np.ndarray:
    """``(n**k, k)`` array of all assignments in lexicographic order."""
    return np.indices((n,) * k).reshape(k, -1).T.copy()


@dataclass(eq=False)
class FreeAlgebra:
    base: FiniteAlgebra
    gens: int
    sub: Subpower = field(repr=False)
    generator_ids: tuple[int, ...] = ()

    @property
    def elements(self) -> np.ndarray:
        return self.sub.rows

    @property
    def size(self) -> int:
        return len(self.sub)

    def __len__(self):
        return len(self.sub)

    def index_of(self, table) -> int | None:
        return self.sub.index(table)

    def term(self, i: int) -> Term:
        """A term in ``x0..x{k-1}`` whose table is element ``i``."""
        return self.sub.term(i)

    def generator(self, i: int) -> int:
        return self.generator_ids[i]

    def indices_of(self, rows: np.ndarray) -> np.ndarray:
        out = np.empty(len(rows), dtype=np.int64)
        for j, r in enumerate(rows):
            idx = self.sub.index(r)
            if idx is None:
                raise KeyError("table is not an element of the free algebra")
            out[j] = idx
        return out

    def as_algebra(self, limit: int = 4_000_000) -> FiniteAlgebra:
        """The free algebra itself as operation tables (small sizes only)."""
        N = self.size
        rows = self.elements.astype(np.int64)
        ops = []
        for i, op in enumerate(self.base.ops):
            if N**op.arity > limit:
                raise ValueError(f"free algebra too large to tabulate ({N} elements)")
            grid = np.indices((N,) * op.arity).reshape(op.arity, -1) if op.arity else []
            if op.arity:
                vals = self.base.apply_vec(i, [rows[g] for g in grid])
            else:
                vals = np.full((1, rows.shape[1]), op.table[0])
            ops.append(OpTable(op.name, op.arity, N, self.indices_of(vals)))
        return FiniteAlgebra(f"F{self.gens}({self.base.name})", N, tuple(ops))

    def kernel(self, blocks: Partition) -> Partition:
        """Kernel of restricting tables to assignments constant on the blocks of
        a partition of the generators."""
        if blocks.size != self.gens:
            raise ValueError("partition must live on the generators")
        asg = assignments(self.base.size, self.gens)
        cols = np.all(asg == asg[:, blocks.rep], axis=1)
        return Partition.from_labels(self.elements[:, cols])


def free_algebra(alg: FiniteAlgebra, k: int, cap: int = DEFAULT_CAP) -> FreeAlgebra:
    """Free algebra of ``V(alg)`` on ``k`` generators (memoized per algebra)."""
    if k < 1:
        raise ValueError("k must be positive")
    return _free_algebra_cached(alg, k, cap)


@functools.lru_cache(maxsize=32)
def _free_algebra_cached(alg: FiniteAlgebra, k: int, cap: int) -> FreeAlgebra:
    if k < 1:
        raise ValueError("k must be positive")
    asg = assignments(alg.size, k)
    seeds = [tuple(asg[:, i]) for i in range(k)]
    sub = generate_subpower(alg, alg.size**k, seeds, cap)
    ids = tuple(sub.index(s) for s in seeds)
    return FreeAlgebra(alg, k, sub, ids)


@dataclass(eq=False)
class FreeStructure:
    free: FreeAlgebra
    structure: RelStructure
    generating: RelStructure

    @property
    def pins(self) -> dict[int, int]:
        return {self.free.generator(b): b for b in range(self.generating.size)}


def generated_relation(free: FreeAlgebra, rel: Relation, cap: int = DEFAULT_CAP) -> Relation:
    """Least compatible relation on ``free`` containing the generator tuples of ``rel``."""
    alg = free.base
    rows = free.elements
    width = rows.shape[1]
    seeds = np.array(
        [np.concatenate([rows[free.generator(b)] for b in t]) for t in rel.array()],
        dtype=np.int64,
    ).reshape(-1, rel.arity * width)
    out, _, _ = closure(alg.size, alg.kernel_ops(), seeds, cap)
    idx = np.stack(
        [free.indices_of(out[:, j * width : (j + 1) * width]) for j in range(rel.arity)], axis=1
    )
    return Relation(rel.name, rel.arity, free.size, idx)


def free_structure(alg: FiniteAlgebra, B: RelStructure, cap: int = DEFAULT_CAP) -> FreeStructure:
    free = free_algebra(alg, B.size, cap)
    rels = tuple(generated_relation(free, r, cap) for r in B.relations)
    st = RelStructure(f"F({B.name})", free.size, rels)
    return FreeStructure(free, st, B)


def _is_transitive_binary(rel: Relation) -> bool:
    if rel.arity != 2:
        return False
    if rel.partition is not None:
        return True
    pairs = rel.as_set()
    return all((a, d) in pairs for a, b in pairs for c, d in pairs if b == c)


def transitive_closure(rel: Relation) -> Relation:
    n = rel.size
    m = np.zeros((n, n), dtype=bool)
    arr = rel.array()
    m[arr[:, 0], arr[:, 1]] = True
    for k in range(n):
        m |= m[:, k : k + 1] & m[k : k + 1, :]
    return Relation(rel.name, 2, n, np.argwhere(m))


def refine_transitive(fs: FreeStructure, B: RelStructure | None = None) -> FreeStructure:
    """Replace ``R^F`` by its transitive closure wherever ``R^B`` is binary and transitive."""
    B = B or fs.generating
    st = fs.structure
    for rb in B.relations:
        if _is_transitive_binary(rb):
            st = st.replace(rb.name, transitive_closure(st.rel(rb.name)))
    return FreeStructure(fs.free, st, fs.generating)


def refine_congruence(fs: FreeStructure, B: RelStructure | None = None) -> FreeStructure:
    """Replace ``R^F`` by the congruence it generates, for each equivalence ``R^B``.

    Two tables are related iff they agree on every assignment constant on the
    classes of ``R^B``; the resulting relation carries a partition mirror.
    """
    B = B or fs.generating
    st = fs.structure
    for rb in B.relations:
        part = _equivalence_or_none(rb)
        if part is None:
            continue
        st = st.replace(rb.name, Relation.from_partition(rb.name, fs.free.kernel(part)))
    return FreeStructure(fs.free, st, fs.generating)


def _equivalence_or_none(rel: Relation) -> Partition | None:
    if rel.partition is not None:
        return rel.partition
    if rel.arity != 2:
        return None
    return as_partition(rel.size, rel.array())


def coloring_instance(
    alg: FiniteAlgebra, B: RelStructure, cap: int = DEFAULT_CAP, refine: bool = True
) -> FreeStructure:
    """The (optionally refined) free structure a coloring is searched on.

    With ``refine``, equivalence relations are taken straight from the kernel
    criterion (never generated), transitive binary relations are generated and
    closed, and the rest are generated as is.
    """
    free = free_algebra(alg, B.size, cap)
    rels = []
    for rb in B.relations:
        part = _equivalence_or_none(rb) if refine else None
        if part is not None:
            rels.append(Relation.from_partition(rb.name, free.kernel(part)))
            continue
        rf = generated_relation(free, rb, cap)
        if refine and _is_transitive_binary(rb):
            rf = transitive_closure(rf)
        rels.append(rf)
    st = RelStructure(f"F({B.name})", free.size, tuple(rels))
    return FreeStructure(free, st, B)


@dataclass
class Coloring:
    """A strong coloring: ``map[i]`` is the color of free-algebra element ``i``."""

    map: list[int]
    instance: FreeStructure = field(repr=False)

    def color_of_term_table(self, table) -> int:
        return self.map[self.instance.free.index_of(table)]


def strong_coloring(
    alg: FiniteAlgebra,
    B: RelStructure,
    cap: int = DEFAULT_CAP,
    refine: bool = True,
    strong: bool = True,
) -> Coloring | None:
    """A homomorphism from the free structure over ``B`` back to ``B``.

    With ``strong`` (the default), generator ``x_b`` is pinned to ``b``.
    Raises ``CapExceeded`` when a closure outgrows ``cap``.
    """
    fs = coloring_instance(alg, B, cap, refine)
    pins = {}
    if strong:
        for b in range(B.size):
            g = fs.free.generator(b)
            if pins.setdefault(g, b) != b:
                return None  # two generators coincide: no strong coloring
    h = hom_search(fs.structure, B, pins)
    if h is None:
        return None
    if not is_homomorphism(fs.structure, B, h):
        raise AssertionError("hom_search returned a non-homomorphism")
    return Coloring(h, fs)


__all__ = [
    "Coloring",
    "FreeAlgebra",
    "FreeStructure",
    "assignments",
    "coloring_instance",
    "free_algebra",
    "free_structure",
    "generated_relation",
    "refine_congruence",
    "refine_transitive",
    "strong_coloring",
    "transitive_closure",
]
