"""Hypothesis strategies for small random algebras, partitions and structures."""

import itertools

from hypothesis import strategies as st

from malcevlab.algebra import FiniteAlgebra, OpTable
from malcevlab.partitions import Partition
from malcevlab.relstruct import Relation, RelStructure


@st.composite
def algebras(draw, max_size=4, max_ops=2, max_arity=3, min_arity=0):
    n = draw(st.integers(1, max_size))
    k = draw(st.integers(1, max_ops))
    ops = []
    for i in range(k):
        ar = draw(st.integers(min_arity, max_arity if n**max_arity <= 64 else 2))
        tab = draw(st.lists(st.integers(0, n - 1), min_size=n**ar, max_size=n**ar))
        ops.append(OpTable(f"f{i}", ar, n, tab))
    return FiniteAlgebra("rand", n, tuple(ops))


@st.composite
def partitions(draw, size=None, max_size=8):
    n = size if size is not None else draw(st.integers(1, max_size))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return Partition.from_labels(labels)


@st.composite
def structures(draw, size=None, max_size=5, sig=(("r", 2),)):
    n = size if size is not None else draw(st.integers(1, max_size))
    rels = []
    for name, ar in sig:
        all_t = list(itertools.product(range(n), repeat=ar))
        mask = draw(st.lists(st.booleans(), min_size=len(all_t), max_size=len(all_t)))
        rows = [t for t, b in zip(all_t, mask) if b]
        rels.append(Relation.of(name, n, ar, rows))
    return RelStructure("rand", n, tuple(rels))
