import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcevlab.algebra import FiniteAlgebra, OpTable
from malcevlab.partitions import Partition
from malcevlab.relstruct import (
    Relation,
    RelStructure,
    build_b0,
    build_bn,
    build_order2,
    build_p0,
    build_s,
    build_wn,
    classify_pentagon,
    compatible,
    factor_pentagon,
    find_isomorphism,
    hom_search,
    is_homomorphism,
    is_polymorphism,
    polymorphism_violation,
    product_view,
    verify_pentagon,
)

from oracles import compose, equiv_closure, homs, preserves
from strategies import partitions, structures


def _rels(s):
    return {r.name: r.as_set() for r in s.relations}


# ---------------------------------------------------------------- builders


def test_wn_partitions():
    w2, w3 = build_wn(2), build_wn(3)
    assert str(w2.rel("alpha").partition) == "01|2" and str(w2.rel("beta").partition) == "0|12"
    assert str(w3.rel("alpha").partition) == "01|23" and str(w3.rel("beta").partition) == "0|12|3"
    for n in range(2, 8):
        w = build_wn(n)
        assert (0, n) not in w.rel("alpha") and (0, n) not in w.rel("beta")
    with pytest.raises(ValueError):
        build_wn(1)


def test_small_targets():
    assert build_order2().rel("le").as_set() == {(0, 0), (0, 1), (1, 1)}
    assert build_s().rel("J").as_set() == {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)}
    assert build_bn(3).rel("R").as_set() == set(itertools.product((0, 1), repeat=3)) - {(0, 0, 0)}
    b0 = build_b0(3)
    assert [r.name for r in b0.relations] == ["R1", "R2", "R3"]
    assert b0.rel("R1").as_set() == {(1,)}


def test_known_polymorphisms(zoo):
    join = zoo["sl2"].op("join")
    m = zoo["m2"].op("m")
    assert is_polymorphism(build_order2(), join)
    assert is_polymorphism(build_s(), join)
    assert not is_polymorphism(build_order2(), m)
    name, matrix = polymorphism_violation(build_order2(), m)
    assert name == "le"
    image = tuple(m(*(row[c] for row in matrix)) for c in range(2))
    assert image not in build_order2().rel("le")
    assert compatible(build_s(), zoo["sl2"])
    assert not compatible(build_order2(), zoo["m2"])


@st.composite
def op_and_structure(draw):
    n = draw(st.integers(1, 3))
    ar = draw(st.integers(0, 3))
    sig = draw(st.sampled_from([(("r", 1),), (("r", 2),), (("r", 2), ("s", 3))]))
    s = draw(structures(size=n, sig=sig))
    tab = draw(st.lists(st.integers(0, n - 1), min_size=n**ar, max_size=n**ar))
    return s, OpTable("f", ar, n, tab)


@settings(max_examples=300, deadline=None)
@given(op_and_structure())
def test_polymorphism_matches_oracle(case):
    s, op = case
    want = all(preserves(s.size, r.as_set(), r.arity, op.arity, op.table) for r in s.relations)
    assert is_polymorphism(s, op) == want


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(partitions(n), st.integers(0, 3))), st.data())
def test_partition_mirrored_relations_match_tuple_relations(case, data):
    p, ar = case
    n = p.size
    tab = data.draw(st.lists(st.integers(0, n - 1), min_size=n**ar, max_size=n**ar))
    op = OpTable("f", ar, n, tab)
    mirrored = RelStructure("m", n, (Relation.from_partition("e", p),))
    plain = RelStructure("p", n, (Relation.of("e", n, 2, sorted(p.pairs())),))
    assert is_polymorphism(mirrored, op) == is_polymorphism(plain, op)


# ---------------------------------------------------------------- pentagons


@st.composite
def equivalence_triples(draw):
    n = draw(st.integers(1, 6))
    return tuple(draw(partitions(n)) for _ in range(3))


def _pentagon_oracle(a, b, g):
    n = a.size
    full = {(x, y) for x in range(n) for y in range(n)}
    A, B, G = a.pairs(), b.pairs(), g.pairs()
    return (
        A & B == {(x, x) for x in range(n)}
        and compose(A, B) == full
        and equiv_closure(n, G | B) == full
        and G < A
    )


@settings(max_examples=300, deadline=None)
@given(equivalence_triples())
def test_verify_pentagon_matches_definition(abg):
    a, b, g = abg
    st_ = RelStructure(
        "t",
        a.size,
        tuple(Relation.from_partition(k, p) for k, p in zip(("alpha", "beta", "gamma"), abg)),
    )
    assert bool(verify_pentagon(st_)) == _pentagon_oracle(a, b, g)


def test_p0_is_a_very_special_pentagon():
    p0 = build_p0()
    assert verify_pentagon(p0)
    cls = classify_pentagon(factor_pentagon(p0, (2, 2)))
    assert cls.kind == "very-special" and len(cls.full_fibers) == 1
    with pytest.raises(ValueError):
        factor_pentagon(p0, (4, 1))


def test_product_view_indexing():
    g = Partition.from_labels([0, 0, 1, 2])  # fiber a=0 full, a=1 discrete
    st_ = RelStructure(
        "p",
        4,
        (
            Relation.from_partition("alpha", Partition.parse("01|23")),
            Relation.from_partition("beta", Partition.parse("02|13")),
            Relation.from_partition("gamma", g),
        ),
    )
    pv = product_view(st_, 2, 2)
    assert pv.element(1, 0) == 2
    cls = classify_pentagon(pv)
    assert cls.kind == "very-special" and cls.full_fibers == (0,)


def test_failed_axioms_are_named():
    bad = RelStructure(
        "b",
        2,
        tuple(Relation.from_partition(k, Partition.bottom(2)) for k in ("alpha", "beta", "gamma")),
    )
    chk = verify_pentagon(bad)
    assert not chk and "full relation" in chk.message


# ---------------------------------------------------------------- homomorphisms


@st.composite
def hom_instance(draw):
    sig = draw(st.sampled_from([(("r", 2),), (("r", 1), ("s", 2)), (("t", 3),), (("r", 2), ("s", 2))]))
    src = draw(structures(max_size=5, sig=sig))
    tgt = draw(structures(max_size=3, sig=sig))
    pinned = {}
    if draw(st.booleans()):
        v = draw(st.integers(0, src.size - 1))
        pinned[v] = draw(st.integers(0, tgt.size - 1))
    return src, tgt, pinned


@settings(max_examples=300, deadline=None)
@given(hom_instance())
def test_hom_search_matches_enumeration(case):
    src, tgt, pinned = case
    h = hom_search(src, tgt, pinned)
    exists = next(homs(src.size, _rels(src), tgt.size, _rels(tgt), pinned), None) is not None
    assert (h is not None) == exists
    if h is not None:
        assert is_homomorphism(src, tgt, h)
        assert all(h[v] == t for v, t in pinned.items())


@st.composite
def equivalence_hom_instance(draw):
    n = draw(st.integers(1, 6))
    m = draw(st.integers(1, 3))
    src = RelStructure(
        "s", n, (Relation.from_partition("e", draw(partitions(n))), Relation.of("u", n, 1, [(0,)]))
    )
    tgt = RelStructure(
        "t",
        m,
        (
            Relation.from_partition("e", draw(partitions(m))),
            Relation.of("u", m, 1, [(x,) for x in draw(st.sets(st.integers(0, m - 1)))]),
        ),
    )
    return src, tgt


@settings(max_examples=200, deadline=None)
@given(equivalence_hom_instance())
def test_class_propagation_matches_enumeration(case):
    src, tgt = case
    h = hom_search(src, tgt)
    exists = next(homs(src.size, _rels(src), tgt.size, _rels(tgt)), None) is not None
    assert (h is not None) == exists


def test_pinned_edge_against_order():
    edge = RelStructure("e", 2, (Relation.of("le", 2, 2, [(0, 1)]),))
    assert hom_search(edge, build_order2(), {0: 1, 1: 0}) is None
    assert hom_search(edge, build_order2(), {0: 0}) is not None


def test_signature_mismatch():
    with pytest.raises(ValueError):
        hom_search(build_order2(), build_s())


def test_isomorphism():
    p0 = build_p0()
    perm = [3, 2, 1, 0]
    moved = RelStructure(
        "q",
        4,
        tuple(Relation.of(r.name, 4, 2, [(perm[a], perm[b]) for a, b in r.as_set()]) for r in p0.relations),
    )
    iso = find_isomorphism(p0, moved)
    assert iso is not None
    assert all({(iso[a], iso[b]) for a, b in r.as_set()} == moved.rel(r.name).as_set() for r in p0.relations)
    flat = p0.replace("gamma", Relation.from_partition("gamma", Partition.bottom(4)))
    assert find_isomorphism(p0, flat) is None
    with pytest.raises(ValueError):
        find_isomorphism(p0, build_wn(3))
