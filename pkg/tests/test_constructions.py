import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from malcevlab.algebra import OpTable, satisfies_identity
from malcevlab.constructions import (
    MarkedAlgebra,
    PentagonData,
    absorbing_coordinates,
    blocker_polymorphism_criterion,
    blocker_witnesses,
    build_modularity_blocker,
    components,
    componentwise,
    congruence_violation_lazy,
    dependent_coordinates,
    finite_B,
    finite_C,
    finite_P,
    no_small_model,
    pentagon_from_blocker,
    pentagon_tarski_step,
    pentagon_witnesses,
    tarski_chain,
    tarski_step,
    verify_pentagon_data,
    _idempotent_ops,
)
from malcevlab.errors import NotCompatible, VerificationError
from malcevlab.partitions import Partition, congruence_violation
from malcevlab.relstruct import build_p0, find_isomorphism, is_polymorphism, verify_pentagon

from oracles import preserves


def _proper_subsets(m):
    for r in range(1, m):
        yield from (set(c) for c in itertools.combinations(range(m), r))


# ---------------------------------------------------------------- finite structures


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_finite_P_is_very_special_for_every_U(m):
    for U in _proper_subsets(m):
        st_ = finite_P(m, U)
        assert verify_pentagon(st_)
        g = st_.rel("gamma")
        for (a, b), (c, d) in itertools.product(itertools.product(range(m), repeat=2), repeat=2):
            assert ((a * m + b, c * m + d) in g) == (a == c and (a in U or b == d))


def test_finite_P_rejects_improper_U():
    for U in (set(), {0, 1}):
        with pytest.raises(ValueError):
            finite_P(2, U)


def test_smallest_finite_pentagon_is_p0():
    assert find_isomorphism(finite_P(2, {0}), build_p0()) is not None
    assert find_isomorphism(finite_P(2, {1}), build_p0()) is not None


def test_finite_B_relations():
    b = finite_B(4, {1, 3}, kmax=3)
    for k in (1, 2, 3):
        want = {t for t in itertools.product(range(4), repeat=k) if {1, 3} & set(t)}
        assert b.rel(f"R{k}").as_set() == want


def test_finite_C_layout():
    c = finite_C(3, {0}, {1, 2})
    assert c.size == 9 and c.factors == (3, 3)
    assert c.rel("alpha1").partition == Partition.from_labels(np.arange(9) // 3)
    assert c.rel("alpha2").partition == Partition.from_labels(np.arange(9) % 3)
    assert c.rel("R").as_set() == {(a * 3 + b,) for a in range(3) for b in range(3) if a == 0 or b in (1, 2)}


# ---------------------------------------------------------------- componentwise operations


@st.composite
def component_pair(draw, m=None):
    m = m or draw(st.integers(2, 3))
    ar = draw(st.integers(0, 2))
    tabs = [draw(st.lists(st.integers(0, m - 1), min_size=m**ar, max_size=m**ar)) for _ in range(2)]
    return m, OpTable("g", ar, m, tabs[0]), OpTable("h", ar, m, tabs[1])


@settings(max_examples=150, deadline=None)
@given(component_pair())
def test_components_round_trip(case):
    m, f1, f2 = case
    op = componentwise("f", f1, f2)
    for args in itertools.product(range(m * m), repeat=op.arity):
        assert op(*args) == f1(*(a // m for a in args)) * m + f2(*(a % m for a in args))
    g1, g2 = components(op, m)
    assert np.array_equal(g1.table, f1.table) and np.array_equal(g2.table, f2.table)


def test_non_componentwise_detected():
    swap = OpTable("s", 1, 4, [0, 2, 1, 3])  # (a,b) -> (b,a)
    with pytest.raises(NotCompatible):
        components(swap, 2)


@settings(max_examples=150, deadline=None)
@given(component_pair())
def test_dependent_and_absorbing_coordinates(case):
    m, f, _ = case
    grid = list(itertools.product(range(m), repeat=f.arity))
    deps = {
        i
        for i in range(f.arity)
        if any(f(*a) != f(*(a[:i] + (v,) + a[i + 1 :])) for a in grid for v in range(m))
    }
    assert dependent_coordinates(f) == deps
    U = {0}
    absorbing = {i for i in range(f.arity) if all(f(*a) in U for a in grid if a[i] in U)}
    assert absorbing_coordinates(f, U) == absorbing


@settings(max_examples=300, deadline=None)
@given(component_pair(), st.data())
def test_criterion_matches_polymorphism_check(case, data):
    m, f1, f2 = case
    U = data.draw(st.sampled_from([sorted(u) for u in _proper_subsets(m)]))
    P = finite_P(m, U)
    op = componentwise("f", f1, f2)
    assert blocker_polymorphism_criterion(P, op) == is_polymorphism(P, op)


def test_criterion_matches_oracle_for_binary_ops_on_2x2():
    # every componentwise binary op on {0,1}^2 against P[m=2,U={0}] by the tuple oracle
    P = finite_P(2, {0})
    rels = [(r.as_set(), r.arity) for r in P.relations]
    for t1, t2 in itertools.product(itertools.product(range(2), repeat=4), repeat=2):
        op = componentwise("f", OpTable("a", 2, 2, t1), OpTable("b", 2, 2, t2))
        want = all(preserves(4, rel, ar, 2, op.table) for rel, ar in rels)
        assert blocker_polymorphism_criterion(P, op) == want


# ---------------------------------------------------------------- Tarski steps


def test_tarski_step_on_a_chain(zoo):
    ma = MarkedAlgebra(zoo["sl2"], frozenset({1}))
    chain = tarski_chain(ma, 2)
    assert [s.size for s in chain] == [2, 4, 16]
    step = chain[1]
    assert step.U == {1, 3} and step.embedding == (0, 3)
    join = step.alg.op("join")
    assert join(1, 2) == 3
    with pytest.raises(ValueError):
        MarkedAlgebra(zoo["sl2"], frozenset({0, 1}))


def test_tarski_step_keeps_blockers(zoo):
    from malcevlab.malcev import is_cube_blocker

    step = tarski_step(MarkedAlgebra(zoo["sl2"], frozenset({1})))
    assert is_cube_blocker(step.alg, step.U)


def test_lazy_congruence_check_agrees(zoo):
    pd = PentagonData(zoo["sl2"], zoo["sl2"], Partition.from_labels([0, 0, 1, 2]), frozenset({0}))
    prod = pd.product()
    full = prod.materialize()
    for labels in itertools.product(range(4), repeat=4):
        p = Partition.from_labels(labels)
        assert (congruence_violation_lazy(prod, p) is None) == (congruence_violation(full, p) is None)


# ---------------------------------------------------------------- modularity blockers


def test_semilattice_modularity_blocker(zoo):
    mb = build_modularity_blocker(zoo["sl2"])
    assert mb.F.size == 3
    pd = pentagon_from_blocker(mb)
    assert (pd.A.size, pd.B.size) == (3, 2)
    nxt = pentagon_tarski_step(pd)
    assert (nxt.A.size, nxt.B.size) == (9, 4)
    verify_pentagon_data(nxt)


@pytest.mark.parametrize("name", ["m2", "maj2", "l2"])
def test_modular_algebras_have_no_blocker(zoo, name):
    with pytest.raises(ValueError):
        build_modularity_blocker(zoo[name])


def test_bad_pentagon_data_is_rejected(zoo):
    pd = PentagonData(zoo["sl2"], zoo["sl2"], Partition.bottom(4), frozenset())
    with pytest.raises(VerificationError):
        verify_pentagon_data(pd)


# ---------------------------------------------------------------- witness families


def test_pentagon_family_identities_spelled_out():
    fam = pentagon_witnesses(4, {0, 1, 2}, {0, 1})
    A = fam.algebra
    assert {op.name for op in A.ops} == {"f_0", "f_1"} | {
        f"{c}_{i}_{j}" for c in "pqr" for i, j in ((0, 1), (1, 0))
    }
    for lhs, rhs in fam.identities:
        assert satisfies_identity(A, lhs, rhs)
    # f_0 and f_1 take distinct values off the diagonal
    assert fam.op("f_0")(0, 1) != fam.op("f_1")(0, 1)


def test_blocker_family_identities_spelled_out():
    fam = blocker_witnesses(4, {0, 1, 2}, {0, 1})
    A = fam.algebra
    p, q = A.op("p_0_1"), A.op("q_0_1")
    f0, f1 = A.op("f_0"), A.op("f_1")
    for x, y in itertools.product(range(4), repeat=2):
        assert p(x, f1(x, y), y) == x
        assert p(x, f0(x, y), y) == q(x, f1(x, y), y)
        assert q(x, f0(x, y), y) == y
    assert fam.constants == {"c": 2}
    for op in A.ops:
        assert is_polymorphism(fam.structure, op)


def test_family_preconditions():
    with pytest.raises(ValueError):
        pentagon_witnesses(4, {0, 1}, {0, 1})
    with pytest.raises(ValueError):
        blocker_witnesses(4, {0, 1, 2}, {0, 3})


def _pair_solvable(fa, fb, letters):
    """Direct search for p, q(, r) satisfying the chain identities for the pair."""
    T = _idempotent_ops(2, 3)
    xs, ys = np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1])
    sub = lambda f: T[:, (xs * 2 + f[xs * 2 + ys]) * 2 + ys]  # noqa: E731
    Gb, Ga = sub(fb), sub(fa)
    eq = (Ga[:, None, :] == Gb[None, :, :]).all(axis=2)  # eq[s, t]: s(x,fa,y) = t(x,fb,y)
    first = (Gb == xs).all(axis=1)
    last = (Ga == ys).all(axis=1)
    if letters == 2:
        return bool((first[:, None] & eq & last[None, :]).any())
    return bool((first[:, None, None] & eq[:, :, None] & eq[None, :, :] & last[None, None, :]).any())


@pytest.mark.parametrize("family,letters", [("pentagon", 3), ("blocker", 2)])
def test_no_small_model_against_direct_search(family, letters):
    B = _idempotent_ops(2, 2)
    for k in (1, 2, 3):
        model = any(
            all(_pair_solvable(B[fs[i]], B[fs[j]], letters) for i, j in itertools.permutations(range(k), 2))
            for fs in itertools.product(range(len(B)), repeat=k)
        )
        assert no_small_model(family, k) == (not model)
    assert [no_small_model(family, k) for k in (1, 2, 3)] == [False, False, True]
