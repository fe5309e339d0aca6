"""Constructive witnesses: modularity blockers, very special pentagons, finite
analogues of the large pentagon/blocker/cross structures, Tarski squaring,
and explicit polymorphism families.

Every builder verifies what it builds before returning; a failed check raises
``VerificationError`` since it can only mean a bug upstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    DEFAULT_CAP,
    Apply,
    FiniteAlgebra,
    OpTable,
    ProductAlgebra,
    Term,
    Var,
    is_idempotent,
    power,
    quotient,
    satisfies_identity,
)
from .errors import NotCompatible, VerificationError
from .free import FreeAlgebra, free_algebra
from .partitions import Partition, cg
from .relstruct import (
    Relation,
    RelStructure,
    classify_pentagon,
    is_polymorphism,
    product_view,
    verify_pentagon,
)


def _fmt_set(U: Iterable[int]) -> str:
    return "{" + ",".join(str(u) for u in sorted(U)) + "}"


def _check_subset(m: int, U: Iterable[int], what: str = "U") -> frozenset[int]:
    U = frozenset(int(u) for u in U)
    if not U:
        raise ValueError(f"{what} must be nonempty")
    if any(u < 0 or u >= m for u in U):
        raise ValueError(f"{what} must lie in [0,{m})")
    if len(U) == m:
        raise ValueError(f"{what} must be a proper subset")
    return U


# ---------------------------------------------------------------- congruences of large products


def congruence_violation_lazy(alg, theta: Partition, chunk: int = 1 << 20):
    """Like ``partitions.congruence_violation`` but for anything with ``apply_vec``.

    Checks ``f(.., u, ..) theta f(.., rep(u), ..)`` for every non-representative
    ``u`` and every context, in batches, so the product never gets tabulated.
    """
    n = alg.size
    if theta.size != n:
        raise ValueError("partition size does not match algebra")
    rep = theta.rep
    movers = np.flatnonzero(rep != np.arange(n))
    if not len(movers):
        return None
    for i, (name, ar) in enumerate(alg.signature):
        if ar == 0:
            continue
        nctx = n ** (ar - 1)
        ctx = np.indices((n,) * (ar - 1)).reshape(ar - 1, -1)
        per = max(1, chunk // max(nctx, 1))
        for pos in range(ar):
            for s in range(0, len(movers), per):
                u = movers[s : s + per]
                us = np.repeat(u, nctx)
                cs = [np.tile(c, len(u)) for c in ctx]
                left = alg.apply_vec(i, cs[:pos] + [us] + cs[pos:])
                right = alg.apply_vec(i, cs[:pos] + [rep[us]] + cs[pos:])
                bad = np.flatnonzero(rep[left] != rep[right])
                if len(bad):
                    k = bad[0]
                    args = [int(c[k]) for c in cs]
                    a = args[:pos] + [int(us[k])] + args[pos:]
                    b = args[:pos] + [int(rep[us[k]])] + args[pos:]
                    return name, f"arguments {tuple(a)} and {tuple(b)} are related but their values are not"
    return None


# ---------------------------------------------------------------- marked algebras and Tarski steps


@dataclass(frozen=True, eq=False)
class MarkedAlgebra:
    """An algebra with a proper nonempty marked subset ``U``.

    ``embedding`` maps the previous stage into this one (``None`` at stage 0).
    """

    alg: FiniteAlgebra
    U: frozenset[int]
    embedding: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "U", _check_subset(self.alg.size, self.U))

    @property
    def size(self) -> int:
        return self.alg.size


def _embedding_violation(src, dst, emb: np.ndarray):
    """First op where ``emb`` fails to be a homomorphism ``src -> dst``."""
    for i, (name, ar) in enumerate(src.signature):
        grid = list(np.indices((src.size,) * ar).reshape(ar, -1)) if ar else []
        lhs = emb[np.atleast_1d(src.apply_vec(i, grid))]
        rhs = np.atleast_1d(dst.apply_vec(i, [emb[g] for g in grid]))
        if not np.array_equal(lhs, rhs):
            return name
    return None


def tarski_step(ma: MarkedAlgebra) -> MarkedAlgebra:
    """Square the algebra, mark ``A x U``, and embed ``A`` diagonally."""
    n = ma.size
    sq = power(ma.alg, 2)
    U2 = frozenset(a * n + u for a in range(n) for u in ma.U)
    emb = np.arange(n) * (n + 1)
    bad = _embedding_violation(ma.alg, sq, emb)
    if bad is not None:
        raise VerificationError(f"diagonal embedding is not a homomorphism (op {bad})")
    if {int(e) for e in emb if int(e) in U2} != {int(emb[u]) for u in ma.U}:
        raise VerificationError("marked subset does not restrict to the previous stage")
    return MarkedAlgebra(sq, U2, tuple(int(e) for e in emb))


def tarski_chain(ma: MarkedAlgebra, steps: int) -> list[MarkedAlgebra]:
    out = [ma]
    for _ in range(steps):
        out.append(tarski_step(out[-1]))
    return out


# ---------------------------------------------------------------- pentagons on products


@dataclass(frozen=True, eq=False)
class PentagonData:
    """Algebras ``A``, ``B`` and a congruence ``gamma`` of ``A x B``.

    Elements of ``A x B`` are indexed ``a * |B| + b``; ``U`` lists the ``a``
    whose fiber ``gamma^a`` is all of ``B``.
    """

    A: FiniteAlgebra
    B: FiniteAlgebra
    gamma: Partition
    U: frozenset[int]

    @property
    def size(self) -> int:
        return self.A.size * self.B.size

    def product(self) -> ProductAlgebra:
        return ProductAlgebra([self.A, self.B])

    def structure(self, name: str | None = None) -> RelStructure:
        nb = self.B.size
        idx = np.arange(self.size)
        rels = (
            Relation.from_partition("alpha", Partition.from_labels(idx // nb)),
            Relation.from_partition("beta", Partition.from_labels(idx % nb)),
            Relation.from_partition("gamma", self.gamma),
        )
        return RelStructure(name or f"P({self.A.name}*{self.B.name})", self.size, rels, (self.A.size, nb))

    def view(self):
        return product_view(self.structure(), self.A.size, self.B.size)

    def fiber(self, a: int) -> Partition:
        nb = self.B.size
        return Partition.from_labels(self.gamma.rep[a * nb : (a + 1) * nb])


def verify_pentagon_data(pd: PentagonData, congruence: bool = True) -> None:
    """Raise ``VerificationError`` unless ``pd`` is a very special pentagon with fibers matching ``U``."""
    st = pd.structure()
    check = verify_pentagon(st)
    if not check:
        raise VerificationError(f"not a pentagon: {check.message}")
    cls = classify_pentagon(product_view(st, pd.A.size, pd.B.size))
    if cls.kind != "very-special":
        raise VerificationError(f"pentagon is {cls.kind}, expected very-special")
    if frozenset(cls.full_fibers) != pd.U:
        raise VerificationError("full fibers do not match the marked subset")
    if congruence:
        bad = congruence_violation_lazy(pd.product(), pd.gamma)
        if bad is not None:
            raise VerificationError(f"gamma is not a congruence of A x B: op {bad[0]}: {bad[1]}")


@dataclass(frozen=True, eq=False)
class ModularityBlocker:
    """``gamma`` on ``F x F`` (index ``p * |F| + q``) for the 2-generated free algebra ``F``."""

    free: FreeAlgebra
    F: FiniteAlgebra
    gamma0: Partition
    gamma: Partition
    eta: Partition
    x: int
    y: int

    def fiber(self, p: int) -> Partition:
        n = self.F.size
        return Partition.from_labels(self.gamma.rep[p * n : (p + 1) * n])


def build_modularity_blocker(
    alg: FiniteAlgebra, cap: int = DEFAULT_CAP, check_day: bool = True
) -> ModularityBlocker:
    """Greedy maximal ``eta`` with ``((y,x),(y,y))`` outside ``gamma0 v Cg({y} x eta)``.

    Pairs are tried once in lexicographic order.  A rejected pair stays
    rejected as ``eta`` grows (the join only gets bigger), so one pass
    already yields a maximal ``eta``.
    """
    if not is_idempotent(alg):
        raise ValueError("modularity blockers are built for idempotent algebras only")
    if check_day:
        from .malcev import decide_day_terms

        if decide_day_terms(alg, cap).holds is not False:
            raise ValueError("the variety is congruence modular (or undecided); no blocker exists")
    free = free_algebra(alg, 2, cap)
    F = free.as_algebra()
    n = F.size
    sq = power(F, 2)
    x, y = free.generator(0), free.generator(1)

    def el(p, q):
        return p * n + q

    target = (el(y, x), el(y, y))
    gamma0 = cg(sq, [(el(x, x), el(x, y))])
    if gamma0.related(*target):
        raise VerificationError("((y,x),(y,y)) lies in gamma0 although the variety is not modular")
    gamma = gamma0
    eta = Partition.bottom(n)
    for a, b in itertools.combinations(range(n), 2):
        if eta.related(a, b):
            continue
        gens = [(i, int(r)) for i, r in enumerate(gamma.rep) if i != r]
        cand = cg(sq, gens + [(el(y, a), el(y, b))])
        if not cand.related(*target):
            gamma = cand
            eta = Partition.from_pairs(n, list(eta.pairs()) + [(a, b)])
    mb = ModularityBlocker(free, F, gamma0, gamma, eta, x, y)
    if not gamma.related(el(x, x), el(x, y)) or gamma.related(*target):
        raise VerificationError("blocker lost its defining pairs")
    if mb.fiber(y) != eta or not mb.fiber(x).is_top():
        raise VerificationError("fibers at the generators are not eta and 1")
    top = Partition.top(n)
    for p in range(n):
        if mb.fiber(p) not in (eta, top):
            raise VerificationError(f"fiber at {p} is neither eta nor 1")
    return mb


def pentagon_from_blocker(mb: ModularityBlocker) -> PentagonData:
    """``A = F``, ``B = F / gamma^y``, and ``gamma`` pushed through ``F^2 -> A x B``."""
    F = mb.F
    n = F.size
    B, cmap = quotient(F, mb.fiber(mb.y))
    cmap = np.asarray(cmap)
    nb = B.size
    src = np.arange(n * n)
    image = (src // n) * nb + cmap[src % n]
    labels = np.full(n * nb, -1, dtype=np.int64)
    for s, t in zip(src, image):
        lab = int(mb.gamma.rep[s])
        if labels[t] == -1:
            labels[t] = lab
        elif mb.gamma.rep[labels[t]] != lab:
            raise VerificationError("gamma is not saturated by the quotient map")
    gamma = Partition.from_labels(labels)
    U = frozenset(a for a in range(n) if Partition.from_labels(gamma.rep[a * nb : (a + 1) * nb]).is_top())
    pd = PentagonData(F, B, gamma, U)
    verify_pentagon_data(pd)
    return pd


def pentagon_tarski_step(pd: PentagonData, verify: bool = True) -> PentagonData:
    """``A' = A^2``, ``B' = B^2``, ``U' = A x U`` and ``gamma'`` from the recurrence."""
    na, nb = pd.A.size, pd.B.size
    A2, B2 = power(pd.A, 2), power(pd.B, 2)
    a1, a2, b1, b2 = np.indices((na, na, nb, nb)).reshape(4, -1)
    g = pd.gamma.rep
    labels = np.stack([a1, a2, g[a2 * nb + b1], g[a2 * nb + b2]], axis=1)
    gamma2 = Partition.from_labels(labels)
    U2 = frozenset(a * na + u for a in range(na) for u in pd.U)
    out = PentagonData(A2, B2, gamma2, U2)
    if verify:
        verify_pentagon_data(out)
        a, b = np.indices((na, nb)).reshape(2, -1)
        diag = (a * (na + 1)) * (nb * nb) + b * (nb + 1)
        if Partition.from_labels(gamma2.rep[diag]) != pd.gamma:
            raise VerificationError("gamma' does not restrict to gamma on the diagonal copy")
        for x in range(A2.size):
            if out.fiber(x).is_top() != (x % na in pd.U):
                raise VerificationError(f"fiber at {x} does not follow the marked subset")
    return out


# ---------------------------------------------------------------- finite structures


def finite_P(m: int, U: Iterable[int]) -> RelStructure:
    """Universe ``m x m``; ``gamma`` relates ``(a,b),(a,c)`` iff ``a in U`` or ``b = c``."""
    if m < 2:
        raise ValueError("m must be at least 2")
    U = _check_subset(m, U)
    a, b = np.indices((m, m)).reshape(2, -1)
    inU = np.isin(a, list(U))
    gamma = Partition.from_labels(np.stack([a, np.where(inU, -1, b)], axis=1))
    st = RelStructure(
        f"P[m={m},U={_fmt_set(U)}]",
        m * m,
        (
            Relation.from_partition("alpha", Partition.from_labels(a)),
            Relation.from_partition("beta", Partition.from_labels(b)),
            Relation.from_partition("gamma", gamma),
        ),
        (m, m),
    )
    cls = classify_pentagon(product_view(st, m, m))
    if cls.kind != "very-special" or frozenset(cls.full_fibers) != U:
        raise VerificationError(f"{st.name} is not the expected very special pentagon")
    return st


def _cross_tuples(sets: Sequence[frozenset[int]], m: int) -> np.ndarray:
    k = len(sets)
    grid = np.indices((m,) * k).reshape(k, -1).T
    hit = np.zeros(len(grid), dtype=bool)
    for i, Ui in enumerate(sets):
        hit |= np.isin(grid[:, i], list(Ui))
    return grid[hit]


def finite_B(m: int, U: Iterable[int], kmax: int = 3) -> RelStructure:
    """Relations ``R1..R{kmax}`` on ``[0,m)``; ``Rk`` holds when some entry is in ``U``."""
    if m < 2:
        raise ValueError("m must be at least 2")
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    U = _check_subset(m, U)
    rels = tuple(Relation(f"R{k}", k, m, _cross_tuples([U] * k, m)) for k in range(1, kmax + 1))
    return RelStructure(f"B[m={m},U={_fmt_set(U)},k<={kmax}]", m, rels)


def finite_C(m: int, *Us: Iterable[int]) -> RelStructure:
    """An ``n``-cross on ``[0,m)^n`` (mixed radix, first coordinate most significant).

    Relations ``alpha1..alphan`` are the projection kernels and the unary
    ``R`` holds at tuples with some ``a_i in U_i``.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    n = len(Us)
    if n < 1:
        raise ValueError("need at least one marked subset")
    sets = [_check_subset(m, Ui, f"U{i + 1}") for i, Ui in enumerate(Us)]
    grid = np.indices((m,) * n).reshape(n, -1)
    size = m**n
    codes = np.zeros(size, dtype=np.int64)
    for row in grid:
        codes = codes * m + row
    hit = np.zeros(size, dtype=bool)
    for i, Ui in enumerate(sets):
        hit |= np.isin(grid[i], list(Ui))
    rels = [Relation.from_partition(f"alpha{i + 1}", Partition.from_labels(grid[i])) for i in range(n)]
    rels.append(Relation("R", 1, size, codes[hit].reshape(-1, 1)))
    name = "C[m={},U=({})]".format(m, ",".join(_fmt_set(s) for s in sets))
    return RelStructure(name, size, tuple(rels), (m,) * n)


# ---------------------------------------------------------------- componentwise operations


def componentwise(name: str, f1: OpTable, f2: OpTable) -> OpTable:
    """The operation on ``m x m`` acting as ``f1`` on first and ``f2`` on second coordinates."""
    if f1.arity != f2.arity or f1.size != f2.size:
        raise ValueError("components must share arity and universe")
    m, k = f1.size, f1.arity
    if k == 0:
        return OpTable(name, 0, m * m, [int(f1.table[0]) * m + int(f2.table[0])])
    grid = np.indices((m * m,) * k).reshape(k, -1)
    c1 = np.zeros(grid.shape[1], dtype=np.int64)
    c2 = np.zeros(grid.shape[1], dtype=np.int64)
    for g in grid:
        c1 = c1 * m + g // m
        c2 = c2 * m + g % m
    return OpTable(name, k, m * m, f1.table[c1] * m + f2.table[c2])


def components(op: OpTable, m: int) -> tuple[OpTable, OpTable]:
    """Split an operation on ``m x m`` into its components; ``NotCompatible`` if it is not componentwise."""
    if op.size != m * m:
        raise ValueError("operation does not live on m x m")
    k = op.arity
    if k == 0:
        v = int(op.table[0])
        return OpTable(op.name + "^1", 0, m, [v // m]), OpTable(op.name + "^2", 0, m, [v % m])
    # axes: (a_1, b_1, a_2, b_2, ...)
    cube = op.table.reshape((m,) * (2 * k))
    first, second = cube // m, cube % m
    a_axes = tuple(range(0, 2 * k, 2))
    b_axes = tuple(range(1, 2 * k, 2))
    f1 = np.moveaxis(first, a_axes, range(k))
    f2 = np.moveaxis(second, b_axes, range(k))
    f1r = f1.reshape((m,) * k + (-1,))
    f2r = f2.reshape((m,) * k + (-1,))
    if not (f1r == f1r[..., :1]).all():
        raise NotCompatible(op.name, "first component depends on second coordinates")
    if not (f2r == f2r[..., :1]).all():
        raise NotCompatible(op.name, "second component depends on first coordinates")
    return (
        OpTable(op.name + "^1", k, m, f1r[..., 0].ravel()),
        OpTable(op.name + "^2", k, m, f2r[..., 0].ravel()),
    )


def dependent_coordinates(op: OpTable) -> set[int]:
    """Coordinates the operation actually depends on."""
    if op.arity == 0:
        return set()
    cube = op.table.reshape((op.size,) * op.arity)
    out = set()
    for i in range(op.arity):
        moved = np.moveaxis(cube, i, 0)
        if not (moved == moved[:1]).all():
            out.add(i)
    return out


def _marked_subset(pentagon: RelStructure) -> tuple[int, frozenset[int]]:
    if pentagon.factors is None or len(pentagon.factors) != 2:
        raise ValueError("pentagon lacks its product bookkeeping")
    na, nb = pentagon.factors
    if na != nb:
        raise ValueError("expected a pentagon on m x m")
    cls = classify_pentagon(product_view(pentagon, na, nb))
    if cls.kind != "very-special":
        raise ValueError("expected a very special pentagon")
    return na, frozenset(cls.full_fibers)


def blocker_polymorphism_criterion(pentagon: RelStructure, op: OpTable) -> bool:
    """Component test for preserving a very special pentagon on ``m x m``.

    True iff whenever ``f1(a) not in U``, ``f2`` ignores every coordinate
    ``i`` with ``a_i in U``.
    """
    m, U = _marked_subset(pentagon)
    f1, f2 = components(op, m)
    k = op.arity
    if k == 0:
        return True
    deps = dependent_coordinates(f2)
    if not deps:
        return True
    grid = np.indices((m,) * k).reshape(k, -1)
    outside = ~np.isin(f1.table, list(U))
    for i in deps:
        if np.any(outside & np.isin(grid[i], list(U))):
            return False
    return True


def absorbing_coordinates(op: OpTable, U: Iterable[int]) -> set[int]:
    """Coordinates ``i`` with ``a_i in U => f(a) in U``."""
    U = list(U)
    if op.arity == 0:
        return set()
    grid = np.indices((op.size,) * op.arity).reshape(op.arity, -1)
    in_u = np.isin(op.table, U)
    return {i for i in range(op.arity) if np.all(in_u[np.isin(grid[i], U)])}


# ---------------------------------------------------------------- witness families


@dataclass(frozen=True, eq=False)
class WitnessFamily:
    """Verified interpretations of the ``f_i``, ``p_ij``, ``q_ij`` (and ``r_ij``) symbols."""

    kind: str
    m: int
    U: frozenset[int]
    indices: tuple[int, ...]
    constants: dict
    algebra: FiniteAlgebra = field(repr=False)
    identities: tuple[tuple[Term, Term], ...] = field(repr=False)
    structure: RelStructure = field(repr=False)

    def op(self, name: str) -> OpTable:
        return self.algebra.op(name)


def _fname(i):
    return f"f_{i}"


def _family_identities(I: Sequence[int], letters: str) -> list[tuple[Term, Term]]:
    X, Y = Var(0), Var(1)
    out = [(Apply(_fname(i), (X, X)), X) for i in I]
    for i, j in itertools.permutations(I, 2):
        fi = Apply(_fname(i), (X, Y))
        fj = Apply(_fname(j), (X, Y))
        syms = [f"{c}_{i}_{j}" for c in letters]
        out.append((X, Apply(syms[0], (X, fj, Y))))
        for s, t in zip(syms, syms[1:]):
            out.append((Apply(s, (X, fi, Y)), Apply(t, (X, fj, Y))))
        out.append((Apply(syms[-1], (X, fi, Y)), Y))
    return out


def _verify_identities(alg: FiniteAlgebra, identities) -> None:
    for lhs, rhs in identities:
        if not satisfies_identity(alg, lhs, rhs):
            raise VerificationError(f"identity {lhs} = {rhs} fails")


def _table(m: int, arity: int, fn) -> np.ndarray:
    grid = np.indices((m,) * arity).reshape(arity, -1).T
    return np.array([fn(*row) for row in grid], dtype=np.int64)


def pentagon_witnesses(m: int, U: Iterable[int], I: Iterable[int]) -> WitnessFamily:
    """Componentwise ``f_i, p_ij, q_ij, r_ij`` on ``m x m`` preserving ``finite_P(m, U)``.

    Constants: ``c1 = min U``, the ``c1_i`` are the next ``|I|`` elements of
    ``U``; ``c2 = 0`` and ``c2_i`` run through ``0..|I|-1``.
    """
    U = _check_subset(m, U)
    I = tuple(sorted(set(int(i) for i in I)))
    if not I:
        raise ValueError("need at least one index")
    if len(U) < len(I) + 1:
        raise ValueError(f"|U| must be at least |I|+1 = {len(I) + 1}")
    if m < len(I):
        raise ValueError(f"m must be at least |I| = {len(I)}")
    us = sorted(U)
    c1, c2 = us[0], 0
    c1i = dict(zip(I, us[1 : len(I) + 1]))
    c2i = dict(zip(I, range(len(I))))
    f1 = {i: _table(m, 2, lambda x, y, c=c1i[i]: x if x == y else c) for i in I}
    f2 = {i: _table(m, 2, lambda x, y, c=c2i[i]: x if x == y else c) for i in I}

    ops = []
    for i in I:
        ops.append(componentwise(_fname(i), OpTable("", 2, m, f1[i]), OpTable("", 2, m, f2[i])))
    for i, j in itertools.permutations(I, 2):
        F1i, F1j, F2i, F2j = f1[i], f1[j], f2[i], f2[j]

        def at(t, x, z):
            return int(t[x * m + z])

        comps = {
            "p": (
                lambda x, y, z: x if y == at(F1j, x, z) else c1,
                lambda x, y, z: x,
            ),
            "q": (
                lambda x, y, z: x if x == y == z else c1,
                lambda x, y, z: x if y == at(F2j, x, z) else (z if y == at(F2i, x, z) else c2),
            ),
            "r": (
                lambda x, y, z: z if y == at(F1i, x, z) else c1,
                lambda x, y, z: z,
            ),
        }
        for letter, (g1, g2) in comps.items():
            ops.append(
                componentwise(
                    f"{letter}_{i}_{j}", OpTable("", 3, m, _table(m, 3, g1)), OpTable("", 3, m, _table(m, 3, g2))
                )
            )
    alg = FiniteAlgebra(f"pentagon-family[m={m},U={_fmt_set(U)},I={_fmt_set(I)}]", m * m, tuple(ops))
    identities = tuple(_family_identities(I, "pqr"))
    _verify_identities(alg, identities)
    st = finite_P(m, U)
    for op in alg.ops:
        if not blocker_polymorphism_criterion(st, op):
            raise VerificationError(f"{op.name} fails the component criterion")
        if not is_polymorphism(st, op):
            raise VerificationError(f"{op.name} does not preserve {st.name}")
    consts = {"c1": c1, "c2": c2, "c1_i": c1i, "c2_i": c2i}
    return WitnessFamily("pentagon", m, U, I, consts, alg, identities, st)


def blocker_witnesses(m: int, U: Iterable[int], I: Iterable[int], kmax: int = 3) -> WitnessFamily:
    """``f_i(x,y) = i`` off the diagonal, ``p_ij``, ``q_ij`` on ``[0,m)`` preserving ``finite_B``.

    The indices double as values of the ``f_i``, so ``I`` must sit inside
    ``U``; ``c`` is the least element of ``U`` outside ``I``.
    """
    U = _check_subset(m, U)
    I = tuple(sorted(set(int(i) for i in I)))
    if not I:
        raise ValueError("need at least one index")
    if len(U) < len(I) + 1:
        raise ValueError(f"|U| must be at least |I|+1 = {len(I) + 1}")
    if not set(I) <= U:
        raise ValueError("the indices are used as values of f_i and must lie in U")
    c = min(U - set(I))
    f = {i: _table(m, 2, lambda x, y, i=i: x if x == y else i) for i in I}
    ops = [OpTable(_fname(i), 2, m, f[i]) for i in I]
    for i, j in itertools.permutations(I, 2):
        Fi, Fj = f[i], f[j]
        p = _table(m, 3, lambda x, y, z: x if y == Fj[x * m + z] else c)
        q = _table(m, 3, lambda x, y, z: z if y == Fi[x * m + z] else c)
        ops += [OpTable(f"p_{i}_{j}", 3, m, p), OpTable(f"q_{i}_{j}", 3, m, q)]
    alg = FiniteAlgebra(f"blocker-family[m={m},U={_fmt_set(U)},I={_fmt_set(I)}]", m, tuple(ops))
    identities = tuple(_family_identities(I, "pq"))
    _verify_identities(alg, identities)
    st = finite_B(m, U, kmax)
    for op in alg.ops:
        absorbing = absorbing_coordinates(op, U)
        wanted = {"f": set(range(2)), "p": {0}, "q": {2}}[op.name[0]]
        if not wanted <= absorbing:
            raise VerificationError(f"{op.name} lacks an absorbing coordinate")
        if not is_polymorphism(st, op):
            raise VerificationError(f"{op.name} does not preserve {st.name}")
    return WitnessFamily("blocker", m, U, I, {"c": c}, alg, identities, st)


# ---------------------------------------------------------------- small models


def _idempotent_ops(s: int, arity: int) -> np.ndarray:
    """All idempotent ``arity``-ary tables on ``[0,s)`` as rows."""
    grid = np.indices((s,) * arity).reshape(arity, -1)
    diag = np.all(grid == grid[0], axis=0)
    free_pos = np.flatnonzero(~diag)
    choices = np.indices((s,) * len(free_pos)).reshape(len(free_pos), -1).T
    out = np.empty((len(choices), s**arity), dtype=np.int64)
    out[:, diag] = grid[0, diag]
    out[:, free_pos] = choices
    return out


def no_small_model(family: str, k: int, s: int = 2) -> bool:
    """True iff the family's identities with ``k`` indices have no model on ``s`` elements.

    Only ``s = 2`` and ``k <= 3`` are searched.  Each ordered pair ``(i, j)``
    constrains its own ``p, q (, r)``, so a model exists iff some choice of
    ``f``'s makes every pair solvable; solvability of a pair is a walk
    ``proj_x -> ... -> proj_y`` through binary functions where a ternary
    ``t`` moves ``t(x, f_j(x,y), y)`` to ``t(x, f_i(x,y), y)``.
    """
    if family not in ("pentagon", "blocker"):
        raise ValueError("family must be 'pentagon' or 'blocker'")
    if s != 2 or not 1 <= k <= 3:
        raise ValueError("search is bounded to s = 2 and 1 <= k <= 3")
    steps = 3 if family == "pentagon" else 2
    binaries = _idempotent_ops(s, 2)
    ternaries = _idempotent_ops(s, 3)
    x, y = np.indices((s, s)).reshape(2, -1)
    proj_x, proj_y = tuple(x), tuple(y)

    def through(t_rows, f):
        # t(x, f(x,y), y) for every ternary row at once
        return t_rows[:, (x * s + f[x * s + y]) * s + y]

    solvable: dict[tuple[int, int], bool] = {}

    def pair_ok(a: int, b: int) -> bool:
        key = (a, b)
        if key not in solvable:
            gj = through(ternaries, binaries[b])
            gi = through(ternaries, binaries[a])
            moves: dict[tuple, set[tuple]] = {}
            for src, dst in zip(map(tuple, gj), map(tuple, gi)):
                moves.setdefault(src, set()).add(dst)
            frontier = {proj_x}
            for _ in range(steps):
                frontier = set().union(*(moves.get(h, set()) for h in frontier))
            solvable[key] = proj_y in frontier
        return solvable[key]

    for fs in itertools.product(range(len(binaries)), repeat=k):
        if all(pair_ok(fs[i], fs[j]) for i, j in itertools.permutations(range(k), 2)):
            return False
    return True


__all__ = [
    "MarkedAlgebra",
    "ModularityBlocker",
    "PentagonData",
    "WitnessFamily",
    "absorbing_coordinates",
    "blocker_polymorphism_criterion",
    "blocker_witnesses",
    "build_modularity_blocker",
    "components",
    "componentwise",
    "congruence_violation_lazy",
    "dependent_coordinates",
    "finite_B",
    "finite_C",
    "finite_P",
    "no_small_model",
    "pentagon_from_blocker",
    "pentagon_tarski_step",
    "pentagon_witnesses",
    "tarski_chain",
    "tarski_step",
    "verify_pentagon_data",
]
