"""Deciders for Mal'cev conditions of ``V(A)``.

Each decider has an authority (usually a strong coloring) and an
independent cross-check.  When both complete and disagree, a
``VerificationError`` is raised; a cap overrun makes the outcome
inconclusive instead of guessing.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .algebra import (
    DEFAULT_CAP,
    FiniteAlgebra,
    Subpower,
    Term,
    Var,
    generate_subuniverse,
    is_idempotent,
    satisfies_identity,
    substitute,
)
from .closure import closure
from .errors import CapExceeded, VerificationError
from .free import FreeAlgebra, free_algebra, strong_coloring
from .partitions import Partition, find_compatible_order, join, meet
from .relstruct import (
    RelStructure,
    build_bn,
    build_order2,
    build_p0,
    build_s,
    build_wn,
    compatible,
)


@dataclass
class CrossCheck:
    method: str
    outcome: bool | None  # None: inconclusive or one-directional miss
    derived: bool = False
    note: str = ""

    def to_json(self):
        out = {"method": self.method, "outcome": self.outcome, "derived": self.derived}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Decision:
    """Outcome of one decider.  ``holds`` is ``None`` when inconclusive."""

    condition: str
    holds: bool | None
    authority: str
    witness: Any = None
    cross_checks: list[CrossCheck] = field(default_factory=list)
    inconclusive: str | None = None
    colorings: dict = field(default_factory=dict)

    def agree(self) -> None:
        if self.holds is None:
            return
        for cc in self.cross_checks:
            if cc.outcome is not None and cc.outcome != self.holds:
                raise VerificationError(
                    f"{self.condition}: authority ({self.authority}) says {self.holds}, "
                    f"cross-check {cc.method} says {cc.outcome}"
                )


def _coloring_entry(c, cap_hit: bool = False, limit: int = 64):
    if cap_hit:
        return {"exists": None, "strong": True}
    entry = {"exists": c is not None, "strong": True}
    if c is not None and len(c.map) <= limit:
        entry["map"] = list(c.map)
    return entry


def _try_coloring(alg, B, cap):
    try:
        return strong_coloring(alg, B, cap), False
    except CapExceeded:
        return None, True


# ---------------------------------------------------------------- chains


def _alternating_chain(start: int, goal: int, rels: list[Partition], max_steps: int | None):
    """Shortest ``u_0 = start, ..., u_s = goal`` with ``(u_i, u_{i+1})`` in
    ``rels[i % len(rels)]``, at most ``max_steps`` steps; ``None`` if absent."""
    n = rels[0].size
    if start == goal:
        return [start]
    layer = np.zeros(n, dtype=bool)
    layer[start] = True
    preds = []
    stable = 0
    while max_steps is None or len(preds) < max_steps:
        r = rels[len(preds) % len(rels)]
        members = np.nonzero(layer)[0]
        owner = np.full(n, n, dtype=np.int64)
        np.minimum.at(owner, r.rep[members], members)
        pred = owner[r.rep]
        nxt = pred < n
        preds.append(pred)
        if nxt[goal]:
            chain = [goal]
            for pr in reversed(preds):
                chain.append(int(pr[chain[-1]]))
            return chain[::-1]
        stable = stable + 1 if np.array_equal(nxt, layer) else 0
        if stable >= len(rels):
            return None
        layer = nxt
    return None


def _chain_terms(free: FreeAlgebra, chain: list[int]) -> list[Term]:
    return [free.term(e) for e in chain]


def _verify_pair_identities(alg, terms, patterns: Callable[[int], list[list[Term]]]) -> bool:
    """``patterns(i)`` gives substitutions under which ``terms[i]`` and
    ``terms[i+1]`` must agree."""
    for i in range(len(terms) - 1):
        for sub in patterns(i):
            if not satisfies_identity(alg, substitute(terms[i], sub), substitute(terms[i + 1], sub)):
                return False
    return True


X, Y, Z, W = Var(0), Var(1), Var(2), Var(3)


def _day_patterns(i: int):
    if i % 2 == 0:
        return [[X, Y, Y, Z]]
    return [[X, X, Y, Y], [X, Y, Y, X]]


def _kk_patterns(i: int):
    if i % 2 == 0:
        return [[X, Y, Y, Y]]
    return [[X, X, Y, Y], [X, Y, Y, X]]


def _schmidt_patterns(n: int, i: int):
    """Even ``i``: ``x_{2k-1}, x_{2k}`` merged (0|12|34...); odd ``i``: 01|23|..."""
    start = 1 if i % 2 == 0 else 0
    sub = [Var(j) for j in range(n + 1)]
    for j in range(start, n, 2):
        sub[j + 1] = Var(j)
    return [sub]


def _verify_endpoints(alg, terms, first: Term, last: Term) -> bool:
    return satisfies_identity(alg, terms[0], first) and satisfies_identity(alg, terms[-1], last)


# ---------------------------------------------------------------- Day terms


@dataclass
class DayContext:
    free: FreeAlgebra
    alpha: Partition
    beta: Partition
    gamma: Partition


def day_context(alg: FiniteAlgebra, cap: int = DEFAULT_CAP) -> DayContext:
    f4 = free_algebra(alg, 4, cap)
    blocks = lambda bs: Partition.from_blocks(4, bs)  # noqa: E731
    return DayContext(
        f4,
        f4.kernel(blocks([[0, 3], [1, 2]])),
        f4.kernel(blocks([[0, 1], [2, 3]])),
        f4.kernel(blocks([[1, 2]])),
    )


def decide_day_terms(alg: FiniteAlgebra, cap: int = DEFAULT_CAP) -> Decision:
    """Whether ``V(alg)`` has Day terms (is congruence modular)."""
    col, hit = _try_coloring(alg, build_p0(), cap)
    d = Decision("day", None if hit else col is None, "coloring")
    d.colorings["p0"] = _coloring_entry(col, hit)
    if hit:
        d.inconclusive = "cap exceeded building the P0 free structure"
        return d
    try:
        ctx = day_context(alg, cap)
    except CapExceeded:
        d.cross_checks.append(CrossCheck("congruence-membership", None, False, "cap exceeded"))
        return d
    x0, x3 = ctx.free.generator(0), ctx.free.generator(3)
    ab = meet(ctx.alpha, ctx.beta)
    member = join(ctx.gamma, ab).related(x0, x3)
    d.cross_checks.append(CrossCheck("congruence-membership", bool(member)))
    d.agree()
    if member:
        chain = _alternating_chain(x0, x3, [ctx.gamma, ab], None)
        terms = _chain_terms(ctx.free, chain)
        ok = _verify_endpoints(alg, terms, X, W) and _verify_pair_identities(alg, terms, _day_patterns)
        if not ok:
            raise VerificationError("extracted Day chain fails its identities")
        d.witness = {"kind": "day-chain", "terms": [str(t) for t in terms]}
    return d


# ---------------------------------------------------------------- permutability


def decide_n_permutable(alg: FiniteAlgebra, n: int, cap: int = DEFAULT_CAP) -> Decision:
    """Whether ``V(alg)`` is congruence ``n``-permutable."""
    if n < 2:
        raise ValueError("n must be at least 2")
    col, hit = _try_coloring(alg, build_wn(n), cap)
    d = Decision(f"permutable[n={n}]", None if hit else col is None, "coloring")
    d.colorings[f"w{n}"] = _coloring_entry(col, hit)
    if hit:
        d.inconclusive = f"cap exceeded building the W{n} free structure"
        return d
    try:
        fn = free_algebra(alg, n + 1, cap)
    except CapExceeded:
        d.cross_checks.append(CrossCheck("congruence-membership", None, True, "cap exceeded"))
        return d
    # generators x_0..x_n; alpha identifies 01|23|..., beta identifies 0|12|34|...
    alpha = fn.kernel(Partition.from_blocks(n + 1, [[i, i + 1] for i in range(0, n, 2)]))
    beta = fn.kernel(Partition.from_blocks(n + 1, [[i, i + 1] for i in range(1, n, 2)]))
    x0, xn = fn.generator(0), fn.generator(n)
    chain = _alternating_chain(x0, xn, [beta, alpha], n)
    d.cross_checks.append(CrossCheck("congruence-membership", chain is not None, True))
    d.agree()
    if chain is not None:
        chain = chain + [chain[-1]] * (n + 1 - len(chain))
        terms = _chain_terms(fn, chain)
        ok = _verify_endpoints(alg, terms, Var(0), Var(n)) and _verify_pair_identities(
            alg, terms, lambda i: _schmidt_patterns(n, i)
        )
        if not ok:
            raise VerificationError("extracted Schmidt chain fails its identities")
        d.witness = {"kind": "schmidt-chain", "terms": [str(t) for t in terms]}
    return d


def decide_n_permutable_any(alg: FiniteAlgebra, cap: int = DEFAULT_CAP) -> Decision:
    """Whether ``V(alg)`` is ``n``-permutable for some ``n``."""
    col, hit = _try_coloring(alg, build_order2(), cap)
    d = Decision("permutable-any", None if hit else col is None, "coloring")
    d.colorings["order2"] = _coloring_entry(col, hit)
    if hit:
        d.inconclusive = "cap exceeded building the order2 free structure"
    order = find_compatible_order(alg)
    if order is not None:
        d.cross_checks.append(
            CrossCheck("compatible-order", False, False, f"order {sorted(order.pairs)}")
        )
        d.witness = {"kind": "compatible-order", "pairs": sorted(order.pairs)}
    else:
        d.cross_checks.append(CrossCheck("compatible-order", None, False, "no order on A itself"))
    d.agree()
    return d


# ---------------------------------------------------------------- congruence identity


def decide_congruence_identity(alg: FiniteAlgebra, cap: int = DEFAULT_CAP) -> Decision:
    """Whether ``V(alg)`` has Kearnes-Kiss terms."""
    col, hit = _try_coloring(alg, build_s(), cap)
    d = Decision("kearnes-kiss", None if hit else col is None, "coloring")
    d.colorings["s"] = _coloring_entry(col, hit)
    if hit:
        d.inconclusive = "cap exceeded building the S free structure"
        return d
    try:
        ctx = day_context(alg, cap)
    except CapExceeded:
        d.cross_checks.append(CrossCheck("congruence-membership", None, True, "cap exceeded"))
        return d
    delta = ctx.free.kernel(Partition.from_blocks(4, [[1, 2, 3]]))
    ab = meet(ctx.alpha, ctx.beta)
    x0, x3 = ctx.free.generator(0), ctx.free.generator(3)
    member = join(delta, ab).related(x0, x3)
    d.cross_checks.append(CrossCheck("congruence-membership", bool(member), True))
    d.agree()
    if member:
        chain = _alternating_chain(x0, x3, [delta, ab], None)
        terms = _chain_terms(ctx.free, chain)
        ok = _verify_endpoints(alg, terms, X, W) and _verify_pair_identities(alg, terms, _kk_patterns)
        if not ok:
            raise VerificationError("extracted Kearnes-Kiss chain fails its identities")
        d.witness = {"kind": "kearnes-kiss-chain", "terms": [str(t) for t in terms]}
    return d


# ---------------------------------------------------------------- cube terms


def cube_tuples(n: int) -> list[tuple[int, ...]]:
    """All 0/1 patterns of length ``n`` with at least one 1 (1 standing for y)."""
    return [t for t in itertools.product((0, 1), repeat=n) if any(t)]


def find_cube_term(alg: FiniteAlgebra, n: int, cap: int = DEFAULT_CAP):
    """An ``n``-cube term over ``x0..x{2^n-2}``, or ``None``; variable ``s``
    corresponds to ``cube_tuples(n)[s]``."""
    f2 = free_algebra(alg, 2, cap)
    rows = f2.elements
    gx, gy = rows[f2.generator(0)], rows[f2.generator(1)]
    pats = cube_tuples(n)
    seeds = np.array([np.concatenate([gy if b else gx for b in p]) for p in pats], dtype=np.int64)
    out, pop, pargs = closure(alg.size, alg.kernel_ops(), seeds, cap)
    sub = Subpower(alg, seeds.shape[1], out, pop, pargs)
    target = np.concatenate([gx] * n)
    idx = sub.index(target)
    if idx is None:
        return None
    return sub.term(idx)


def verify_cube_term(alg: FiniteAlgebra, term: Term, n: int) -> bool:
    pats = cube_tuples(n)
    for j in range(n):
        sub = [Y if p[j] else X for p in pats]
        if not satisfies_identity(alg, substitute(term, sub), X):
            return False
    return True


def decide_n_cube_term(alg: FiniteAlgebra, n: int, cap: int = DEFAULT_CAP) -> Decision:
    if n < 2:
        raise ValueError("n must be at least 2")
    d = Decision(f"cube[n={n}]", None, "subpower")
    try:
        term = find_cube_term(alg, n, cap)
    except CapExceeded:
        d.inconclusive = f"cap exceeded generating the {n}-cube subpower"
        term = None
    else:
        d.holds = term is not None
        if term is not None:
            if not verify_cube_term(alg, term, n):
                raise VerificationError("extracted cube term fails its identities")
            d.witness = {"kind": "cube-term", "arity": 2**n - 1, "term": str(term)}
    col, hit = _try_coloring(alg, build_bn(n), cap)
    d.colorings[f"b{n}"] = _coloring_entry(col, hit)
    d.cross_checks.append(CrossCheck("coloring", None if hit else col is None))
    d.agree()
    return d


# ---------------------------------------------------------------- blockers


def _absorbing_coordinate(table: np.ndarray, arity: int, S: list[int], U: set[int], size: int):
    """Least coordinate ``i`` with ``a_i in U => f(a) in U`` over ``S^arity``, or ``None``."""
    s = np.array(S, dtype=np.int64)
    grid = np.indices((len(S),) * arity).reshape(arity, -1)
    args = s[grid]
    code = np.zeros(args.shape[1], dtype=np.int64)
    for a in args:
        code = code * size + a
    out_in_u = np.isin(table[code], list(U))
    for i in range(arity):
        hit = np.isin(args[i], list(U))
        if np.all(out_in_u[hit]):
            return i
    return None


def subuniverses(alg: FiniteAlgebra, limit: int = 16) -> list[tuple[int, ...]]:
    """All nonempty subuniverses, largest first then lexicographic."""
    if alg.size > limit:
        raise ValueError(f"subuniverse enumeration limited to universes of size <= {limit}")
    found = set()
    for r in range(1, alg.size + 1):
        for seed in itertools.combinations(range(alg.size), r):
            found.add(generate_subuniverse(alg, seed))
    return sorted(found, key=lambda s: (-len(s), s))


def find_cube_blocker(alg: FiniteAlgebra):
    """First ``(S, U)`` where ``U`` is a cube term blocker of the subalgebra ``S``.

    ``U`` blocks ``S`` iff every basic operation restricted to ``S`` has a
    coordinate ``i`` with ``a_i in U => f(a) in U``.  If so, any tuple of
    argument rows from ``S^k minus (S-U)^k`` has the absorbing row hitting
    ``U`` somewhere, so the image does too.  Conversely, if ``f`` of arity
    ``m`` has no absorbing coordinate, pick for each ``j`` an argument tuple
    ``a^(j)`` with ``a^(j)_j in U`` and ``f(a^(j))`` outside ``U``; with
    ``k = m`` the rows ``t_l = (a^(1)_l, ..., a^(m)_l)`` each meet ``U`` (at
    position ``l``) while ``f(t_1, ..., t_m)`` avoids ``U`` everywhere.
    """
    if not is_idempotent(alg):
        raise ValueError("cube term blockers are only decided for idempotent algebras")
    for S in subuniverses(alg):
        for r in range(1, len(S)):
            for U in itertools.combinations(S, r):
                if is_cube_blocker(alg, U, S):
                    return tuple(S), tuple(U)
    return None


def is_cube_blocker(alg: FiniteAlgebra, U, S=None) -> bool:
    """Whether ``U`` is a cube term blocker of the subalgebra on ``S`` (default: all of ``A``)."""
    S = list(range(alg.size)) if S is None else sorted(S)
    Uset = set(int(u) for u in U)
    if not Uset or not Uset < set(S):
        return False
    return all(
        _absorbing_coordinate(op.table, op.arity, S, Uset, alg.size) is not None
        for op in alg.ops
        if op.arity
    )


def check_cross_compatibility(alg_on_universe: FiniteAlgebra, cross: RelStructure) -> bool:
    """Whether the algebra (on the cross's universe) preserves every relation of the cross."""
    if cross.factors is None:
        raise ValueError("cross structure lacks product bookkeeping")
    return bool(compatible(cross, alg_on_universe))


# ---------------------------------------------------------------- analyze


@dataclass
class Limits:
    max_perm: int = 4
    max_cube: int = 3
    cap: int = DEFAULT_CAP


@dataclass
class Report:
    algebra: str
    size: int
    idempotent: bool
    decisions: dict[str, Decision]
    limits: Limits
    blocker: tuple | None
    blocker_checked: bool
    timings_ms: dict[str, float]

    def to_json(self, timings: bool = True) -> dict:
        ds = self.decisions
        day = ds["day"]
        day_j = {"has_day_terms": day.holds, "authority": day.authority}
        if day.witness:
            day_j["chain_length"] = len(day.witness["terms"]) - 1
        perm_ns = [ds[f"permutable[n={n}]"] for n in range(2, self.limits.max_perm + 1)]
        first_perm = _first_true(perm_ns, 2)
        cube_ns = [ds[f"cube[n={n}]"] for n in range(2, self.limits.max_cube + 1)]
        first_cube = _first_true(cube_ns, 2)
        pa = ds["permutable-any"]
        kk = ds["kearnes-kiss"]
        colorings = {}
        for dec in ds.values():
            colorings.update(dec.colorings)
        blocker = None
        if self.blocker is not None:
            blocker = {"subuniverse": list(self.blocker[0]), "subset": list(self.blocker[1])}
        inconclusive = [name for name, dec in ds.items() if dec.holds is None]
        return {
            "format": "malcev-lab v1",
            "algebra": self.algebra,
            "size": self.size,
            "idempotent": self.idempotent,
            "day": day_j,
            "permutable": {"first_n": first_perm, "checked_up_to": self.limits.max_perm},
            "permutable_any": {"is_permutable_for_some_n": pa.holds, "authority": pa.authority},
            "congruence_identity": {"has_kearnes_kiss": kk.holds, "authority": kk.authority},
            "cube": {
                "first_n": first_cube,
                "checked_up_to": self.limits.max_cube,
                "blocker": blocker,
                "blocker_checked": self.blocker_checked,
            },
            "colorings": dict(sorted(colorings.items())),
            "decisions": {name: decision_json(dec) for name, dec in ds.items()},
            "inconclusive": inconclusive,
            "timings_ms": dict(self.timings_ms) if timings else {},
        }


def _first_true(decisions, start):
    for i, dec in enumerate(decisions):
        if dec.holds is None:
            return None
        if dec.holds:
            return start + i
    return None


def decision_json(d: Decision) -> dict:
    out = {
        "holds": d.holds,
        "authority": d.authority,
        "cross_checks": [c.to_json() for c in d.cross_checks],
    }
    if d.witness is not None:
        out["witness"] = d.witness
    if d.inconclusive:
        out["inconclusive"] = d.inconclusive
    return out


def analyze(alg: FiniteAlgebra, limits: Limits | None = None) -> Report:
    """Run every decider in a fixed order and collect a ``Report``."""
    limits = limits or Limits()
    cap = limits.cap
    decisions: dict[str, Decision] = {}
    timings: dict[str, float] = {}

    def run(name, fn):
        t = time.perf_counter()
        decisions[name] = fn()
        timings[name] = round(1000 * (time.perf_counter() - t), 1)

    run("day", lambda: decide_day_terms(alg, cap))
    for n in range(2, limits.max_perm + 1):
        run(f"permutable[n={n}]", lambda n=n: decide_n_permutable(alg, n, cap))
    run("permutable-any", lambda: decide_n_permutable_any(alg, cap))
    run("kearnes-kiss", lambda: decide_congruence_identity(alg, cap))
    for n in range(2, limits.max_cube + 1):
        run(f"cube[n={n}]", lambda n=n: decide_n_cube_term(alg, n, cap))

    idem = is_idempotent(alg)
    blocker = None
    if idem:
        t = time.perf_counter()
        blocker = find_cube_blocker(alg)
        timings["blocker"] = round(1000 * (time.perf_counter() - t), 1)
        if blocker is not None:
            for n in range(2, limits.max_cube + 1):
                if decisions[f"cube[n={n}]"].holds:
                    raise VerificationError(
                        f"blocker {blocker} found but an {n}-cube term was generated"
                    )
    return Report(alg.name, alg.size, idem, decisions, limits, blocker, idem, timings)


__all__ = [
    "CrossCheck",
    "DayContext",
    "Decision",
    "Limits",
    "Report",
    "analyze",
    "check_cross_compatibility",
    "cube_tuples",
    "day_context",
    "decide_congruence_identity",
    "decide_day_terms",
    "decide_n_cube_term",
    "decide_n_permutable",
    "decide_n_permutable_any",
    "decision_json",
    "find_cube_blocker",
    "find_cube_term",
    "is_cube_blocker",
    "subuniverses",
    "verify_cube_term",
]
