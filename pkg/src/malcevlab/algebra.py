"""Finite algebras, terms, identities, and closure-based generation.

Operation tables are row-major with the first argument most significant:
the value of ``f(a_1, ..., a_r)`` sits at index ``sum(a_j * n**(r-j))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .closure import closure
from .errors import CapExceeded, NotCompatible

DEFAULT_CAP = 2_000_000


@dataclass(frozen=True, eq=False)
class OpTable:
    name: str
    arity: int
    size: int
    table: np.ndarray

    def __post_init__(self):
        tab = np.array(self.table, dtype=np.int64).ravel()
        if self.arity < 0:
            raise ValueError(f"op {self.name}: negative arity")
        if tab.size != self.size**self.arity:
            raise ValueError(
                f"op {self.name}: table has {tab.size} entries, expected {self.size ** self.arity}"
            )
        if tab.size and (tab.min() < 0 or tab.max() >= self.size):
            raise ValueError(f"op {self.name}: table entry out of range [0, {self.size})")
        tab.flags.writeable = False
        object.__setattr__(self, "table", tab)

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise ValueError(f"op {self.name} expects {self.arity} arguments, got {len(args)}")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return int(self.table[idx])

    def __eq__(self, other):
        if not isinstance(other, OpTable):
            return NotImplemented
        return (
            self.name == other.name
            and self.arity == other.arity
            and self.size == other.size
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.name, self.arity, self.size, self.table.tobytes()))


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    name: str
    size: int
    ops: tuple[OpTable, ...]

    def __post_init__(self):
        ops = tuple(self.ops)
        object.__setattr__(self, "ops", ops)
        if self.size < 1:
            raise ValueError("algebra must have a nonempty universe")
        names = [op.name for op in ops]
        if len(set(names)) != len(names):
            raise ValueError("operation names must be pairwise distinct")
        for op in ops:
            if op.size != self.size:
                raise ValueError(f"op {op.name} has size {op.size}, algebra has {self.size}")

    @classmethod
    def from_tables(cls, name: str, size: int, tables: dict[str, tuple[int, Sequence[int]]]):
        """Build from ``{op_name: (arity, flat_table)}``."""
        return cls(name, size, tuple(OpTable(k, ar, size, t) for k, (ar, t) in tables.items()))

    @classmethod
    def from_functions(cls, name: str, size: int, funcs: dict[str, tuple[int, callable]]):
        """Build by tabulating Python callables ``{op_name: (arity, f)}``."""
        ops = []
        for k, (ar, f) in funcs.items():
            tab = [f(*args) for args in itertools.product(range(size), repeat=ar)]
            ops.append(OpTable(k, ar, size, tab))
        return cls(name, size, tuple(ops))

    @property
    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple((op.name, op.arity) for op in self.ops)

    def op(self, name: str) -> OpTable:
        for op in self.ops:
            if op.name == name:
                return op
        raise KeyError(f"unknown operation {name!r}")

    def op_index(self, name: str) -> int:
        for i, op in enumerate(self.ops):
            if op.name == name:
                return i
        raise KeyError(f"unknown operation {name!r}")

    def apply_vec(self, i: int, args: Sequence[np.ndarray]) -> np.ndarray:
        op = self.ops[i]
        if op.arity == 0:
            shape = np.shape(args[0]) if args else ()
            return np.full(shape, op.table[0], dtype=np.int64)
        code = np.asarray(args[0], dtype=np.int64)
        for a in args[1:]:
            code = code * self.size + a
        return op.table[code]

    def kernel_ops(self):
        return [(op.arity, op.table) for op in self.ops]

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self.size == other.size and self.ops == other.ops and self.name == other.name

    def __hash__(self):
        return hash((self.name, self.size, self.ops))

    def __repr__(self):
        sig = ", ".join(f"{n}/{a}" for n, a in self.signature)
        return f"FiniteAlgebra({self.name!r}, size={self.size}, ops=[{sig}])"


class ProductAlgebra:
    """Direct product evaluated lazily, componentwise.

    Elements are indexed in mixed radix with the first factor most
    significant, matching ``power``/``product`` materializations.
    """

    def __init__(self, factors: Sequence[FiniteAlgebra], name: str | None = None):
        factors = tuple(factors)
        if not factors:
            raise ValueError("need at least one factor")
        sig = factors[0].signature
        for f in factors[1:]:
            if f.signature != sig:
                raise ValueError("factors must share a signature")
        self.factors = factors
        self.name = name or "*".join(f.name for f in factors)
        self.signature = sig
        self.sizes = tuple(f.size for f in factors)
        self.size = int(np.prod(self.sizes, dtype=np.int64))

    def split(self, x) -> list[np.ndarray]:
        x = np.asarray(x, dtype=np.int64)
        out = []
        for s in reversed(self.sizes):
            out.append(x % s)
            x = x // s
        return out[::-1]

    def join(self, parts) -> np.ndarray:
        x = np.zeros(np.shape(parts[0]), dtype=np.int64)
        for s, p in zip(self.sizes, parts):
            x = x * s + p
        return x

    def apply_vec(self, i: int, args: Sequence[np.ndarray]) -> np.ndarray:
        if not args:
            return self.join([f.apply_vec(i, []) for f in self.factors])
        comps = [self.split(a) for a in args]
        parts = [
            f.apply_vec(i, [c[k] for c in comps]) for k, f in enumerate(self.factors)
        ]
        return self.join(parts)

    def materialize(self, name: str | None = None) -> FiniteAlgebra:
        ops = []
        for i, (opname, ar) in enumerate(self.signature):
            grid = np.indices((self.size,) * ar).reshape(ar, -1) if ar else []
            tab = self.apply_vec(i, list(grid)) if ar else self.apply_vec(i, [])
            ops.append(OpTable(opname, ar, self.size, np.atleast_1d(tab)))
        return FiniteAlgebra(name or self.name, self.size, tuple(ops))


def product(*algs: FiniteAlgebra, materialize: bool = True):
    p = ProductAlgebra(algs)
    return p.materialize() if materialize else p


def power(alg: FiniteAlgebra, k: int, materialize: bool = True):
    p = ProductAlgebra([alg] * k, name=f"{alg.name}^{k}")
    return p.materialize() if materialize else p


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Apply:
    op: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(str(a) for a in self.args)})"


Term = Var | Apply


def term_variables(t: Term) -> set[int]:
    seen: set[int] = set()
    out: set[int] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if id(s) in seen:
            continue
        seen.add(id(s))
        if isinstance(s, Var):
            out.add(s.index)
        else:
            stack.extend(s.args)
    return out


def substitute(t: Term, mapping: dict[int, Term] | Sequence[Term]) -> Term:
    """Replace each ``Var(i)`` by ``mapping[i]``; shared subterms stay shared."""
    memo: dict[int, Term] = {}

    def go(s):
        key = id(s)
        if key in memo:
            return memo[key]
        if isinstance(s, Var):
            r = mapping[s.index]
        else:
            r = Apply(s.op, tuple(go(a) for a in s.args))
        memo[key] = r
        return r

    return go(t)


def _check_term(alg, t: Term):
    arities = dict(alg.signature)
    index = {name: i for i, (name, _) in enumerate(alg.signature)}
    seen = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if id(s) in seen or isinstance(s, Var):
            continue
        seen.add(id(s))
        if s.op not in arities:
            raise KeyError(f"unknown operation {s.op!r}")
        if arities[s.op] != len(s.args):
            raise ValueError(f"op {s.op} expects {arities[s.op]} arguments, got {len(s.args)}")
        stack.extend(s.args)
    return index


def eval_term_vec(alg, t: Term, values: Sequence[np.ndarray]) -> np.ndarray:
    """Evaluate ``t`` on vectors of assignments at once.

    ``values[i]`` is the array of values of variable ``i``; all arrays share
    a shape.  Subterms shared in memory are evaluated once.
    """
    index = _check_term(alg, t)
    memo: dict[int, np.ndarray] = {}
    shape = np.shape(values[0]) if len(values) else ()

    def go(s):
        key = id(s)
        if key in memo:
            return memo[key]
        if isinstance(s, Var):
            if not 0 <= s.index < len(values):
                raise IndexError(f"variable x{s.index} outside assignment of length {len(values)}")
            r = np.asarray(values[s.index], dtype=np.int64)
        else:
            i = index[s.op]
            args = [go(a) for a in s.args]
            r = alg.apply_vec(i, args) if args else np.full(shape, alg.apply_vec(i, []))
        memo[key] = r
        return r

    return go(t)


def eval_term(alg, t: Term, assignment: Sequence[int]) -> int:
    """Value of ``t`` with ``Var(i)`` bound to ``assignment[i]``."""
    for a in assignment:
        if not 0 <= a < alg.size:
            raise ValueError(f"assignment value {a} outside universe")
    vals = [np.asarray(a, dtype=np.int64) for a in assignment]
    return int(eval_term_vec(alg, t, vals))


def identity_counterexample(alg, lhs: Term, rhs: Term) -> dict[int, int] | None:
    """An assignment separating ``lhs`` and ``rhs``, or ``None``."""
    used = sorted(term_variables(lhs) | term_variables(rhs))
    width = (max(used) + 1) if used else 0
    n = alg.size
    grid = np.indices((n,) * len(used)).reshape(len(used), -1) if used else np.zeros((0, 1), int)
    values = [np.zeros(grid.shape[1], dtype=np.int64) for _ in range(width)]
    for k, v in enumerate(used):
        values[v] = grid[k]
    if width == 0:
        values = [np.zeros(1, dtype=np.int64)]
    left = np.broadcast_to(eval_term_vec(alg, lhs, values), (grid.shape[1],))
    right = np.broadcast_to(eval_term_vec(alg, rhs, values), (grid.shape[1],))
    bad = np.nonzero(left != right)[0]
    if bad.size == 0:
        return None
    col = bad[0]
    return {v: int(grid[k, col]) for k, v in enumerate(used)}


def satisfies_identity(alg, lhs: Term, rhs: Term) -> bool:
    """Whether ``lhs = rhs`` holds under every assignment into ``alg``."""
    return identity_counterexample(alg, lhs, rhs) is None


def is_idempotent(alg: FiniteAlgebra) -> bool:
    diag = np.arange(alg.size)
    for i, op in enumerate(alg.ops):
        if op.arity == 0:
            if alg.size > 1:
                return False
            continue
        if not np.array_equal(alg.apply_vec(i, [diag] * op.arity), diag):
            return False
    return True


# ---------------------------------------------------------------- closures


def generate_subuniverse(alg: FiniteAlgebra, seed: Iterable[int]) -> tuple[int, ...]:
    """Least subuniverse containing ``seed``, ascending."""
    seed = sorted(set(seed))
    for a in seed:
        if not 0 <= a < alg.size:
            raise ValueError(f"element {a} outside universe")
    rows = np.array(seed, dtype=np.int64).reshape(-1, 1)
    out, _, _ = closure(alg.size, alg.kernel_ops(), rows, alg.size + 1)
    return tuple(sorted(int(x) for x in out[:, 0]))


@dataclass
class Subpower:
    """A generated subpower with parent records for term extraction.

    Element ``i`` was produced as ``ops[parent_op[i]]`` applied to elements
    ``parent_args[i, :arity]``; seeds carry ``parent_op == -1`` and their
    original seed position in ``parent_args[i, 0]``.
    """

    alg: FiniteAlgebra
    k: int
    rows: np.ndarray
    parent_op: np.ndarray
    parent_args: np.ndarray
    _index: dict = field(default=None, repr=False)

    def __len__(self):
        return self.rows.shape[0]

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in r) for r in self.rows]

    def index(self, tup) -> int | None:
        if self._index is None:
            self._index = {r.tobytes(): i for i, r in enumerate(self.rows)}
        key = np.asarray(tup, dtype=self.rows.dtype).tobytes()
        return self._index.get(key)

    def __contains__(self, tup) -> bool:
        return self.index(tup) is not None

    def term(self, i: int, _memo: dict | None = None) -> Term:
        """Term over the seeds (``Var(s)`` is seed ``s``) evaluating to element ``i``."""
        memo = {} if _memo is None else _memo
        order = [i]
        stack = [i]
        while stack:
            j = stack.pop()
            op = int(self.parent_op[j])
            if op < 0:
                continue
            ar = self.alg.ops[op].arity
            for a in self.parent_args[j, :ar]:
                a = int(a)
                if a not in memo and a not in order:
                    order.append(a)
                    stack.append(a)
        for j in sorted(set(order)):
            # parents always precede children in insertion order
            if j in memo:
                continue
            op = int(self.parent_op[j])
            if op < 0:
                memo[j] = Var(int(self.parent_args[j, 0]))
            else:
                ar = self.alg.ops[op].arity
                memo[j] = Apply(
                    self.alg.ops[op].name,
                    tuple(memo[int(a)] for a in self.parent_args[j, :ar]),
                )
        return memo[i]


def generate_subpower(
    alg: FiniteAlgebra, k: int, seeds: Iterable[Sequence[int]], cap: int = DEFAULT_CAP
) -> Subpower:
    """Least subuniverse of ``alg**k`` containing ``seeds``.

    Raises ``CapExceeded`` when the closure would exceed ``cap`` elements.
    """
    if k < 1:
        raise ValueError("k must be positive")
    seeds = [tuple(s) for s in seeds]
    for s in seeds:
        if len(s) != k or any(not 0 <= v < alg.size for v in s):
            raise ValueError(f"seed {s} is not a {k}-tuple over the universe")
    rows = np.array(seeds, dtype=np.int64).reshape(len(seeds), k)
    out, pop, pargs = closure(alg.size, alg.kernel_ops(), rows, cap)
    return Subpower(alg, k, out, pop, pargs)


# ---------------------------------------------------------------- quotients


def quotient(alg: FiniteAlgebra, theta) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """Quotient by a congruence; classes are numbered by least member.

    Returns the quotient algebra and the class map (element -> class).
    Raises ``NotCompatible`` when ``theta`` is not a congruence.
    """
    from .partitions import congruence_violation

    if theta.size != alg.size:
        raise ValueError("partition size does not match algebra")
    bad = congruence_violation(alg, theta)
    if bad is not None:
        raise NotCompatible(*bad)
    reps = sorted(set(int(r) for r in theta.rep))
    number = {r: i for i, r in enumerate(reps)}
    cmap = tuple(number[int(r)] for r in theta.rep)
    c = len(reps)
    ops = []
    for i, op in enumerate(alg.ops):
        grid = np.indices((c,) * op.arity).reshape(op.arity, -1) if op.arity else []
        args = [np.array(reps)[g] for g in grid]
        vals = alg.apply_vec(i, args) if op.arity else np.atleast_1d(alg.apply_vec(i, []))
        ops.append(OpTable(op.name, op.arity, c, np.array(cmap)[vals]))
    return FiniteAlgebra(f"{alg.name}/theta", c, tuple(ops)), cmap


__all__ = [
    "DEFAULT_CAP",
    "Apply",
    "CapExceeded",
    "FiniteAlgebra",
    "OpTable",
    "ProductAlgebra",
    "Subpower",
    "Term",
    "Var",
    "eval_term",
    "eval_term_vec",
    "generate_subpower",
    "generate_subuniverse",
    "identity_counterexample",
    "is_idempotent",
    "power",
    "product",
    "quotient",
    "satisfies_identity",
    "substitute",
    "term_variables",
]
