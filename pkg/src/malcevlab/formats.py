"""Text formats for algebras and structures, and JSON report emission.

Algebra files::

    # format: malcev-lab v1
    algebra sl2
    size 2
    op join 2
    0 1
    1 1

Tables are row-major with the first argument most significant and may be
spread over any number of lines.  Structure files list one tuple per line::

    structure order2
    size 2
    rel le 2
    0 0
    0 1
    1 1
    end

An optional ``factors m1 m2 ...`` line after ``size`` records a product
decomposition (used by crosses).  ``#`` starts a comment everywhere.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .algebra import FiniteAlgebra, OpTable
from .errors import ParseError
from .relstruct import Relation, RelStructure

FORMAT_LINE = "# format: malcev-lab v1"


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _tokens(text: str) -> Iterator[_Tok]:
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        for m in re.finditer(r"\S+", body):
            yield _Tok(m.group(), ln, m.start() + 1)


def _line_tokens(text: str) -> list[list[_Tok]]:
    lines: dict[int, list[_Tok]] = {}
    for t in _tokens(text):
        lines.setdefault(t.line, []).append(t)
    return [lines[k] for k in sorted(lines)]


def _int(tok: _Tok, what: str) -> int:
    try:
        return int(tok.text)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok.text!r}", tok.line, tok.col) from None


def _end_pos(text: str) -> tuple[int, int]:
    lines = text.splitlines() or [""]
    return len(lines), len(lines[-1]) + 1


class _Stream:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.i = 0
        self.eof = _end_pos(text)

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, what: str) -> _Tok:
        t = self.peek()
        if t is None:
            raise ParseError(f"unexpected end of input, expected {what}", *self.eof)
        self.i += 1
        return t

    def keyword(self, word: str) -> _Tok:
        t = self.next(f"'{word}'")
        if t.text != word:
            raise ParseError(f"expected '{word}', got {t.text!r}", t.line, t.col)
        return t


def parse_algebra(text: str) -> FiniteAlgebra:
    s = _Stream(text)
    s.keyword("algebra")
    name = s.next("an algebra name").text
    s.keyword("size")
    tok = s.next("the universe size")
    n = _int(tok, "the universe size")
    if n < 1:
        raise ParseError("size must be positive", tok.line, tok.col)
    ops: list[OpTable] = []
    seen: set[str] = set()
    while s.peek() is not None:
        s.keyword("op")
        ntok = s.next("an operation name")
        if ntok.text in seen:
            raise ParseError(f"duplicate operation {ntok.text!r}", ntok.line, ntok.col)
        seen.add(ntok.text)
        atok = s.next("an arity")
        arity = _int(atok, "an arity")
        if arity < 0:
            raise ParseError("arity must be non-negative", atok.line, atok.col)
        count = n**arity
        vals = []
        for _ in range(count):
            t = s.peek()
            if t is None or t.text == "op":
                pos = (t.line, t.col) if t is not None else s.eof
                raise ParseError(
                    f"operation {ntok.text} needs {count} entries, got {len(vals)}", *pos
                )
            s.i += 1
            v = _int(t, "a table entry")
            if not 0 <= v < n:
                raise ParseError(f"entry {v} outside the universe [0,{n})", t.line, t.col)
            vals.append(v)
        ops.append(OpTable(ntok.text, arity, n, vals))
    if not ops:
        raise ParseError("an algebra needs at least one operation", *s.eof)
    return FiniteAlgebra(name, n, tuple(ops))


def parse_structure(text: str) -> RelStructure:
    lines = _line_tokens(text)
    eof = _end_pos(text)
    it = iter(lines)

    def expect(word: str, nargs: int | None) -> list[_Tok]:
        toks = next(it, None)
        if toks is None:
            raise ParseError(f"unexpected end of input, expected '{word}'", *eof)
        if toks[0].text != word:
            raise ParseError(f"expected '{word}', got {toks[0].text!r}", toks[0].line, toks[0].col)
        if nargs is not None and len(toks) != nargs + 1:
            raise ParseError(f"'{word}' takes {nargs} argument(s)", toks[0].line, toks[0].col)
        return toks

    name = expect("structure", 1)[1].text
    stok = expect("size", 1)[1]
    n = _int(stok, "the universe size")
    if n < 1:
        raise ParseError("size must be positive", stok.line, stok.col)
    factors = None
    rels: list[Relation] = []
    seen: set[str] = set()
    pending = next(it, None)
    if pending is not None and pending[0].text == "factors":
        factors = tuple(_int(t, "a factor size") for t in pending[1:])
        if not factors or int(np.prod(factors)) != n:
            raise ParseError("factor sizes must multiply to the universe size", pending[0].line, pending[0].col)
        pending = next(it, None)
    while pending is not None:
        head = pending
        if head[0].text != "rel":
            raise ParseError(f"expected 'rel', got {head[0].text!r}", head[0].line, head[0].col)
        if len(head) != 3:
            raise ParseError("'rel' takes a name and an arity", head[0].line, head[0].col)
        rname = head[1].text
        if rname in seen:
            raise ParseError(f"duplicate relation {rname!r}", head[1].line, head[1].col)
        seen.add(rname)
        arity = _int(head[2], "an arity")
        if arity < 1:
            raise ParseError("relation arity must be positive", head[2].line, head[2].col)
        rows = []
        while True:
            toks = next(it, None)
            if toks is None:
                raise ParseError(f"relation {rname} is missing its 'end'", *eof)
            if toks[0].text == "end":
                if len(toks) != 1:
                    raise ParseError("'end' takes no arguments", toks[1].line, toks[1].col)
                break
            if len(toks) != arity:
                raise ParseError(
                    f"tuple of relation {rname} has {len(toks)} entries, expected {arity}",
                    toks[0].line,
                    toks[0].col,
                )
            row = []
            for t in toks:
                v = _int(t, "a tuple entry")
                if not 0 <= v < n:
                    raise ParseError(f"entry {v} outside the universe [0,{n})", t.line, t.col)
                row.append(v)
            rows.append(row)
        rels.append(Relation(rname, arity, n, np.array(rows, dtype=np.int64).reshape(-1, arity)))
        pending = next(it, None)
    return RelStructure(name, n, tuple(rels), factors)


def _safe_name(name: str) -> str:
    return re.sub(r"\s+", "_", name.replace("#", "_"))


def emit_algebra(alg: FiniteAlgebra) -> str:
    out = [FORMAT_LINE, f"algebra {_safe_name(alg.name)}", f"size {alg.size}"]
    n = alg.size
    for op in alg.ops:
        out.append(f"op {_safe_name(op.name)} {op.arity}")
        vals = [str(int(v)) for v in op.table]
        width = n if op.arity else 1
        for k in range(0, len(vals), width):
            out.append(" ".join(vals[k : k + width]))
    return "\n".join(out) + "\n"


def emit_structure(st: RelStructure) -> str:
    out = [FORMAT_LINE, f"structure {_safe_name(st.name)}", f"size {st.size}"]
    if st.factors is not None:
        out.append("factors " + " ".join(str(f) for f in st.factors))
    for rel in st.relations:
        out.append(f"rel {_safe_name(rel.name)} {rel.arity}")
        for row in rel.array().tolist():
            out.append(" ".join(str(v) for v in row))
        out.append("end")
    return "\n".join(out) + "\n"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def emit_json(obj) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def emit_report(report, timings: bool = True) -> str:
    return emit_json(report.to_json(timings=timings))


__all__ = [
    "FORMAT_LINE",
    "emit_algebra",
    "emit_json",
    "emit_report",
    "emit_structure",
    "parse_algebra",
    "parse_structure",
]
