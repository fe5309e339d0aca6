"""Command-line interface.

Exit codes: 0 analysis completed (whatever the mathematical answer),
1 input error, 2 resource cap exceeded, 3 internal verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .algebra import DEFAULT_CAP, FiniteAlgebra, is_idempotent
from .constructions import (
    MarkedAlgebra,
    blocker_witnesses,
    pentagon_witnesses,
    tarski_step,
)
from .errors import CapExceeded, MalcevLabError, NotCompatible, ParseError, VerificationError
from .formats import emit_algebra, emit_json, emit_report, parse_algebra, parse_structure
from .free import free_algebra, strong_coloring
from .malcev import (
    Limits,
    analyze,
    decide_congruence_identity,
    decide_day_terms,
    decide_n_cube_term,
    decide_n_permutable,
    decide_n_permutable_any,
    decision_json,
    find_cube_blocker,
    is_cube_blocker,
)
from .relstruct import (
    RelStructure,
    build_b0,
    build_bn,
    build_order2,
    build_p0,
    build_s,
    build_wn,
    classify_pentagon,
    factor_pentagon,
    verify_pentagon,
)

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3

# squaring stops before any stage's largest table exceeds this many entries
TARSKI_TABLE_LIMIT = 50_000_000


class InputError(MalcevLabError):
    """Bad command-line input that is not a file syntax error."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def load_algebra(path: str) -> FiniteAlgebra:
    return parse_algebra(_read(path))


def load_structure(path: str) -> RelStructure:
    return parse_structure(_read(path))


def parse_subset(text: str) -> set[int]:
    """``"1"``, ``"0,2"`` or ``"{0,2}"``."""
    body = text.strip().strip("{}").strip()
    if not body:
        raise InputError("empty subset")
    try:
        return {int(x) for x in body.split(",")}
    except ValueError:
        raise InputError(f"bad subset {text!r}; use e.g. 0,2") from None


def parse_target(spec: str) -> RelStructure:
    kind, _, arg = spec.partition(":")
    try:
        if kind == "p0" and not arg:
            return build_p0()
        if kind == "order2" and not arg:
            return build_order2()
        if kind == "s" and not arg:
            return build_s()
        if kind == "wn":
            return build_wn(int(arg))
        if kind == "bn":
            return build_bn(int(arg))
        if kind == "b0":
            return build_b0(int(arg))
        if kind == "file" and arg:
            return load_structure(arg)
    except ValueError as e:
        raise InputError(f"bad target {spec!r}: {e}") from None
    raise InputError(f"unknown target {spec!r}; use p0, wn:N, order2, s, bn:N, b0:K or file:PATH")


def _parse_factor(text: str) -> tuple[int, int]:
    a, sep, b = text.lower().partition("x")
    try:
        if sep:
            return int(a), int(b)
    except ValueError:
        pass
    raise InputError(f"bad factorization {text!r}; use e.g. 2x2")


def _yes(b) -> str:
    return {True: "yes", False: "no", None: "inconclusive"}[b]


# ---------------------------------------------------------------- commands


def cmd_analyze(args, out):
    alg = load_algebra(args.algebra)
    rep = analyze(alg, Limits(args.max_perm, args.max_cube, args.cap))
    text = emit_report(rep, timings=not args.no_timings)
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
        j = rep.to_json(timings=False)
        out.write(f"algebra {j['algebra']}: report written to {args.json}\n")
    else:
        out.write(text)


def _decision(fn):
    def run(args, out):
        alg = load_algebra(args.algebra)
        d = fn(alg, args)
        out.write(emit_json({"condition": d.condition, **decision_json(d)}))

    return run


cmd_day = _decision(lambda alg, a: decide_day_terms(alg, a.cap))
cmd_kk = _decision(lambda alg, a: decide_congruence_identity(alg, a.cap))
cmd_cube = _decision(lambda alg, a: decide_n_cube_term(alg, a.n, a.cap))


def cmd_permutable(args, out):
    if args.any == (args.n is not None):
        raise InputError("give exactly one of --n N or --any")
    alg = load_algebra(args.algebra)
    d = decide_n_permutable_any(alg, args.cap) if args.any else decide_n_permutable(alg, args.n, args.cap)
    out.write(emit_json({"condition": d.condition, **decision_json(d)}))


def cmd_blocker(args, out):
    alg = load_algebra(args.algebra)
    if not is_idempotent(alg):
        raise InputError("blocker search needs an idempotent algebra")
    found = find_cube_blocker(alg)
    if found is None:
        out.write("blocker: none\n")
    else:
        S, U = found
        out.write(f"blocker: subuniverse {{{','.join(map(str, S))}}} subset {{{','.join(map(str, U))}}}\n")


def cmd_color(args, out):
    alg = load_algebra(args.algebra)
    B = parse_target(args.target)
    c = strong_coloring(alg, B, args.cap, refine=not args.no_refine)
    if c is None:
        out.write("none\n")
    else:
        out.write(f"coloring of {len(c.map)} elements into {B.name}:\n")
        out.write(" ".join(str(v) for v in c.map) + "\n")


def cmd_free(args, out):
    alg = load_algebra(args.algebra)
    if args.gens < 1:
        raise InputError("--gens must be positive")
    F = free_algebra(alg, args.gens, args.cap)
    out.write(f"free algebra on {args.gens} generators over {alg.name}: {F.size} elements\n")
    if args.dump:
        for i in range(F.size):
            row = " ".join(str(int(v)) for v in F.elements[i])
            out.write(f"{i}: {F.term(i)}  [{row}]\n")


def cmd_pentagon(args, out):
    st = load_structure(args.structure)
    check = verify_pentagon(st)
    if not check:
        out.write(f"pentagon: no; {check.message}\n")
        return
    sizes = _parse_factor(args.factor) if args.action == "classify" and args.factor else None
    try:
        pv = factor_pentagon(st, sizes)
    except ValueError as e:
        raise InputError(str(e)) from None
    cls = classify_pentagon(pv)
    na, nb = pv.sizes
    if args.action == "verify":
        out.write(f"pentagon: yes; {cls.kind} under {na}x{nb}\n")
        return
    out.write(f"classification: {cls.kind} under {na}x{nb}\n")
    out.write("coordinates: " + " ".join(f"{p}=({a},{b})" for p, (a, b) in enumerate(pv.coords)) + "\n")
    for a, f in enumerate(pv.fibers):
        out.write(f"fiber {a}: {f}\n")
    if cls.eta is not None:
        out.write(f"eta: {cls.eta}\n")
    out.write("full fibers: {" + ",".join(str(a) for a in cls.full_fibers) + "}\n")


def cmd_tarski(args, out):
    alg = load_algebra(args.algebra)
    if args.steps < 0:
        raise InputError("--steps must be non-negative")
    try:
        ma = MarkedAlgebra(alg, parse_subset(args.marked))
    except ValueError as e:
        raise InputError(str(e)) from None
    maxar = max((op.arity for op in alg.ops), default=0)

    def summary(k, m):
        blocker = _yes(is_cube_blocker(m.alg, m.U)) if is_idempotent(m.alg) else "n/a"
        return f"stage {k}: size {m.size}, |U| = {len(m.U)}, U is a cube term blocker: {blocker}\n"

    out.write(summary(0, ma))
    base_blocker = is_idempotent(alg) and is_cube_blocker(alg, ma.U)
    for k in range(1, args.steps + 1):
        if (ma.size**2) ** maxar > TARSKI_TABLE_LIMIT:
            raise CapExceeded(TARSKI_TABLE_LIMIT, f"stage {k} operation table")
        ma = tarski_step(ma)
        out.write(summary(k, ma))
        out.write("  diagonal embedding is a homomorphism: ok\n")
        out.write("  marked subset restricts to the previous stage: ok\n")
        if base_blocker and not is_cube_blocker(ma.alg, ma.U):
            raise VerificationError(f"stage {k} lost the cube term blocker")


def cmd_witness(args, out):
    try:
        U = parse_subset(args.u)
        I = range(args.indices)
        fam = pentagon_witnesses(args.m, U, I) if args.family == "pentagon" else blocker_witnesses(args.m, U, I)
    except ValueError as e:
        raise InputError(str(e)) from None
    out.write(f"# family: {fam.kind}; m = {fam.m}; U = {{{','.join(map(str, sorted(fam.U)))}}}; indices = {list(fam.indices)}\n")
    out.write(f"# constants: {fam.constants}\n")
    out.write(f"# identities verified: {len(fam.identities)}; every op preserves {fam.structure.name}\n")
    out.write(emit_algebra(fam.algebra))


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="malcevlab", description="Decide Mal'cev conditions of finite algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def alg_cmd(name, help_, fn, cap=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("algebra", help="algebra file")
        if cap:
            sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="closure element cap")
        sp.set_defaults(func=fn)
        return sp

    sp = alg_cmd("analyze", "run every decider and print a JSON report", cmd_analyze)
    sp.add_argument("--max-perm", type=int, default=4)
    sp.add_argument("--max-cube", type=int, default=3)
    sp.add_argument("--json", metavar="OUT", help="write the report here instead of stdout")
    sp.add_argument("--no-timings", action="store_true", help="omit timings for byte-identical reports")

    alg_cmd("day", "Day terms (congruence modularity)", cmd_day)
    alg_cmd("kk", "Kearnes-Kiss terms (nontrivial congruence identity)", cmd_kk)
    sp = alg_cmd("permutable", "congruence n-permutability", cmd_permutable)
    sp.add_argument("--n", type=int)
    sp.add_argument("--any", action="store_true", help="n-permutable for some n")
    sp = alg_cmd("cube", "n-cube term", cmd_cube)
    sp.add_argument("--n", type=int, required=True)
    alg_cmd("blocker", "search subalgebras for a cube term blocker", cmd_blocker, cap=False)
    sp = alg_cmd("color", "strong coloring of the free structure", cmd_color)
    sp.add_argument("--target", required=True, help="p0 | wn:N | order2 | s | bn:N | b0:K | file:PATH")
    sp.add_argument("--no-refine", action="store_true", help="skip transitive/congruence refinement")
    sp = alg_cmd("free", "generate a free algebra", cmd_free)
    sp.add_argument("--gens", type=int, required=True)
    sp.add_argument("--dump", action="store_true", help="list every element with a term")

    sp = sub.add_parser("pentagon", help="check or classify a pentagon structure")
    sp.add_argument("action", choices=["verify", "classify"])
    sp.add_argument("structure", help="structure file")
    sp.add_argument("--factor", help="expected factorization, e.g. 2x2")
    sp.set_defaults(func=cmd_pentagon)

    sp = alg_cmd("tarski", "iterate Tarski squaring on a marked algebra", cmd_tarski, cap=False)
    sp.add_argument("--marked", required=True, help="marked subset, e.g. 1 or 0,2")
    sp.add_argument("--steps", type=int, default=1)

    sp = sub.add_parser("witness", help="build and verify a witness polymorphism family")
    sp.add_argument("family", choices=["pentagon", "blocker"])
    sp.add_argument("--m", type=int, required=True, help="universe size")
    sp.add_argument("--u", required=True, help="marked subset, e.g. 0,1,2")
    sp.add_argument("--indices", type=int, required=True, help="number of indices")
    sp.set_defaults(func=cmd_witness)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        args.func(args, out)
    except (ParseError, InputError, NotCompatible) as e:
        err.write(f"error: {e}\n")
        return EXIT_INPUT
    except CapExceeded as e:
        err.write(f"resource limit: {e}\n")
        return EXIT_CAP
    except VerificationError as e:
        err.write(f"verification failure: {e}\n")
        return EXIT_VERIFY
    except ValueError as e:
        err.write(f"error: {e}\n")
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
