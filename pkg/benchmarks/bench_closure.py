"""Compare the compiled and numpy closure kernels on free-algebra workloads.

    python3 benchmarks/bench_closure.py [--repeat 3] [--quick]

Each workload generates a free algebra as a subpower; both kernels must
return identical rows and parent records, which is checked before timing
is reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from malcevlab.algebra import FiniteAlgebra
from malcevlab.closure import _compiled, closure
from malcevlab.free import assignments

ALGEBRAS = {
    "sl2": FiniteAlgebra.from_functions("sl2", 2, {"join": (2, max)}),
    "l2": FiniteAlgebra.from_functions("l2", 2, {"meet": (2, min), "join": (2, max)}),
    "maj2": FiniteAlgebra.from_functions("maj2", 2, {"maj": (3, lambda x, y, z: int(x + y + z >= 2))}),
    "z3": FiniteAlgebra.from_functions("z3", 3, {"m": (3, lambda x, y, z: (x - y + z) % 3)}),
}

WORKLOADS = [("sl2", 5), ("l2", 4), ("maj2", 4), ("maj2", 5), ("z3", 4), ("l2", 5)]
QUICK = [("sl2", 4), ("l2", 3), ("maj2", 3)]


def seeds_for(alg: FiniteAlgebra, k: int) -> np.ndarray:
    return assignments(alg.size, k).T.astype(np.int64)


def run(backend: str, alg: FiniteAlgebra, seeds: np.ndarray, repeat: int):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = closure(alg.size, alg.kernel_ops(), seeds, 10_000_000, backend=backend)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small workloads only")
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled kernel not built; only the numpy kernel is available")
    print(f"{'workload':<10} {'elements':>9} {'numpy s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, k in QUICK if args.quick else WORKLOADS:
        alg = ALGEBRAS[name]
        seeds = seeds_for(alg, k)
        tp, outp = run("python", alg, seeds, args.repeat)
        label = f"{name}/F{k}"
        if _compiled is None:
            print(f"{label:<10} {len(outp[0]):>9} {tp:>10.4f} {'-':>11} {'-':>8}")
            continue
        tc, outc = run("compiled", alg, seeds, args.repeat)
        for a, b in zip(outp, outc):
            if not np.array_equal(a, b):
                raise SystemExit(f"{label}: kernels disagree")
        print(f"{label:<10} {len(outp[0]):>9} {tp:>10.4f} {tc:>11.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
