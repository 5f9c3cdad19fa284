"""Time the numba and numpy solver kernels on random knowledge bases.

    python3 benchmarks/bench_kernels.py [--atoms 10] [--rules 8] [--repeat 5]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from condpres import _kernels  # noqa: E402
from condpres.logic import KnowledgeBase, Signature  # noqa: E402
from condpres.zsystems import tolerance_partition  # noqa: E402
from randkb import random_conditional  # noqa: E402


def make_kb(rng, atoms: int, rules: int) -> KnowledgeBase:
    names = tuple(f"x{i}" for i in range(atoms))
    sig = Signature(names)
    while True:
        kb = KnowledgeBase(sig, tuple(random_conditional(rng, sig) for _ in range(rules)))
        if tolerance_partition(kb) is not None:
            return kb


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--atoms", type=int, default=10)
    ap.add_argument("--rules", type=int, default=8)
    ap.add_argument("--bound", type=int, default=4, help="brute-force box upper bound")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    kb = make_kb(rng, args.atoms, args.rules)
    ver, fal = kb.verify, kb.falsify
    base = rng.integers(0, 4, kb.signature.n_worlds)
    lower = np.zeros(len(kb), dtype=np.int64)
    cap = 10 * len(kb) * (len(kb) + 1)

    cases = {
        "fixed_point": lambda b: _kernels.fixed_point(ver, fal, base, lower, lower, True, cap, backend=b),
        "gaps": lambda b: _kernels.gaps(ver, fal, base, lower + 1, backend=b),
        "brute_force": lambda b: _kernels.brute_force(ver, fal, base, lower, args.bound, backend=b),
    }
    print(f"{kb.signature.n_worlds} worlds, {len(kb)} conditionals, box {args.bound + 1}^{len(kb)}")
    print(f"{'kernel':<12} {'numpy (s)':>11} {'numba (s)':>11} {'speedup':>8}")
    for name, fn in cases.items():
        fn("numba")  # compile
        t_np = best_of(lambda: fn("numpy"), args.repeat)
        t_nb = best_of(lambda: fn("numba"), args.repeat)
        print(f"{name:<12} {t_np:>11.5f} {t_nb:>11.5f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
