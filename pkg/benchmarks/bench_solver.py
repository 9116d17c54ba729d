"""Compare the compiled and numpy solver backends on generated puzzles.

    python benchmarks/bench_solver.py --sizes 4-9 --per-size 20
"""

from __future__ import annotations

import argparse
import statistics
import time

from kkdebate import solver
from kkdebate.experiment import _parse_sizes
from kkdebate.generator import build_dataset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", default="4-9")
    ap.add_argument("--per-size", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = solver.available_backends()
    print(f"backends: {', '.join(backends)} (default {solver.BACKEND})")
    puzzles = build_dataset(_parse_sizes(args.sizes), args.per_size, args.seed)
    by_size: dict[int, list] = {}
    for p in puzzles:
        by_size.setdefault(p.size, []).append(p)

    print(f"{'size':>4} " + " ".join(f"{b + ' ms':>12}" for b in backends) + f" {'speedup':>8}")
    for n, group in sorted(by_size.items()):
        times = {}
        for b in backends:
            best = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                for p in group:
                    res = solver.solve(p, backend=b)
                    assert res.unique and res.solutions[0] == dict(p.solution)
                best.append((time.perf_counter() - t0) / len(group))
            times[b] = statistics.median(best) * 1e3
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{n:>4} " + " ".join(f"{times[b]:>12.3f}" for b in backends) + f" {speed:>7.1f}x")


if __name__ == "__main__":
    main()
