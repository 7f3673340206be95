#!/usr/bin/env python3
"""Benchmark the evolution step: numba kernels against the numpy fallback.

    python benchmarks/bench_step.py --orders 10000 100000 1000000 --reps 7

Both backends are timed in the same process regardless of GRA_PURE_NUMPY,
so the flag's cost is visible before committing to it for long sweeps.
"""

import argparse
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gra import _kernels
from gra.engine import step
from gra.generate import ring_chord_graph
from gra.rules import decode


def bench_backend(backend, rule, orders, reps):
    results = {}
    step(ring_chord_graph(1024, seed=1), rule, backend=backend)  # warmup / JIT
    for order in orders:
        g = ring_chord_graph(order, seed=0)
        step(g, rule, backend=backend)  # warm allocator for this size
        times = []
        for _ in range(reps):
            t0 = time.perf_counter()
            step(g, rule, backend=backend)
            times.append(time.perf_counter() - t0)
        results[order] = statistics.median(times)
    return results


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--orders", type=int, nargs="+", default=[10_000, 40_000, 160_000, 640_000, 1_000_000]
    )
    parser.add_argument("--reps", type=int, default=7)
    parser.add_argument("--rule", type=int, default=2 + (1 << 10), help="must trigger divisions")
    args = parser.parse_args(argv)

    rule = decode(args.rule)
    backends = [_kernels.NUMPY_BACKEND]
    if _kernels.NUMBA_BACKEND is not None:
        backends.append(_kernels.NUMBA_BACKEND)
    else:
        print("numba unavailable; benchmarking the numpy backend only")

    rows = {b.name: bench_backend(b, rule, args.orders, args.reps) for b in backends}

    header = f"{'order':>12}" + "".join(f"{name + ' ms':>14}" for name in rows)
    if len(rows) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for order in args.orders:
        line = f"{order:>12,}"
        for name in rows:
            line += f"{rows[name][order] * 1e3:>14.3f}"
        if len(rows) == 2:
            line += f"{rows['numpy'][order] / rows['numba'][order]:>10.2f}"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
