"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py --graph bouquet --word-bound 6
    TREELATTICE_NO_NUMBA=1 python3 benchmarks/bench_kernels.py   # numpy only

The first numba call includes compilation (or a cache load) and is reported
separately from the steady-state timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from treelattice import _kernels
from treelattice.cli import load_graph
from treelattice.covering import SpanningData, reduced_words


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def grid_inputs(sd: SpanningData, word_bound: int, prefix: int, period: int):
    words = list(reduced_words(sd.rank, word_bound))
    rays = sd.ray_catalog(prefix, period)
    cycles, lengths = sd.word_cycle_matrix(words)
    width = int(lengths.max()) + 1
    ray_mat, _ = _kernels.pack_paths([r.darts(width) for r in rays], width)
    return cycles, lengths, ray_mat


def layer_inputs(sd: SpanningData, copies: int):
    g = sd.graph
    origin = np.array([g.origin(d) for d in range(g.num_darts)] * copies)
    # disjoint copies of the dart graph give a larger transition matrix
    offset = np.repeat(np.arange(copies) * g.n0, g.num_darts)
    b = _kernels.nonbacktracking_matrix(origin + offset)
    start = np.zeros(b.shape[0], dtype=bool)
    start[::g.num_darts] = True
    return b, start


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graph", default="bouquet")
    ap.add_argument("--word-bound", type=int, default=6)
    ap.add_argument("--catalog-prefix", type=int, default=3)
    ap.add_argument("--catalog-period", type=int, default=4)
    ap.add_argument("--copies", type=int, default=64, help="dart-graph copies for the layer kernel")
    ap.add_argument("--steps", type=int, default=60)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    sd = SpanningData(load_graph(args.graph))
    cycles, lengths, rays = grid_inputs(sd, args.word_bound, args.catalog_prefix,
                                        args.catalog_period)
    b, start = layer_inputs(sd, args.copies)
    print(f"graph {args.graph}: busemann grid {cycles.shape[0]} words x {rays.shape[0]} rays; "
          f"layers {b.shape[0]} darts x {args.steps} steps")
    print(f"numba available: {_kernels.HAVE_NUMBA}")

    kernels = {
        "busemann_grid": lambda nb: _kernels.busemann_grid(cycles, lengths, rays, nb),
        "reachable_layers": lambda nb: _kernels.reachable_layers(b, start, args.steps, nb),
    }
    for name, fn in kernels.items():
        ref = fn(False)
        t_np = best_of(lambda: fn(False), args.repeat)
        line = f"{name:18s} numpy {t_np * 1e3:9.2f} ms"
        if _kernels.HAVE_NUMBA:
            t0 = time.perf_counter()
            out = fn(True)
            first = time.perf_counter() - t0
            assert np.array_equal(out, ref), f"{name}: backends disagree"
            t_nb = best_of(lambda: fn(True), args.repeat)
            line += (f"  numba {t_nb * 1e3:9.2f} ms (first call {first * 1e3:.0f} ms)"
                     f"  speedup {t_np / t_nb:6.1f}x")
        print(line)


if __name__ == "__main__":
    main()
