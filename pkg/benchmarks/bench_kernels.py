"""Compare the compiled and pure-Python kernels on representative workloads.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from marcello import _pykernels
from marcello.canon import proper_classes
from marcello.engine import eligible_mask
from marcello.graph import cycle, disjoint_union, complete, null, path, petersen

try:
    from marcello import _ckernels
except ImportError:
    _ckernels = None


def workloads():
    canon_inputs = [g for n in (6, 7) for g in proper_classes(n)] + [petersen()] * 50
    outcome_inputs = [path(7), cycle(7), disjoint_union(complete(2), null(4)), path(6), cycle(6)]

    def canon(mod):
        for g in canon_inputs:
            mod.canonical_labeling(g.n, g.adj)

    def outcomes(mod):
        for g in outcome_inputs:
            mod.enumerate_outcomes(g.n, g.adj, g.degrees(), eligible_mask(g), True)

    return {
        f"canonical_labeling ({len(canon_inputs)} graphs)": canon,
        f"saturated outcomes ({len(outcome_inputs)} graphs)": outcomes,
    }


def best_of(fn, mod, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(mod)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; only the pure-Python backend is timed")
    print(f"{'workload':44} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, fn in workloads().items():
        py = best_of(fn, _pykernels, args.repeat)
        if _ckernels is None:
            print(f"{name:44} {py:10.4f} {'-':>10} {'-':>8}")
            continue
        cy = best_of(fn, _ckernels, args.repeat)
        print(f"{name:44} {py:10.4f} {cy:10.4f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
