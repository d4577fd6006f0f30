"""Compiled kernels vs the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--no-search]

Times the Walsh and Moebius butterflies, the orthogonality scan over a
block of rule pairs, and an end-to-end d=5 search under each backend.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ocasbox import _pykernels
from ocasbox.search import SearchConfig, _candidates, shared_store

try:
    from ocasbox import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def scan_case(d, lefts):
    store = shared_store(d)
    left, right = _candidates(store, SearchConfig(d))
    return store, left[:lefts], right


def search_seconds(pure: bool, d: int) -> float:
    env = dict(os.environ, OCASBOX_PURE_PYTHON="1" if pure else "0")
    code = (
        "import time; from ocasbox.search import SearchConfig, run_search, shared_store;"
        f"shared_store({d}); t=time.perf_counter(); run_search(SearchConfig({d}));"
        "print(time.perf_counter()-t)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--no-search", action="store_true", help="skip the end-to-end search timing")
    args = ap.parse_args(argv)

    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled extension not built; timing the fallback only", file=sys.stderr)

    rng = np.random.default_rng(0)
    signs = 1 - 2 * rng.integers(0, 2, (4096, 256)).astype(np.int64)
    bits = rng.integers(0, 2, (4096, 256)).astype(np.uint8)
    d5 = scan_case(5, 256)
    d6 = scan_case(6, 2)

    cases = [
        ("fwht 4096 x 256", lambda m: m.fwht(signs)),
        ("mobius 4096 x 256", lambda m: m.mobius(bits)),
        ("scan d=5, all pairs", lambda m: m.scan_block(d5[0].scan, d5[0].truth, d5[1], d5[2], d5[0].b, True)),
        ("scan d=6, 2 left rules", lambda m: m.scan_block(d6[0].scan, d6[0].truth, d6[1], d6[2], d6[0].b, True)),
    ]
    rows = []
    for label, fn in cases:
        times = {name: best_of(lambda: fn(mod), args.repeat) for name, mod in backends}
        rows.append((label, times))
    if not args.no_search:
        times = {"python": search_seconds(True, 5)}
        if _ckernels is not None:
            times["cython"] = search_seconds(False, 5)
        rows.append(("search d=5 end to end", times))

    print(f"{'case':28s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for label, times in rows:
        py, cy = times["python"], times.get("cython")
        cy_txt = f"{cy:11.4f}" if cy is not None else f"{'-':>11s}"
        speed = f"{py / cy:7.1f}x" if cy else f"{'-':>8s}"
        print(f"{label:28s} {py:11.4f} {cy_txt} {speed}")


if __name__ == "__main__":
    main()
