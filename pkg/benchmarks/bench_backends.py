"""Compare the numba and pure-numpy kernel backends.

Each case calls a public function that routes through one kernel and is
timed under both backends after a warm-up call (which also triggers numba
compilation). Prints one row per case: best-of-``repeat`` seconds for each
backend and the speed-up of numba over numpy.

    python benchmarks/bench_backends.py [--repeat 3] [--quick]
"""

import argparse
import time

import numpy as np

from leafmatch import set_backend
from leafmatch.alignment import frechet_distance
from leafmatch.dce import extract_features
from leafmatch.energy import build_bundle
from leafmatch.geometry import normalize, occlude, resample_uniform
from leafmatch.gnccp import gnccp_optimize
from leafmatch.subgraph import subgraph_match
from leafmatch.synthetic import generate


def _cases(quick):
    items = generate(2, 1, 0)
    full = resample_uniform(normalize(items[0][2]), 1000)
    other = resample_uniform(normalize(items[1][2]), 1000)
    part = resample_uniform(occlude(full, 0.25, 1), 750)
    n_fr = 100 if quick else 200
    n_en = 40 if quick else 100
    p = resample_uniform(part, n_fr).points
    q = resample_uniform(other, n_fr).points
    g1, g2 = extract_features(part, 20), extract_features(full, 20)
    ba = build_bundle(resample_uniform(part, n_en))
    bb = build_bundle(resample_uniform(other, n_en))
    return [
        (f"frechet {n_fr}x{n_fr}", lambda: frechet_distance(p, q)),
        ("resample 1000", lambda: resample_uniform(full, 1000)),
        ("dce k=20 on 1000", lambda: extract_features(full, 20)),
        (f"bundle N={n_en}", lambda: build_bundle(resample_uniform(part, n_en))),
        ("subgraph 20x20", lambda: subgraph_match(g1, g2)),
        (f"gnccp N={n_en}", lambda: gnccp_optimize(ba, bb)),
    ]


def _best(fn, repeat):
    fn()
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)
    cases = _cases(args.quick)
    print(f"{'case':<20}{'numba s':>12}{'numpy s':>12}{'speed-up':>10}")
    prev = set_backend("numba")
    try:
        for name, fn in cases:
            t = {}
            for backend in ("numba", "numpy"):
                set_backend(backend)
                t[backend] = _best(fn, args.repeat)
            print(f"{name:<20}{t['numba']:>12.4f}{t['numpy']:>12.4f}{t['numpy'] / t['numba']:>9.1f}x")
    finally:
        set_backend(prev)


if __name__ == "__main__":
    main()
