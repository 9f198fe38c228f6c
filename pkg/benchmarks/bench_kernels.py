"""Compare the numba kernels against the pure-numpy fallback.

The backend is fixed at import time by the RELUHOM_NUMBA environment flag,
so this script re-runs itself once per backend and prints a comparison.

Usage: python3 benchmarks/bench_kernels.py [--points N] [--bits N]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def workload(n_points, n_bits):
    import numpy as np

    from reluhom import _kernels, metric, persistence
    from reluhom.network import BitVector

    rng = np.random.default_rng(0)
    out = {"backend": "numba" if _kernels.USING_NUMBA else "numpy"}

    # hamming matrix over packed bit vectors
    vectors = [
        BitVector.from01("".join(rng.choice(["0", "1"], n_bits)))
        for _ in range(n_points)
    ]
    metric.hamming_matrix(vectors[:4])  # warm-up (numba JIT compile)
    t0 = time.perf_counter()
    dm = metric.hamming_matrix(vectors)
    out["hamming_s"] = time.perf_counter() - t0

    # boundary reduction on a torus-like Euclidean matrix
    t = np.linspace(0, 2 * np.pi, 10, endpoint=False)
    grid = np.array([[a, b] for a in t for b in t])
    pts = np.column_stack(
        [
            (2 + np.cos(grid[:, 0])) * np.cos(grid[:, 1]),
            (2 + np.cos(grid[:, 0])) * np.sin(grid[:, 1]),
            np.sin(grid[:, 0]),
        ]
    )
    d = np.linalg.norm(pts[:, None] - pts[None, :], axis=2)
    np.fill_diagonal(d, 0.0)
    f = persistence.build_filtration(d, max_dim=2, t_max=2.0)
    out["n_simplices"] = sum(1 for _ in f.simplices())
    persistence.compute_barcodes(
        persistence.build_filtration(d[:12, :12], max_dim=2)
    )  # warm-up
    t0 = time.perf_counter()
    persistence.compute_barcodes(f)
    out["reduce_s"] = time.perf_counter() - t0
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--bits", type=int, default=512)
    args = ap.parse_args()

    if os.environ.get("_BENCH_CHILD"):
        print(json.dumps(workload(args.points, args.bits)))
        return

    results = {}
    for flag in ("1", "0"):
        env = dict(os.environ, RELUHOM_NUMBA=flag, _BENCH_CHILD="1")
        proc = subprocess.run(
            [sys.executable, __file__, "--points", str(args.points),
             "--bits", str(args.bits)],
            capture_output=True, text=True, env=env, check=True,
        )
        r = json.loads(proc.stdout.splitlines()[-1])
        results[r["backend"]] = r

    nb, np_ = results["numba"], results["numpy"]
    print(f"hamming matrix  ({args.points} vectors x {args.bits} bits)")
    print(f"  numba  {nb['hamming_s']:8.4f} s")
    print(f"  numpy  {np_['hamming_s']:8.4f} s   "
          f"(numba {np_['hamming_s'] / nb['hamming_s']:.1f}x)")
    print(f"boundary reduction  ({nb['n_simplices']} simplices)")
    print(f"  numba  {nb['reduce_s']:8.4f} s")
    print(f"  numpy  {np_['reduce_s']:8.4f} s   "
          f"(numba {np_['reduce_s'] / nb['reduce_s']:.1f}x)")


if __name__ == "__main__":
    main()
