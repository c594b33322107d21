"""Benchmark the compiled kernels against the pure-Python/numpy fallback.

Runs each kernel in-process twice: once with the compiled path (if
available) and once with CLIMKG_DISABLE_NUMBA=1 honored by re-importing
the kernel module in a subprocess, so both paths use identical inputs.

Usage: python3 benchmarks/bench_kernels.py [--n 300] [--dim 384]
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time

_WORDS = (
    "sea surface temperature salinity ice fraction net shortwave flux "
    "precipitation runoff soil moisture zonal meridional wind stress "
    "longwave radiation snow depth heat content anomaly reference height"
).split()


def make_strings(n: int, rng: random.Random) -> list[str]:
    return [
        " ".join(rng.choices(_WORDS, k=rng.randint(3, 9))) for _ in range(n)
    ]


def bench_once(n: int, dim: int, seed: int) -> dict:
    import numpy as np

    from climkg import kernels

    rng = random.Random(seed)
    strings = make_strings(n, rng)
    nprng = np.random.default_rng(seed)
    matrix = nprng.standard_normal((n * 10, dim)).astype(np.float64)
    matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
    query = matrix[0]

    # warmup triggers JIT compilation so it is not timed
    kernels.pairwise_ratio_matrix(strings[:4])
    kernels.cosine_topk(matrix[:16], query, 5)

    t0 = time.perf_counter()
    ratios = kernels.pairwise_ratio_matrix(strings)
    t1 = time.perf_counter()
    for _ in range(50):
        kernels.cosine_topk(matrix, query, 10)
    t2 = time.perf_counter()

    return {
        "backend": "fallback" if (not kernels.USE_NUMBA) else "numba",
        "pairwise_n": n,
        "pairwise_seconds": t1 - t0,
        "pairwise_checksum": float(ratios.sum()),
        "cosine_rows": matrix.shape[0],
        "cosine_seconds_50x": t2 - t1,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=300, help="strings for pairwise bench")
    parser.add_argument("--dim", type=int, default=384)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--_inner", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args._inner:
        print(json.dumps(bench_once(args.n, args.dim, args.seed)))
        return 0

    results = []
    for disable in ("0", "1"):
        env = dict(os.environ, CLIMKG_DISABLE_NUMBA=disable)
        out = subprocess.run(
            [sys.executable, __file__, "--_inner", "--n", str(args.n),
             "--dim", str(args.dim), "--seed", str(args.seed)],
            env=env, capture_output=True, text=True, check=True,
        )
        results.append(json.loads(out.stdout.strip().splitlines()[-1]))

    fast, slow = results
    if fast["pairwise_checksum"] != slow["pairwise_checksum"]:
        print("WARNING: backends disagree on pairwise checksum", file=sys.stderr)
    for res in results:
        print(
            f"{res['backend']:>8}: pairwise {res['pairwise_n']} strings "
            f"{res['pairwise_seconds']:.3f}s | cosine top-k x50 over "
            f"{res['cosine_rows']} rows {res['cosine_seconds_50x']:.3f}s"
        )
    if fast["backend"] != slow["backend"]:
        speedup = slow["pairwise_seconds"] / max(fast["pairwise_seconds"], 1e-9)
        print(f"pairwise speedup ({fast['backend']} vs {slow['backend']}): {speedup:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
