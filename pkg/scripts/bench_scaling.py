"""Measure per-iteration training cost against sample size.

Runs the bench subcommand in a fresh single-threaded process (so BLAS
parallelism cannot blur the scaling) and prints the doubling ratios; a
quadratic per-iteration cost puts both near 4.
"""

import argparse
import os
import subprocess
import sys


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-list", default="500,1000,2000")
    parser.add_argument("--rank", type=int, default=2)
    parser.add_argument("--iters", type=int, default=20)
    args = parser.parse_args()

    env = {k: v for k, v in os.environ.items()
           if k not in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                        "MKL_NUM_THREADS")}
    env["SIGP_THREADS"] = "1"
    result = subprocess.run(
        [sys.executable, "-m", "sigp.cli", "bench",
         "--n-list", args.n_list, "--rank", str(args.rank),
         "--iters", str(args.iters)],
        capture_output=True, text=True, env=env, check=True,
    )
    print(result.stdout, end="")
    rows = [line.split(",") for line in result.stdout.strip().splitlines()[1:]]
    sizes = [int(r[0]) for r in rows]
    times = [float(r[2]) for r in rows]
    for (n_small, t_small), (n_big, t_big) in zip(zip(sizes, times),
                                                  zip(sizes[1:], times[1:])):
        print(f"per-iteration time ratio {n_big}/{n_small}: {t_big / t_small:.2f}")


if __name__ == "__main__":
    main()
