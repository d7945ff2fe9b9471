"""Single-threaded solve timing, with and without root polishing.

    python scripts/time_solver.py --trials 100000
"""

import argparse
import time

from p3p.bench import time_batch
from p3p.solver import SolverOptions


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--repeats", type=int, default=3, help="best of N batches per setting")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    res = {}
    for polish in (0, 2):
        opts = SolverOptions(polish_iters=polish)
        res[polish] = min(time_batch(args.trials, opts) for _ in range(args.repeats))
        print(f"polish {polish}: {res[polish] / 1e3:.2f} us/solve", flush=True)
    print(f"polish overhead: {100 * (res[2] / res[0] - 1):.1f}%")
    print(f"wall time: {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
