"""``p3p-bench`` command line entry point."""

from __future__ import annotations

import argparse
import sys

from .bench import emit_report, run_experiment, time_batch
from .errors import ConfigError
from .scenegen import SCENARIOS, ScenarioConfig
from .solver import SolverOptions

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3
_POSITION = {"direct": "direct", "lsq": "least_squares"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="p3p-bench", description="Accuracy and timing experiments for the P3P solver.")
    p.add_argument("--scenario", required=True, choices=SCENARIOS)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturbation", type=float, default=0.05)
    p.add_argument("--polish", type=int, default=2, help="Newton iterations on each quartic root")
    p.add_argument("--refine", type=int, default=3,
                   help="joint angle Newton steps for poses that miss the constraints (0 disables)")
    p.add_argument("--position", choices=tuple(_POSITION), default="direct")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True)
    p.add_argument("--time", action="store_true", help="also time a single-threaded batch of solves")
    p.add_argument("--workers", type=int, default=None, help="process count (capped by P3P_BENCH_THREADS)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ScenarioConfig(args.scenario, args.seed, perturbation=args.perturbation)
        try:
            opts = SolverOptions(polish_iters=args.polish, position_method=_POSITION[args.position],
                                 refine_iters=args.refine)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        summary, records = run_experiment(cfg, args.trials, opts, workers=args.workers)
        if args.time:
            summary.mean_solve_ns = time_batch(max(args.trials, 1000), opts, cfg)
    except ConfigError as e:
        print(f"p3p-bench: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        emit_report(summary, records, args.format, args.out)
    except OSError as e:
        print(f"p3p-bench: {e}", file=sys.stderr)
        return EXIT_IO
    print(f"{summary.scenario}: {summary.trials} trials, {summary.n_failed} failed; "
          f"pos mean {summary.mean_pos_err:.3e} median {summary.median_pos_err:.3e}; "
          f"rot mean {summary.mean_rot_err:.3e} median {summary.median_rot_err:.3e}; "
          f"{summary.mean_solve_ns / 1e3:.2f} us/solve")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
