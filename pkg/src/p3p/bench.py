"""Monte Carlo accuracy and timing harness.

A run draws ``trials`` instances from one scenario, solves each, and keeps the
solution closest to truth. Per-trial records and an aggregate summary with
log10 error histograms are written as CSV or JSON.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigError, DegenerateConfiguration
from .scenegen import GroundTruthInstance, ScenarioConfig, generate
from .so3 import rotation_angle_error
from .solver import PoseSolution, SolverOptions, solve

SENTINEL = sys.float_info.max
HIST_EDGES = tuple(10.0 ** k for k in range(-18, 1))  # 1e-18 .. 1
CSV_HEADER = ("index", "n_solutions", "pos_err", "rot_err", "solve_ns")
THREADS_ENV = "P3P_BENCH_THREADS"
WARMUP_SOLVES = 1000


@dataclass(frozen=True)
class TrialRecord:
    index: int
    n_solutions: int
    pos_err: float
    rot_err: float
    solve_ns: int


@dataclass
class SummaryReport:
    scenario: str
    trials: int
    seed: int
    perturbation: float
    n_failed: int
    mean_pos_err: float
    median_pos_err: float
    max_pos_err: float
    mean_rot_err: float
    median_rot_err: float
    max_rot_err: float
    pos_hist: list[int]
    rot_hist: list[int]
    mean_solve_ns: float
    options: dict = field(default_factory=dict)
    hist_edges: list[float] = field(default_factory=lambda: list(HIST_EDGES))

    # fields that depend on the machine rather than the inputs
    TIMING_FIELDS = ("mean_solve_ns",)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SummaryReport":
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


def error_metrics(solutions: Sequence[PoseSolution], truth: GroundTruthInstance) -> tuple[float, float]:
    """(position error, rotation error) of the solution nearest truth by their sum."""
    best = (SENTINEL, SENTINEL)
    best_sum = math.inf
    for s in solutions:
        pe = float(np.linalg.norm(np.asarray(s.position) - truth.true_position))
        re = rotation_angle_error(s.rotation, truth.true_rotation)
        if pe + re < best_sum:
            best, best_sum = (pe, re), pe + re
    return best


def log_histogram(values: Sequence[float]) -> list[int]:
    """Counts per decade: [<1e-18, [1e-18,1e-17), ..., [1e-1,1), >=1]."""
    v = np.asarray(values, dtype=float)
    return np.bincount(np.searchsorted(HIST_EDGES, v, side="right"), minlength=len(HIST_EDGES) + 1).tolist()


def _solve_trial(cfg: ScenarioConfig, index: int, opts: SolverOptions) -> TrialRecord:
    inst = generate(cfg, index)
    t0 = time.perf_counter_ns()
    try:
        sols = solve(inst.triad, opts)
    except DegenerateConfiguration:
        sols = []
    ns = time.perf_counter_ns() - t0
    pe, re = error_metrics(sols, inst)
    return TrialRecord(index, len(sols), pe, re, ns)


def _solve_chunk(args) -> list[TrialRecord]:
    cfg, start, stop, opts = args
    return [_solve_trial(cfg, i, opts) for i in range(start, stop)]


def worker_count(requested: int | None = None) -> int:
    n = requested or os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError as e:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {cap!r}") from e
    return max(1, n)


def iter_trials(cfg: ScenarioConfig, trials: int, opts: SolverOptions,
                workers: int | None = None) -> Iterator[TrialRecord]:
    """Trial records in index order, computed in parallel when allowed."""
    n = worker_count(workers)
    if n == 1 or trials < 2000:
        for i in range(trials):
            yield _solve_trial(cfg, i, opts)
        return
    step = max(500, trials // (8 * n))
    chunks = [(cfg, a, min(a + step, trials), opts) for a in range(0, trials, step)]
    with ProcessPoolExecutor(max_workers=n) as ex:
        for recs in ex.map(_solve_chunk, chunks):
            yield from recs


def summarize(cfg: ScenarioConfig, opts: SolverOptions, records: Sequence[TrialRecord]) -> SummaryReport:
    ok = [r for r in records if r.n_solutions > 0]
    pos = np.array([r.pos_err for r in ok])
    rot = np.array([r.rot_err for r in ok])

    def stats(x):
        if x.size == 0:
            return SENTINEL, SENTINEL, SENTINEL
        return float(x.mean()), float(np.median(x)), float(x.max())

    mp, medp, maxp = stats(pos)
    mr, medr, maxr = stats(rot)
    return SummaryReport(
        scenario=cfg.scenario,
        trials=len(records),
        seed=int(cfg.seed),
        perturbation=float(cfg.perturbation),
        n_failed=len(records) - len(ok),
        mean_pos_err=mp, median_pos_err=medp, max_pos_err=maxp,
        mean_rot_err=mr, median_rot_err=medr, max_rot_err=maxr,
        pos_hist=log_histogram([r.pos_err for r in records]),
        rot_hist=log_histogram([r.rot_err for r in records]),
        mean_solve_ns=float(np.mean([r.solve_ns for r in records])),
        options=dataclasses.asdict(opts),
    )


def run_experiment(cfg: ScenarioConfig, trials: int, opts: SolverOptions | None = None,
                   workers: int | None = None) -> tuple[SummaryReport, list[TrialRecord]]:
    if not isinstance(cfg, ScenarioConfig):
        raise ConfigError(f"expected ScenarioConfig, got {type(cfg).__name__}")
    if not isinstance(trials, int) or trials < 1:
        raise ConfigError(f"trials must be a positive integer, got {trials!r}")
    opts = opts or SolverOptions()
    records = list(iter_trials(cfg, trials, opts, workers))
    return summarize(cfg, opts, records), records


def time_batch(trials: int, opts: SolverOptions | None = None, cfg: ScenarioConfig | None = None) -> float:
    """Mean wall-clock nanoseconds per solve over fresh pre-generated instances."""
    if trials < 1000:
        raise ConfigError("time_batch needs at least 1000 trials")
    opts = opts or SolverOptions()
    cfg = cfg or ScenarioConfig("nominal", 0)
    triads = [generate(cfg, i).triad for i in range(trials + WARMUP_SOLVES)]
    for t in triads[trials:]:
        solve(t, opts)
    timed = triads[:trials]
    t0 = time.perf_counter_ns()
    for t in timed:
        solve(t, opts)
    return (time.perf_counter_ns() - t0) / trials


def _g17(x: float) -> str:
    return "%.17g" % x


def emit_report(summary: SummaryReport, records: Sequence[TrialRecord], fmt: str, path) -> Path:
    """Write per-trial CSV or a JSON summary (with records) to ``path``."""
    path = Path(path)
    try:
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(CSV_HEADER)
                for r in records:
                    w.writerow((r.index, r.n_solutions, _g17(r.pos_err), _g17(r.rot_err), r.solve_ns))
        elif fmt == "json":
            doc = {"summary": summary.to_dict(),
                   "records": [dataclasses.astuple(r) for r in records]}
            with path.open("w") as fh:
                json.dump(doc, fh, indent=1)
                fh.write("\n")
        else:
            raise ConfigError(f"unknown format {fmt!r}")
    except OSError as e:
        raise OSError(e.errno, f"cannot write report to {path}: {e.strerror}") from e
    return path


def load_report(path) -> tuple[SummaryReport | None, list[TrialRecord]]:
    """Read back what :func:`emit_report` wrote. CSV files carry no summary."""
    path = Path(path)
    with path.open() as fh:
        if path.suffix == ".csv" or fh.read(1) != "{":
            fh.seek(0)
            rows = list(csv.DictReader(fh))
            return None, [TrialRecord(int(r["index"]), int(r["n_solutions"]), float(r["pos_err"]),
                                      float(r["rot_err"]), int(r["solve_ns"])) for r in rows]
        fh.seek(0)
        doc = json.load(fh)
    return SummaryReport.from_dict(doc["summary"]), [TrialRecord(*r) for r in doc["records"]]
