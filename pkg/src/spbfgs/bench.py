"""Experiment harness: seeded sweeps over problems x methods x noise cells.

Accuracy of a run is reported as

    delta_opt = log10(phi_best - phi_star),

where phi_best is the smallest TRUE value measured at any evaluated point
(line-search trials included) and phi_star the problem's known minimum;
gaps at or below 1e-300 are floored to -300.  Per-cell statistics use the
Bessel-corrected sample variance.

Replicate r of a cell draws its noise from a stream derived by hashing
(master_seed, problem, method, cell, r), so results do not depend on
execution order and independent runs may execute in parallel; repeating an
experiment with the same master seed yields a byte-identical summary CSV.

Summary CSV schema (fixed):

    problem,method,eps_f,eps_g,n_runs,mean_dopt,median_dopt,min_dopt,
    max_dopt,var_dopt,mean_iters

In relative noise mode the eps_f/eps_g columns carry the configured
relative factors; the resolved absolute levels scale with |phi(x0)| and
||grad phi(x0)|| per problem.  Optional long-format per-iteration traces
(one row per iteration per run) support convergence and penalty plots.
"""

import csv
import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from .errors import EmptyCellError
from .linesearch import LineSearchConfig
from .noise import NoiseSpec
from .optimizer import RunConfig, minimize, minimize_baseline_bfgs
from .policy import PenaltyPolicy
from .problems import get_problem

METHODS = ("spbfgs", "bfgs")

SUMMARY_COLUMNS = (
    "problem", "method", "eps_f", "eps_g", "n_runs",
    "mean_dopt", "median_dopt", "min_dopt", "max_dopt", "var_dopt", "mean_iters",
)

TRACE_COLUMNS = (
    "problem", "method", "eps_f", "eps_g", "rep", "k", "phi", "grad_norm",
    "f_measured", "alpha", "beta", "sty", "curvature_failed", "trace_h", "evals",
)


def delta_opt(phi_best, phi_star):
    """log10 of the true optimality gap, floored at -300."""
    gap = phi_best - phi_star
    if math.isnan(gap):
        return math.nan
    if gap <= 1e-300:
        return -300.0
    return math.log10(gap)


@dataclass(frozen=True)
class SummaryStats:
    """Per-cell statistics over replicate delta_opt values."""

    n: int
    mean: float
    median: float
    vmin: float
    vmax: float
    var: Optional[float]  # Bessel-corrected; None when n < 2
    mean_iters: float


def summarize(dopts, iters):
    """Statistics over one cell's replicates; raises EmptyCellError on none."""
    if len(dopts) == 0:
        raise EmptyCellError("no runs to summarize")
    if len(dopts) != len(iters):
        raise ValueError("dopts and iters must have equal length")
    arr = np.asarray(dopts, dtype=float)
    var = float(np.var(arr, ddof=1)) if arr.shape[0] > 1 else None
    return SummaryStats(
        n=arr.shape[0],
        mean=float(np.mean(arr)),
        median=float(np.median(arr)),
        vmin=float(np.min(arr)),
        vmax=float(np.max(arr)),
        var=var,
        mean_iters=float(np.mean(np.asarray(iters, dtype=float))),
    )


@dataclass(frozen=True)
class PolicySpec:
    """Bench-level penalty policy, resolved to a PenaltyPolicy per noise cell.

    kind "scaled" sets step_scale = scale / eps_g for the cell's resolved
    absolute gradient noise (falling back to pure BFGS behaviour when
    eps_g = 0, where an infinite penalty is the right limit); all other
    kinds map directly onto PenaltyPolicy.
    """

    kind: str = "scaled"
    scale: float = 1e8
    step_scale: float = 0.0
    offset: float = 1e-10
    threshold: float = 0.0
    beta: float = math.inf
    recovery: str = "skip"
    shrink_factor: float = 2.0
    skip_rule: str = "nonpositive"
    skip_eps: float = 0.0
    skip_zeta: float = 0.0

    def __post_init__(self):
        if self.kind == "scaled":
            if not (self.scale > 0.0 and math.isfinite(self.scale)):
                raise ValueError(f"scaled policy needs finite scale > 0, got {self.scale}")
        else:
            self.resolve(1.0)  # validates the direct kinds eagerly

    def resolve(self, eps_g):
        common = dict(
            recovery=self.recovery,
            shrink_factor=self.shrink_factor,
            skip_rule=self.skip_rule,
            skip_eps=self.skip_eps,
            skip_zeta=self.skip_zeta,
        )
        if self.kind == "scaled":
            if eps_g == 0.0:
                return PenaltyPolicy(kind="constant-infinity", **common)
            return PenaltyPolicy(kind="linear", step_scale=self.scale / eps_g,
                                 offset=self.offset, **common)
        if self.kind == "linear":
            return PenaltyPolicy(kind="linear", step_scale=self.step_scale,
                                 offset=self.offset, **common)
        if self.kind == "thresholded":
            return PenaltyPolicy(kind="thresholded", step_scale=self.step_scale,
                                 threshold=self.threshold, **common)
        if self.kind == "constant":
            return PenaltyPolicy(kind="constant", beta=self.beta, **common)
        if self.kind == "constant-infinity":
            return PenaltyPolicy(kind="constant-infinity", **common)
        raise ValueError(f"unknown policy kind {self.kind!r}")


@dataclass(frozen=True)
class ProblemRef:
    """A built-in problem name plus an optional size override."""

    name: str
    n: Optional[int] = None

    def instantiate(self):
        return get_problem(self.name, self.n)


@dataclass(frozen=True)
class ExperimentSpec:
    problems: Tuple[ProblemRef, ...]
    methods: Tuple[str, ...] = METHODS
    cells: Tuple[NoiseSpec, ...] = (NoiseSpec(0.0, 0.0),)
    noise_mode: str = "absolute"  # or "relative": scales by |phi(x0)|, ||grad phi(x0)||
    replicates: int = 30
    master_seed: int = 0
    budget_evals: Optional[int] = 2000
    budget_iters: Optional[int] = None
    linesearch: LineSearchConfig = LineSearchConfig()
    eps_armijo_auto: bool = True  # eps_armijo = the cell's resolved eps_f
    policy: PolicySpec = PolicySpec()
    out_dir: str = "results"
    record_traces: bool = False
    workers: int = 1

    def __post_init__(self):
        # Accept lists and bare (eps_f, eps_g) pairs; store canonical tuples.
        object.__setattr__(self, "problems", tuple(self.problems))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(
            self,
            "cells",
            tuple(c if isinstance(c, NoiseSpec) else NoiseSpec(*c) for c in self.cells),
        )
        if len(self.problems) == 0:
            raise ValueError("experiment needs at least one problem")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}, expected subset of {METHODS}")
        if len(self.methods) == 0:
            raise ValueError("experiment needs at least one method")
        if self.noise_mode not in ("absolute", "relative"):
            raise ValueError(f"noise_mode must be absolute or relative, got {self.noise_mode!r}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.budget_evals is None and self.budget_iters is None:
            raise ValueError("set budget_evals, budget_iters, or both")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class RunOutcome:
    problem: str
    method: str
    cell: NoiseSpec
    rep: int
    dopt: float
    n_iterations: int
    failed: bool
    trace_rows: Tuple[tuple, ...] = ()


@dataclass
class SummaryRow:
    problem: str
    method: str
    cell: NoiseSpec
    stats: SummaryStats


@dataclass
class ExperimentResult:
    rows: List[SummaryRow] = field(default_factory=list)
    n_runs: int = 0
    n_failed: int = 0
    n_dropped: int = 0  # runs with no finite measurement at all
    summary_path: Optional[str] = None
    traces_path: Optional[str] = None


def run_seed(master_seed, problem_name, method, cell, rep):
    """Deterministic, order-independent seed material for one run."""
    key = f"{master_seed}|{problem_name}|{method}|{cell.eps_f!r}|{cell.eps_g!r}|{rep}"
    digest = hashlib.sha256(key.encode("ascii")).digest()
    words = [int.from_bytes(digest[i:i + 4], "big") for i in range(0, 16, 4)]
    return np.random.SeedSequence(words)


def resolve_cell(problem, cell, noise_mode):
    """The cell's absolute noise levels for this problem."""
    if noise_mode == "absolute":
        return cell
    phi0 = abs(float(problem.f(problem.x0)))
    g0 = float(np.linalg.norm(problem.grad(problem.x0)))
    return NoiseSpec(cell.eps_f * phi0, cell.eps_g * g0)


def run_one(spec, problem_ref, method, cell, rep):
    """Execute a single replicate and reduce it to a RunOutcome."""
    problem = problem_ref.instantiate()
    abs_cell = resolve_cell(problem, cell, spec.noise_mode)
    ls = spec.linesearch
    if spec.eps_armijo_auto:
        ls = replace(ls, eps_armijo=abs_cell.eps_f)
    config = RunConfig(
        policy=spec.policy.resolve(abs_cell.eps_g),
        linesearch=ls,
        noise=abs_cell,
        budget_evals=spec.budget_evals,
        budget_iters=spec.budget_iters,
        seed=run_seed(spec.master_seed, problem.name, method, cell, rep),
    )
    if method == "spbfgs":
        trace = minimize(problem, config)
    else:
        trace = minimize_baseline_bfgs(problem, config)
    rows = ()
    if spec.record_traces:
        rows = tuple(
            (
                problem.name, method, cell.eps_f, cell.eps_g, rep, rec.k, rec.phi,
                rec.grad_norm, rec.f_measured, rec.alpha, rec.beta, rec.sty,
                int(rec.curvature_failed), rec.trace_h, rec.evals_so_far,
            )
            for rec in trace.records
        )
    return RunOutcome(
        problem=problem.name,
        method=method,
        cell=cell,
        rep=rep,
        dopt=delta_opt(trace.phi_best, problem.phi_star),
        n_iterations=trace.n_iterations,
        failed=trace.failed,
        trace_rows=rows,
    )


def _run_job(args):
    spec, (pi, mi, ci, rep) = args
    return run_one(spec, spec.problems[pi], spec.methods[mi], spec.cells[ci], rep)


def _format(value):
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def write_summary_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            st = row.stats
            writer.writerow([
                row.problem, row.method, _format(row.cell.eps_f), _format(row.cell.eps_g),
                st.n, _format(st.mean), _format(st.median), _format(st.vmin),
                _format(st.vmax), _format(st.var), _format(st.mean_iters),
            ])


def write_traces_csv(path, outcomes):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for outcome in outcomes:
            for row in outcome.trace_rows:
                writer.writerow([_format(v) for v in row])


def run_experiment(spec):
    """Run the full sweep, write CSVs under out_dir, return the result.

    SPBFGS_BENCH_OUT_DIR and SPBFGS_BENCH_WORKERS environment variables
    override the corresponding spec fields.
    """
    out_dir = os.environ.get("SPBFGS_BENCH_OUT_DIR", spec.out_dir)
    workers = int(os.environ.get("SPBFGS_BENCH_WORKERS", spec.workers))
    jobs = [
        (pi, mi, ci, rep)
        for pi in range(len(spec.problems))
        for mi in range(len(spec.methods))
        for ci in range(len(spec.cells))
        for rep in range(spec.replicates)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_job, [(spec, job) for job in jobs], chunksize=4))
    else:
        outcomes = [_run_job((spec, job)) for job in jobs]

    result = ExperimentResult(n_runs=len(outcomes))
    by_cell = {}
    for job, outcome in zip(jobs, outcomes):
        by_cell.setdefault(job[:3], []).append(outcome)
        if outcome.failed:
            result.n_failed += 1
    for pi in range(len(spec.problems)):
        for mi in range(len(spec.methods)):
            for ci in range(len(spec.cells)):
                group = by_cell[(pi, mi, ci)]
                kept = [o for o in group if math.isfinite(o.dopt)]
                result.n_dropped += len(group) - len(kept)
                if not kept:
                    continue
                stats = summarize([o.dopt for o in kept], [o.n_iterations for o in kept])
                result.rows.append(
                    SummaryRow(group[0].problem, group[0].method, group[0].cell, stats)
                )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary_path = out / "summary.csv"
    write_summary_csv(summary_path, result.rows)
    result.summary_path = str(summary_path)
    if spec.record_traces:
        traces_path = out / "traces.csv"
        write_traces_csv(traces_path, outcomes)
        result.traces_path = str(traces_path)
    return result
