"""Quasi-Newton driver for minimization under bounded noise.

One loop serves both methods.  Each iteration measures a fresh noisy value
at the current iterate, backtracks along p = -H g, measures the gradient at
the accepted point, forms the pair (s, y), and updates H: the penalized
update under the configured policy, or the classic BFGS update guarded by
the baseline admission rule.  An exhausted line search keeps the iterate
(alpha = 0, step skipped without consulting the policy) and the iteration
still counts.

Termination is budget-only: a fixed number of iterations, or of noisy
function evaluations (line-search trials included, gradients free).  There
is no gradient-norm stop; with noisy measurements such a test is
meaningless near the noise floor.

The trace records, per iterate, a noise-free side channel (true value and
true gradient norm) that the driver never lets the method itself see.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import EvaluationBudgetError, NonFiniteError
from .linesearch import LineSearchConfig, backtrack
from .noise import NoiseSpec, NoisyOracle
from .policy import SKIP, UPDATE, PenaltyPolicy, baseline_update_ok, propose_beta, resolve_beta
from .updates import CurvaturePair, compute_penalty_scalars, is_positive_definite, spbfgs_update


@dataclass(frozen=True)
class RunConfig:
    policy: PenaltyPolicy = PenaltyPolicy(kind="constant-infinity")
    linesearch: LineSearchConfig = LineSearchConfig()
    noise: NoiseSpec = NoiseSpec()
    budget_evals: Optional[int] = None
    budget_iters: Optional[int] = None
    seed: int = 0
    h0: Optional[np.ndarray] = None  # initial inverse approximation, identity when None
    record_hessian_diagnostics: bool = False

    def __post_init__(self):
        if self.budget_evals is None and self.budget_iters is None:
            raise ValueError("set budget_evals, budget_iters, or both")
        if self.budget_evals is not None and self.budget_evals < 1:
            raise ValueError(f"budget_evals must be >= 1, got {self.budget_evals}")
        if self.budget_iters is not None and self.budget_iters < 0:
            raise ValueError(f"budget_iters must be >= 0, got {self.budget_iters}")


@dataclass
class IterationRecord:
    """State at iterate k, plus the step taken from it (None fields = no step)."""

    k: int
    x: np.ndarray
    f_measured: float  # noisy value measured at x_k at iteration start
    phi: float  # true value (side channel)
    grad_norm: float  # true gradient norm (side channel)
    evals_so_far: int
    alpha: Optional[float] = None
    f_accepted: Optional[float] = None  # noisy value at the accepted trial
    n_trials: Optional[int] = None
    beta: Optional[float] = None
    sty: Optional[float] = None
    action: Optional[str] = None
    curvature_failed: bool = False
    trace_h: Optional[float] = None  # trace of H after this iteration's update
    pd_ok: Optional[bool] = None  # only with record_hessian_diagnostics


@dataclass
class RunTrace:
    problem: str
    method: str
    records: List[IterationRecord] = field(default_factory=list)
    phi_best: float = math.inf
    x_best: Optional[np.ndarray] = None
    n_iterations: int = 0
    n_f_evals: int = 0
    n_g_evals: int = 0
    n_curvature_failures: int = 0
    n_zero_steps: int = 0
    failed: bool = False
    failure: Optional[str] = None

    @property
    def final_record(self):
        return self.records[-1]


def _decide(policy, pair, baseline):
    """(beta, action, curvature_failed) for this pair under the method's rule."""
    if baseline:
        if baseline_update_ok(policy, pair):
            return math.inf, UPDATE, False
        return 0.0, SKIP, True
    proposed = propose_beta(policy, pair.s)
    beta, action = resolve_beta(policy, pair, proposed)
    curvature_failed = action == SKIP or beta != proposed
    return beta, action, curvature_failed


def _run(problem, config, method, baseline):
    oracle = NoisyOracle(problem, config.noise, config.seed, config.budget_evals)
    trace = RunTrace(problem=problem.name, method=method)
    n = problem.n
    x = np.array(problem.x0, dtype=float, copy=True)
    if config.h0 is None:
        h = np.eye(n)
    else:
        h = np.array(config.h0, dtype=float, copy=True)
        if h.shape != (n, n):
            raise ValueError(f"h0 must be {n}x{n}, got {h.shape}")

    def state_record(k, f_measured):
        g_true = problem.grad(x)
        return IterationRecord(
            k=k,
            x=x.copy(),
            f_measured=f_measured,
            phi=float(problem.f(x)),
            grad_norm=float(np.linalg.norm(g_true)),
            evals_so_far=oracle.n_f_evals,
        )

    def finalize():
        trace.phi_best = oracle.phi_best
        trace.x_best = oracle.x_best
        trace.n_f_evals = oracle.n_f_evals
        trace.n_g_evals = oracle.n_g_evals
        return trace

    try:
        f_meas = oracle.f(x)
    except EvaluationBudgetError:
        return finalize()
    g = oracle.grad(x)
    k = 0
    while True:
        rec = state_record(k, f_meas)
        trace.records.append(rec)
        if config.budget_iters is not None and k >= config.budget_iters:
            break
        p = -(h @ g)
        gdotp = float(g @ p)
        try:
            alpha, f_acc, n_trials = backtrack(oracle.f, x, p, f_meas, gdotp, config.linesearch)
        except EvaluationBudgetError:
            rec.evals_so_far = oracle.n_f_evals
            break
        rec.alpha = alpha
        rec.f_accepted = f_acc
        rec.n_trials = n_trials
        if alpha > 0.0:
            x_new = x + alpha * p
        else:
            x_new = x
        g_new = oracle.grad(x_new)
        if not (np.all(np.isfinite(x_new)) and np.all(np.isfinite(g_new)) and math.isfinite(f_acc)):
            trace.failed = True
            trace.failure = f"non-finite state at iteration {k}"
            rec.evals_so_far = oracle.n_f_evals
            break
        if alpha == 0.0:
            # exhausted line search: no step, update skipped without
            # consulting the policy, iteration still counts
            rec.sty = 0.0
            rec.action = SKIP
            trace.n_zero_steps += 1
        else:
            pair = CurvaturePair(x_new - x, g_new - g)
            beta, action, curvature_failed = _decide(config.policy, pair, baseline)
            rec.beta = beta
            rec.sty = pair.sty
            rec.action = action
            rec.curvature_failed = curvature_failed
            if curvature_failed:
                trace.n_curvature_failures += 1
            if action == UPDATE:
                try:
                    h = spbfgs_update(h, pair, compute_penalty_scalars(pair, beta))
                except NonFiniteError:
                    trace.failed = True
                    trace.failure = f"non-finite update at iteration {k}"
                    rec.evals_so_far = oracle.n_f_evals
                    break
        rec.trace_h = float(np.trace(h))
        if config.record_hessian_diagnostics:
            rec.pd_ok = is_positive_definite(h)
        rec.evals_so_far = oracle.n_f_evals
        trace.n_iterations = k + 1
        x, g = x_new, g_new
        k += 1
        try:
            f_meas = oracle.f(x)
        except EvaluationBudgetError:
            trace.records.append(state_record(k, math.nan))
            break
    return finalize()


def minimize(problem, config):
    """Minimize with the penalized update under config.policy."""
    return _run(problem, config, method="spbfgs", baseline=False)


def minimize_baseline_bfgs(problem, config):
    """Minimize with the classic update guarded by config.policy.skip_rule."""
    return _run(problem, config, method="bfgs", baseline=True)


def fixed_step_descent(problem, noise, alpha, n_iters, seed):
    """Gradient descent with a constant step on noisy gradients (H = I).

    Exists to exercise the fixed-step theory: returns (xs, phis) where
    xs[k] is iterate k (shape (n_iters+1, n)) and phis[k] its true value.
    No function measurements are made, only gradients.
    """
    if alpha <= 0.0 or not math.isfinite(alpha):
        raise ValueError(f"alpha must be positive and finite, got {alpha}")
    oracle = NoisyOracle(problem, noise, seed)
    x = np.array(problem.x0, dtype=float, copy=True)
    xs = np.empty((n_iters + 1, problem.n))
    phis = np.empty(n_iters + 1)
    for k in range(n_iters):
        xs[k] = x
        phis[k] = problem.f(x)
        x = x - alpha * oracle.grad(x)
    xs[n_iters] = x
    phis[n_iters] = problem.f(x)
    return xs, phis
