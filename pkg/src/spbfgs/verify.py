"""Fast seeded self-checks behind the `spbfgs-bench verify` subcommand.

Each check replays the package's central algebraic guarantees on freshly
generated random instances: the closed-form update against the brute-force
penalized QP, the exact BFGS and identity limits, positive definiteness
exactly on the relaxed curvature region, the post-update value identity and
trace bounds, and consistency between the direct and inverse update forms.
The full test suite runs larger versions of the same checks; this entry
point is for quick installation sanity.
"""

import math

import numpy as np

from .diagnostics import trace_bound_b, trace_bound_h
from .oracle import make_weight_matrix, oracle_penalized_qp
from .updates import (
    CurvaturePair,
    PenaltyScalars,
    bfgs_update,
    compute_penalty_scalars,
    is_positive_definite,
    spbfgs_curvature_ok,
    spbfgs_inverse_update,
    spbfgs_update,
)


def random_spd(rng, n, shift=0.5):
    a = rng.standard_normal((n, n))
    m = a @ a.T + shift * np.eye(n)
    return 0.5 * (m + m.T)


def random_pair(rng, n, sign=1):
    """A pair with s.y of the requested sign and |s.y| bounded away from 0."""
    while True:
        s = rng.standard_normal(n)
        y = rng.standard_normal(n)
        if s @ y * sign < 0:
            y = -y
        pair = CurvaturePair(s, y)
        if abs(pair.sty) > 0.1:
            return pair


def check_oracle_equivalence(seed=20, n_instances=20):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n_instances):
        n = int(rng.integers(2, 6))
        h = random_spd(rng, n)
        pair = random_pair(rng, n, sign=1)
        beta = float(rng.choice([0.1, 1.0, 10.0, 1000.0]))
        closed = spbfgs_update(h, pair, compute_penalty_scalars(pair, beta))
        for c in (1.0, 3.7):
            w = make_weight_matrix(pair, c=c)
            ref = oracle_penalized_qp(h, pair, beta, w)
            worst = max(worst, float(np.max(np.abs(closed - ref))))
    return worst <= 1e-8, f"max |closed - oracle| = {worst:.3e} over {n_instances} instances"


def check_limits(seed=21, n_instances=50):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_instances):
        n = int(rng.integers(2, 8))
        h = random_spd(rng, n)
        pair = random_pair(rng, n, sign=1)
        inf_update = spbfgs_update(h, pair, compute_penalty_scalars(pair, math.inf))
        worst = max(worst, float(np.max(np.abs(inf_update - bfgs_update(h, pair)))))
        zero_update = spbfgs_update(h, pair, compute_penalty_scalars(pair, 0.0))
        if not np.array_equal(zero_update, h):
            return False, "beta = 0 did not return H exactly"
    return worst <= 1e-12, f"max |beta=inf - BFGS| = {worst:.3e}"


def check_pd_iff(seed=22, n_instances=200):
    rng = np.random.default_rng(seed)
    for i in range(n_instances):
        n = int(rng.integers(2, 6))
        h = random_spd(rng, n)
        sign = 1 if rng.random() < 0.5 else -1
        pair = random_pair(rng, n, sign=sign)
        if pair.sty > 0:
            beta = float(rng.choice([0.1, 10.0, 1000.0]))
        else:
            # factors straddle the curvature boundary at -1/s.y while
            # avoiding the denominator singularity at exactly -2/s.y
            boundary = -1.0 / pair.sty
            beta = boundary * float(rng.choice([0.25, 0.5, 1.5, 3.0]))
        expected = spbfgs_curvature_ok(pair, beta)
        scalars = compute_penalty_scalars(pair, beta)
        got = is_positive_definite(spbfgs_update(h, pair, scalars))
        if got != expected:
            return False, f"instance {i}: PD = {got}, curvature ok = {expected}"
    return True, f"PD exactly on the curvature region over {n_instances} instances"


def check_identity_and_bounds(seed=23, n_instances=200):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n_instances):
        n = int(rng.integers(2, 6))
        h = random_spd(rng, n)
        pair = random_pair(rng, n, sign=1)
        beta = float(10.0 ** rng.uniform(-2, 3))
        scalars = compute_penalty_scalars(pair, beta)
        hp = spbfgs_update(h, pair, scalars)
        yhy = float(pair.y @ (h @ pair.y))
        yhpy = float(pair.y @ (hp @ pair.y))
        weight = beta * pair.sty / (1.0 + beta * pair.sty)
        expected = weight * pair.sty + (1.0 - weight) * yhy
        worst = max(worst, abs(yhpy - expected) / max(1.0, abs(expected)))
        if np.trace(hp) > trace_bound_h(h, pair, scalars) * (1 + 1e-10) + 1e-10:
            return False, f"instance {i}: trace bound on H+ violated"
        b = np.linalg.inv(h)
        bp = spbfgs_inverse_update(b, pair, scalars)
        if np.trace(bp) > trace_bound_b(b, pair, scalars) * (1 + 1e-10) + 1e-10:
            return False, f"instance {i}: trace bound on B+ violated"
    return worst <= 1e-10, f"max value-identity residual = {worst:.3e}"


def check_inverse_consistency(seed=24, n_instances=20):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_instances):
        n = int(rng.integers(2, 6))
        h = random_spd(rng, n, shift=1.0)
        pair = random_pair(rng, n, sign=1)
        beta = float(rng.choice([0.5, 5.0, 500.0]))
        scalars = compute_penalty_scalars(pair, beta)
        hp = spbfgs_update(h, pair, scalars)
        bp = spbfgs_inverse_update(np.linalg.inv(h), pair, scalars)
        worst = max(worst, float(np.max(np.abs(hp @ bp - np.eye(n)))))
    return worst <= 1e-8, f"max |H+ B+ - I| = {worst:.3e}"


CHECKS = (
    ("closed form matches the penalized QP oracle", check_oracle_equivalence),
    ("beta = +inf is BFGS, beta = 0 is the identity", check_limits),
    ("positive definite exactly on the curvature region", check_pd_iff),
    ("value identity and trace bounds after update", check_identity_and_bounds),
    ("inverse-form update consistent with direct form", check_inverse_consistency),
)


def run_all(write=print):
    """Run every check, emit one line each; True when all pass."""
    all_ok = True
    for label, check in CHECKS:
        ok, detail = check()
        all_ok &= ok
        write(f"{'ok  ' if ok else 'FAIL'} {label}: {detail}")
    return all_ok
