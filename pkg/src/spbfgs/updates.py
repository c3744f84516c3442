"""Quasi-Newton rank-two updates with a secant penalty.

The central object is the inverse Hessian approximation H.  Instead of
forcing the secant equation H y = s exactly, the penalized update charges
deviations from it at a strength beta in [0, +inf] and blends the classic
BFGS map with the identity map through two scalars

    gamma = 1 / (s.y + 1/beta),    omega = 1 / (s.y + 2/beta),

giving

    H+ = (I - omega s y^T) H (I - omega y s^T)
         + (gamma + omega (gamma - omega) y^T H y) s s^T.

beta = +inf recovers BFGS exactly (gamma = omega = 1/s.y) and beta = 0
returns H unchanged.  Positive definiteness is preserved iff

    s.y > -1/beta,

a strictly weaker requirement than the BFGS curvature condition s.y > 0,
which is what makes the update usable when the measured gradients carry
bounded noise.

The expanded form actually computed is algebraically identical:

    H+ = H - omega (s (Hy)^T + (Hy) s^T) + gamma (1 + omega y.Hy) s s^T.

A direct update of the Hessian approximation B = H^{-1} is provided for
diagnostics; the driver itself only maintains H.

The hot kernel lives in a compiled extension when available, with a numpy
fallback selected at import time (set SPBFGS_PURE_PYTHON=1 to force the
fallback).  Both backends produce exactly symmetric matrices.
"""

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels_py
from .errors import (
    BadDimensionError,
    CurvatureViolationError,
    DegenerateInputError,
    NonFiniteError,
    SingularDenominatorError,
)

_compiled = None
if os.environ.get("SPBFGS_PURE_PYTHON", "") != "1":
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

_kernel = _compiled.penalized_rank_two_update if _compiled is not None else _kernels_py.penalized_rank_two_update


def active_backend():
    """Return 'compiled' or 'python' depending on which kernel is in use."""
    return "python" if _compiled is None else "compiled"


def available_kernels():
    """Mapping of backend name -> kernel function, for benchmarks and tests."""
    out = {"python": _kernels_py.penalized_rank_two_update}
    if _compiled is not None:
        out["compiled"] = _compiled.penalized_rank_two_update
    return out


def symmetrize(a):
    """Symmetric part (a + a.T) / 2."""
    return 0.5 * (a + a.T)


def is_positive_definite(a, pivot_tol=1e-12):
    """Cholesky-style test: success iff every pivot exceeds pivot_tol.

    Runs a plain (unpivoted-order) Cholesky factorization and fails as soon
    as a diagonal pivot is non-finite or <= pivot_tol.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise BadDimensionError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    lower = np.zeros_like(a)
    for k in range(n):
        d = a[k, k] - lower[k, :k] @ lower[k, :k]
        if not math.isfinite(d) or d <= pivot_tol:
            return False
        lower[k, k] = math.sqrt(d)
        if k + 1 < n:
            lower[k + 1:, k] = (a[k + 1:, k] - lower[k + 1:, :k] @ lower[k, :k]) / lower[k, k]
    return True


@dataclass(frozen=True)
class CurvaturePair:
    """Step s = x+ - x and gradient change y = g+ - g, with s.y cached."""

    s: np.ndarray
    y: np.ndarray
    sty: float = field(init=False)

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if s.ndim != 1 or s.shape != y.shape:
            raise BadDimensionError("s and y must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(y))):
            raise NonFiniteError("curvature pair contains non-finite entries")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "sty", float(s @ y))

    @property
    def n(self):
        return self.s.shape[0]


@dataclass(frozen=True)
class PenaltyScalars:
    """Penalty strength beta and the derived update coefficients gamma, omega."""

    beta: float
    gamma: float
    omega: float


def bfgs_curvature_ok(pair):
    """Classic curvature condition s.y > 0."""
    return pair.sty > 0.0


def spbfgs_curvature_ok(pair, beta):
    """Relaxed curvature condition s.y > -1/beta.

    Always true at beta = 0; reduces to s.y > 0 at beta = +inf.
    """
    if beta < 0.0 or math.isnan(beta):
        raise ValueError(f"beta must lie in [0, +inf], got {beta}")
    if beta == 0.0:
        return True
    # -1.0/inf == -0.0, so beta=+inf demands sty strictly positive
    return pair.sty > -1.0 / beta


def compute_penalty_scalars(pair, beta):
    """Scalars (beta, gamma, omega) driving the penalized update.

    Limits are exact: beta = 0 gives gamma = omega = 0 (update is a no-op)
    and beta = +inf gives gamma = omega = 1/s.y (update is BFGS).  The
    curvature condition is NOT enforced here; a pair with s.y <= -1/beta
    yields well-defined scalars whose update simply fails to stay positive
    definite.  Exactly-zero denominators raise SingularDenominatorError.
    """
    if beta < 0.0 or math.isnan(beta):
        raise ValueError(f"beta must lie in [0, +inf], got {beta}")
    if beta == 0.0:
        return PenaltyScalars(0.0, 0.0, 0.0)
    if math.isinf(beta):
        if pair.sty == 0.0:
            raise SingularDenominatorError("s.y = 0 with beta = +inf")
        rho = 1.0 / pair.sty
        return PenaltyScalars(beta, rho, rho)
    d1 = pair.sty + 1.0 / beta
    d2 = pair.sty + 2.0 / beta
    if d1 == 0.0 or d2 == 0.0:
        raise SingularDenominatorError(f"degenerate denominator: s.y = {pair.sty}, beta = {beta}")
    gamma = 1.0 / d1
    omega = 1.0 / d2
    if not (math.isfinite(gamma) and math.isfinite(omega)):
        raise NonFiniteError("penalty scalars overflowed")
    return PenaltyScalars(beta, gamma, omega)


def _checked_square(h, n, name="H"):
    h = np.ascontiguousarray(h, dtype=float)
    if h.shape != (n, n):
        raise BadDimensionError(f"{name} has shape {h.shape}, expected {(n, n)}")
    return h


def bfgs_update(h, pair):
    """Classic BFGS update of the inverse approximation.

    Requires s.y > 0 (raises CurvatureViolationError otherwise); identical,
    coefficient for coefficient, to spbfgs_update at beta = +inf.
    """
    h = _checked_square(h, pair.n)
    if pair.sty <= 0.0:
        raise CurvatureViolationError(f"BFGS update needs s.y > 0, got {pair.sty}")
    rho = 1.0 / pair.sty
    out = _kernel(h, pair.s, pair.y, rho, rho)
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("BFGS update produced non-finite entries")
    return out


def spbfgs_update(h, pair, scalars):
    """Penalized rank-two update of the inverse approximation.

    The result is exactly symmetric.  It is positive definite (given H
    positive definite) iff s.y > -1/beta; callers that need definiteness
    must check spbfgs_curvature_ok first, this routine does not.
    """
    h = _checked_square(h, pair.n)
    if scalars.gamma == 0.0 and scalars.omega == 0.0:
        return h.copy()
    out = _kernel(h, pair.s, pair.y, scalars.gamma, scalars.omega)
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("penalized update produced non-finite entries")
    return out


def spbfgs_inverse_update(b, pair, scalars):
    """Penalized update applied directly to B = H^{-1} (diagnostics only).

    With dhat = (omega - gamma) y.B^{-1}y - gamma/omega the update is

        B+ = B - omega * [ dhat Bs(Bs)^T + (1 - omega s.y)(Bs y^T + y (Bs)^T)
                           + omega (s.Bs) y y^T ] / den,
        den = dhat (omega s.Bs) - (1 - omega s.y)^2.

    B must be positive definite.  beta = 0 returns B unchanged.  A
    degenerate den raises SingularDenominatorError (surfaced, never
    regularized).  The inverse of spbfgs_update's result, computed by an
    unrelated formula, which is what makes it useful as a cross-check.
    """
    b = _checked_square(b, pair.n, name="B")
    beta = scalars.beta
    if beta == 0.0:
        return b.copy()
    s, y, sty = pair.s, pair.y, pair.sty
    bs = b @ s
    sbs = float(s @ bs)
    try:
        binv_y = np.linalg.solve(b, y)
    except np.linalg.LinAlgError as exc:
        raise DegenerateInputError("B must be invertible (and positive definite)") from exc
    ybinvy = float(y @ binv_y)
    omega, gamma = scalars.omega, scalars.gamma
    # gamma/omega computed from its definition to stay exact at beta = +inf
    ratio = (sty + 2.0 / beta) / (sty + 1.0 / beta)
    dhat = (omega - gamma) * ybinvy - ratio
    residual = 1.0 - omega * sty  # equals 2 omega / beta
    den = dhat * (omega * sbs) - residual * residual
    scale = abs(dhat * omega * sbs) + residual * residual
    if not math.isfinite(den) or abs(den) <= 1e-16 * scale:
        raise SingularDenominatorError(f"inverse-form denominator degenerated: {den}")
    num = (
        dhat * np.outer(bs, bs)
        + residual * (np.outer(bs, y) + np.outer(y, bs))
        + (omega * sbs) * np.outer(y, y)
    )
    out = b - (omega / den) * num
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("inverse-form update produced non-finite entries")
    return symmetrize(out)
