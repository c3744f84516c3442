"""Backtracking line search with the noise-relaxed sufficient decrease test."""

import math

import numpy as np
import pytest

from spbfgs.linesearch import LineSearchConfig, armijo_ok, backtrack


class TestArmijo:
    def test_plain_sufficient_decrease(self):
        cfg = LineSearchConfig(c1=0.5)
        # threshold is f_ref + c1 alpha g.p = 10 - 0.5
        assert armijo_ok(9.5, 10.0, 1.0, -1.0, cfg)
        assert not armijo_ok(9.6, 10.0, 1.0, -1.0, cfg)

    def test_noise_slack_is_two_epsilon(self):
        cfg = LineSearchConfig(c1=0.5, eps_armijo=0.25)
        # slack adds exactly 2 * 0.25
        assert armijo_ok(10.0, 10.0, 1.0, -1.0, cfg)
        assert not armijo_ok(10.01, 10.0, 1.0, -1.0, cfg)

    @pytest.mark.parametrize("bad", [math.inf, math.nan])
    def test_nonfinite_trial_rejected(self, bad):
        cfg = LineSearchConfig()
        assert not armijo_ok(bad, 10.0, 1.0, -1.0, cfg)


class TestBacktrack:
    def test_accepts_alpha0_on_easy_decrease(self):
        cfg = LineSearchConfig(alpha0=1.0)
        f = lambda z: float(z @ z)
        x = np.array([2.0, 0.0])
        p = np.array([-2.0, 0.0])
        alpha, f_new, trials = backtrack(f, x, p, f(x), float(2 * x @ p), cfg)
        assert alpha == 1.0
        assert f_new == 0.0
        assert trials == 1

    def test_halves_until_acceptance(self):
        cfg = LineSearchConfig(alpha0=1.0, tau=0.5, c1=1e-4)
        f = lambda z: float(z @ z)
        x = np.array([1.0])
        p = np.array([-4.0])  # overshoots; alpha = 1, 0.5 fail, 0.25 lands at 0
        gdotp = float(2 * x @ p)
        alpha, f_new, trials = backtrack(f, x, p, f(x), gdotp, cfg)
        assert alpha == 0.25
        assert trials == 3
        assert f_new == 0.0

    def test_exhaustion_returns_zero_step(self):
        cfg = LineSearchConfig(max_backtracks=5)
        f = lambda z: float(z @ z)
        x = np.array([1.0])
        p = np.array([1.0])  # ascent direction with a lying slope
        alpha, f_new, trials = backtrack(f, x, p, f(x), -1.0, cfg)
        assert alpha == 0.0
        assert f_new == f(x)
        assert trials == 5

    def test_max_backtracks_counts_trials(self):
        calls = []
        cfg = LineSearchConfig(max_backtracks=7)

        def f(z):
            calls.append(z.copy())
            return math.inf

        alpha, _, trials = backtrack(f, np.zeros(1), np.ones(1), 0.0, -1.0, cfg)
        assert alpha == 0.0
        assert trials == 7
        assert len(calls) == 7

    def test_nonfinite_trials_skipped_over(self):
        # f overflows at the full step but is fine at half of it
        cfg = LineSearchConfig()

        def f(z):
            return math.inf if z[0] > 0.75 else float((z[0] - 0.6) ** 2)

        x = np.array([0.0])
        p = np.array([1.0])
        alpha, f_new, trials = backtrack(f, x, p, f(x), -1.2, cfg)
        assert alpha == 0.5
        assert f_new == pytest.approx(0.01)
        assert trials == 2

    def test_noisy_acceptance_uses_slack(self):
        # a flat function is acceptable only thanks to the 2 eps slack
        cfg = LineSearchConfig(eps_armijo=0.5)
        f = lambda z: 1.0
        alpha, f_new, trials = backtrack(f, np.zeros(1), np.ones(1), 1.0, -0.001, cfg)
        assert alpha == 1.0
        assert trials == 1


class TestConfigValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"alpha0": 0.0},
            {"alpha0": -1.0},
            {"tau": 0.0},
            {"tau": 1.0},
            {"c1": 0.0},
            {"c1": 1.0},
            {"eps_armijo": -0.1},
            {"max_backtracks": 0},
        ],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            LineSearchConfig(**kwargs)
