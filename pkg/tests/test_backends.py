"""Kernel backend selection and cross-backend agreement."""

import os
import subprocess
import sys

import numpy as np
import pytest

from spbfgs.updates import (
    CurvaturePair,
    active_backend,
    available_kernels,
    compute_penalty_scalars,
    spbfgs_update,
)


class TestSelection:
    def test_active_backend_is_listed(self):
        assert active_backend() in available_kernels()

    def test_python_backend_always_present(self):
        assert "python" in available_kernels()

    def test_env_var_forces_pure_python(self):
        code = (
            "import spbfgs.updates as u\n"
            "print(u.active_backend())\n"
        )
        env = dict(os.environ, SPBFGS_PURE_PYTHON="1")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "python"


class TestAgreement:
    def test_kernels_produce_identical_updates(self):
        kernels = available_kernels()
        if "compiled" not in kernels:
            pytest.skip("compiled kernel not built")
        rng = np.random.default_rng(123)
        for _ in range(50):
            n = int(rng.integers(1, 9))
            a = rng.standard_normal((n, n))
            h = a @ a.T + 0.5 * np.eye(n)
            s = rng.standard_normal(n)
            y = rng.standard_normal(n)
            pair = CurvaturePair(s, y)
            if pair.sty <= 0.0:
                continue
            scalars = compute_penalty_scalars(pair, float(10.0 ** rng.uniform(-2, 4)))
            results = {
                name: np.asarray(kernel(h.copy(), pair.s, pair.y,
                                        scalars.gamma, scalars.omega))
                for name, kernel in kernels.items()
            }
            scale = max(1.0, float(np.abs(results["python"]).max()))
            np.testing.assert_allclose(results["compiled"], results["python"],
                                       rtol=0.0, atol=1e-13 * scale)

    def test_updates_are_exactly_symmetric(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(2, 8))
            a = rng.standard_normal((n, n))
            h = a @ a.T + np.eye(n)
            s = rng.standard_normal(n)
            y = s + 0.1 * rng.standard_normal(n)
            pair = CurvaturePair(s, y)
            if pair.sty <= 0.0:
                continue
            out = spbfgs_update(h, pair, compute_penalty_scalars(pair, 10.0))
            assert np.array_equal(out, out.T)
