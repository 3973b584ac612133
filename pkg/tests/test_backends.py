import math
import os
import subprocess
import sys

import numpy as np
import pytest

from cuetrunc import _backend

BACKENDS = _backend.available_backends()
PAIRS = list(BACKENDS.items())


def rel_gap(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


@pytest.mark.parametrize("name", list(BACKENDS))
def test_backend_exposes_kernel_surface(name):
    mod = BACKENDS[name]
    for fn in ("tau", "gammainc_p", "gammainc_p_log", "gammainc_p_many",
               "betainc_reg", "beta_factor_logcdf"):
        assert callable(getattr(mod, fn))
    assert mod.NAME in ("pure", "compiled")


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")
class TestParity:
    def test_gammainc(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a = math.exp(rng.uniform(math.log(0.5), math.log(1e5)))
            z = a * math.exp(rng.uniform(-1.5, 1.5))
            vals = [m.gammainc_p(a, z) for m in BACKENDS.values()]
            logs = [m.gammainc_p_log(a, z) for m in BACKENDS.values()]
            assert rel_gap(vals[0], vals[1]) <= 1e-12
            assert abs(logs[0] - logs[1]) <= 1e-9 * max(1.0, abs(logs[0]))

    def test_gammainc_many(self):
        z = np.linspace(0.0, 400.0, 20001)
        outs = [m.gammainc_p_many(191.0, z) for m in BACKENDS.values()]
        assert np.max(np.abs(outs[0] - outs[1])) <= 1e-12

    def test_betainc(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            a, b = np.exp(rng.uniform(0.0, math.log(2e4), size=2))
            x = rng.uniform(0.001, 0.999)
            vals = [m.betainc_reg(x, a, b) for m in BACKENDS.values()]
            assert rel_gap(vals[0], vals[1]) <= 1e-10

    @pytest.mark.parametrize("p,k,r", [
        (2, 2, 0.7071067811865476),
        (28, 6, 0.3),          # deep tail, per-factor path
        (460, 40, 0.97),
        (31892, 108, 0.9988),
        (999995, 5, 1.0 - 1.2e-7),
        (180, 600, 0.62),      # large depth, fraction path
    ])
    def test_beta_factor_logcdf(self, p, k, r):
        vals = [m.beta_factor_logcdf(r, p, k) for m in BACKENDS.values()]
        assert abs(vals[0] - vals[1]) <= 1e-9 * max(1.0, abs(vals[0]))


def test_env_forces_pure_fallback():
    env = dict(os.environ, CUETRUNC_PURE="1",
               PYTHONPATH=os.pathsep.join(sys.path))
    out = subprocess.run(
        [sys.executable, "-c", "import cuetrunc; print(cuetrunc.BACKEND)"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "pure"


@pytest.mark.skipif("compiled" not in BACKENDS, reason="compiled extension not built")
def test_compiled_selected_by_default():
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(sys.path))
    env.pop("CUETRUNC_PURE", None)
    out = subprocess.run(
        [sys.executable, "-c", "import cuetrunc; print(cuetrunc.BACKEND)"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "compiled"


def test_benchmark_runs_quickly():
    bench = os.path.join(os.path.dirname(__file__), "..", "benchmarks",
                         "bench_kernels.py")
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(sys.path))
    out = subprocess.run([sys.executable, bench, "--quick"],
                         capture_output=True, text=True, env=env, check=True)
    assert "beta_factor_logcdf" in out.stdout
    assert "gammainc_p_many" in out.stdout
