import numpy as np
import pytest

from qlandscape import backend, _fallback
from qlandscape.dynamics import PiecewiseControl, objective
from qlandscape.problem import ReducedProblem
from qlandscape.scan import ScanConfig, run_scan
from qlandscape.su2 import EX, EY

_speedups = pytest.importorskip("qlandscape._speedups",
                                reason="compiled kernel not built")


def random_args(rng, n=20, k=15):
    amps = np.ascontiguousarray(rng.standard_normal((n, k)))
    args = (rng.normal(), rng.normal(),          # vx, vy
            *rng.uniform(-0.6, 0.6, size=3),     # r
            *rng.normal(size=3),                 # a0
            rng.uniform(0.0, 1.0),               # Tr(A)/2
            rng.uniform(0.01, 0.1))              # dt
    return args, amps


class TestBackendAgreement:
    def test_objectives_match(self):
        rng = np.random.default_rng(60)
        for _ in range(25):
            args, amps = random_args(rng)
            a = _fallback.objectives_uniform(*args, amps)
            b = _speedups.objectives_uniform(*args, amps)
            assert np.abs(a - b).max() < 1e-12

    def test_matches_general_propagator(self):
        # Both kernels reproduce the dense per-control objective.
        rng = np.random.default_rng(61)
        for _ in range(10):
            T = rng.uniform(0.3, 2.0)
            k = int(rng.integers(1, 12))
            rp = ReducedProblem(
                v=np.array([rng.normal(), rng.normal(), 0.0]),
                r=rng.uniform(-0.5, 0.5, size=3),
                a0=rng.normal(size=3), T=T, a_trace=rng.uniform(0.0, 2.0))
            amps = np.ascontiguousarray(rng.standard_normal((4, k)))
            args = (rp.v[0], rp.v[1], *rp.r, *rp.a0, 0.5 * rp.a_trace, T / k)
            for kern in (_fallback, _speedups):
                vals = kern.objectives_uniform(*args, amps)
                for row, expected in zip(amps, vals):
                    f = PiecewiseControl.uniform(T, row)
                    assert abs(objective(rp, f) - expected) < 1e-12

    def test_scan_counts_identical_across_backends(self):
        cfg = ScanConfig(T=np.pi / 12, grid_phi=5, grid_psi=5, samples=40,
                         intervals=30, seed=77)
        pure = run_scan(cfg, kernel=_fallback)
        fast = run_scan(cfg, kernel=_speedups)
        for a, b in zip(pure.cells, fast.cells):
            assert a.count_below == b.count_below
            assert a.label == b.label
            assert abs(a.J0 - b.J0) < 1e-13

    def test_read_only_input_accepted(self):
        amps = np.ascontiguousarray(np.random.default_rng(0).standard_normal((3, 4)))
        amps.flags.writeable = False
        args = (1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.5, 0.1)
        a = _fallback.objectives_uniform(*args, amps)
        b = _speedups.objectives_uniform(*args, amps)
        assert np.abs(a - b).max() < 1e-14


class TestSelection:
    def test_default_prefers_compiled(self):
        assert backend.get("auto").NAME == "compiled"

    def test_explicit_names(self):
        assert backend.get("pure") is _fallback
        assert backend.get("compiled") is _speedups

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("QLANDSCAPE_BACKEND", "pure")
        assert backend.get() is _fallback
        assert backend.name() == "pure"

    def test_unknown_backend(self):
        with pytest.raises(ValueError, match="unknown backend"):
            backend.get("vectorized")

    def test_fallback_validates_shape(self):
        with pytest.raises(ValueError, match="2-D"):
            _fallback.objectives_uniform(1, 0, 0, 1, 0, 1, 0, 0, 0.5, 0.1,
                                         np.zeros(4))
