import numpy as np
import pytest

from qlandscape.dynamics import PiecewiseControl, objective
from qlandscape.errors import OutOfRegimeError
from qlandscape.problem import (
    ControlProblem,
    ReducedProblem,
    critical_time,
    exceptional_control,
    make_preset,
    reduce_problem,
    vectors,
)
from qlandscape.su2 import EX, EY, EZ, Hermitian2, cross_z

from oracles import I2, SX, SY, SZ, dense_objective, expm_piecewise

SZ_OP = Hermitian2(0.0, EZ)
SX_OP = Hermitian2(0.0, EX)


class TestExceptionalControl:
    def test_planar_coupling_gives_zero(self):
        rng = np.random.default_rng(30)
        for _ in range(10):
            vx, vy = rng.normal(size=2)
            if vx == 0.0 and vy == 0.0:
                continue
            v = Hermitian2(0.0, (vx, vy, 0.0))
            assert exceptional_control(SZ_OP, v) == 0.0

    def test_tilted_free_hamiltonian(self):
        h0 = Hermitian2(0.0, (1.0, 0.0, 1.0))  # sigma_z + sigma_x
        assert exceptional_control(h0, SX_OP) == -1.0

    def test_parallel_coupling(self):
        assert exceptional_control(SZ_OP, SZ_OP) == -1.0

    def test_zero_coupling_rejected(self):
        with pytest.raises(OutOfRegimeError, match="V = 0"):
            exceptional_control(SZ_OP, Hermitian2(0.0, (0.0, 0.0, 0.0)))

    def test_scaling_invariance(self):
        # f0 scales as 1/c under V -> cV, so f0*V is invariant.
        rng = np.random.default_rng(31)
        for _ in range(20):
            h0 = Hermitian2(rng.normal(), rng.normal(size=3))
            v = Hermitian2(rng.normal(), rng.normal(size=3))
            c = rng.uniform(0.1, 10.0)
            f0 = exceptional_control(h0, v)
            f0c = exceptional_control(h0, c * v)
            assert abs(f0c - f0 / c) < 1e-12 * max(1.0, abs(f0))


class TestCriticalTime:
    def test_canonical(self):
        assert critical_time(SZ_OP, SX_OP) == np.pi

    def test_double_splitting(self):
        assert critical_time(Hermitian2(0.0, 2.0 * EZ), SX_OP) == np.pi / 2

    def test_trace_shift_invariant(self):
        # Identity shifts of H0 drop out (for traceless V, where the
        # long-horizon guarantee applies).
        assert critical_time(Hermitian2(3.0, EZ), SX_OP) == np.pi
        rng = np.random.default_rng(32)
        for _ in range(20):
            h0 = Hermitian2(rng.normal(), rng.normal(size=3))
            v = Hermitian2(0.0, rng.normal(size=3))
            shifted = Hermitian2(h0.c0 + rng.normal(), h0.h)
            assert abs(critical_time(h0, v) - critical_time(shifted, v)) < 1e-12

    def test_vanishing_shifted_operator(self):
        with pytest.raises(OutOfRegimeError, match="infinite"):
            critical_time(SX_OP, SX_OP)  # f0 = -1 cancels H0 exactly


def random_reducible_problem(rng):
    h = rng.normal(size=3)
    h /= np.linalg.norm(h)
    h *= rng.uniform(0.5, 3.0)
    vh = rng.normal(size=3)
    vh -= (vh @ h) / (h @ h) * h  # Tr(H0 V) = 0
    r = rng.normal(size=3)
    r *= rng.uniform(0.0, 1.0) / np.linalg.norm(r)
    return ControlProblem(
        H0=Hermitian2(rng.normal(), h),
        V=Hermitian2(0.0, vh),
        rho0=Hermitian2(0.5, 0.5 * r),
        A=Hermitian2(rng.normal(), rng.normal(size=3)),
        T=rng.uniform(0.3, 2.0),
    )


def corresponding_reduced_control(problem, control):
    scale = float(np.linalg.norm(problem.H0.h))
    return PiecewiseControl(scale * control.breakpoints,
                            control.amplitudes / scale)


class TestReduce:
    def test_identity_reduction(self):
        p = ControlProblem(H0=SZ_OP, V=SX_OP,
                           rho0=Hermitian2(0.5, -0.5 * EY),
                           A=Hermitian2(0.5, 0.5 * EX), T=1.7)
        rp = reduce_problem(p)
        assert np.abs(rp.v - EX).max() < 1e-14
        assert np.abs(rp.r - (-EY)).max() < 1e-14
        assert np.abs(rp.a0 - EX).max() < 1e-14
        assert rp.T == 1.7
        assert rp.a_trace == 1.0

    def test_time_rescaling(self):
        p = ControlProblem(H0=Hermitian2(0.0, 3.0 * EZ), V=SX_OP,
                           rho0=Hermitian2(0.5, -0.5 * EY),
                           A=Hermitian2(0.5, 0.5 * EX), T=1.0)
        rp = reduce_problem(p)
        assert np.abs(rp.v - EX).max() < 1e-14
        assert abs(rp.T - 3.0) < 1e-14

    def test_basis_rotation(self):
        p = ControlProblem(H0=SX_OP, V=SZ_OP,
                           rho0=Hermitian2(0.5, (0.0, 0.0, 0.5)),
                           A=Hermitian2(0.5, (0.5, 0.0, 0.0)), T=1.0)
        rp = reduce_problem(p)
        assert abs(rp.v[2]) < 1e-14
        assert abs(np.linalg.norm(rp.v) - 1.0) < 1e-14

    def test_objective_preserved(self):
        rng = np.random.default_rng(33)
        for _ in range(25):
            p = random_reducible_problem(rng)
            rp = reduce_problem(p)
            f = PiecewiseControl.uniform(p.T, rng.normal(size=rng.integers(1, 7)))
            u = expm_piecewise(p.H0.matrix(), p.V.matrix(),
                               f.breakpoints, f.amplitudes)
            expected = dense_objective(p.rho0.matrix(), p.A.matrix(), u)
            got = objective(rp, corresponding_reduced_control(p, f))
            assert abs(got - expected) < 1e-12

    def test_nonzero_trace_coupling_rejected(self):
        p = ControlProblem(H0=SZ_OP, V=Hermitian2(1.0, EX),
                           rho0=Hermitian2(0.5, np.zeros(3)),
                           A=Hermitian2(0.5, 0.5 * EX), T=1.0)
        with pytest.raises(OutOfRegimeError, match="Tr V"):
            reduce_problem(p)

    def test_nonorthogonal_coupling_rejected(self):
        p = ControlProblem(H0=SZ_OP, V=Hermitian2(0.0, EZ),
                           rho0=Hermitian2(0.5, np.zeros(3)),
                           A=Hermitian2(0.5, 0.5 * EX), T=1.0)
        with pytest.raises(OutOfRegimeError, match="Tr\\(H0 V\\)"):
            reduce_problem(p)

    def test_degenerate_free_hamiltonian_rejected(self):
        p = ControlProblem(H0=Hermitian2(2.0, np.zeros(3)), V=SX_OP,
                           rho0=Hermitian2(0.5, np.zeros(3)),
                           A=Hermitian2(0.5, 0.5 * EX), T=1.0)
        with pytest.raises(OutOfRegimeError, match="no preferred basis"):
            reduce_problem(p)


class TestVectors:
    def test_spin_rotation_parameters(self):
        rp = reduce_problem(make_preset("spin-rotation", T=0.9, vx=0.3, vy=0.4))
        pv = vectors(rp)
        assert np.abs(pv.r - (-EY)).max() < 1e-14
        assert np.abs(pv.a0 - EX).max() < 1e-14
        assert np.abs(pv.h0 - EZ).max() == 0.0
        assert np.abs(pv.v - np.array([0.3, 0.4, 0.0])).max() < 1e-14

    def test_horizon_rotated_target(self):
        for T in np.linspace(0.05, 3.0, 9):
            pv = vectors(reduce_problem(make_preset("spin-rotation", T=T)))
            expected = np.array([np.cos(2 * T), -np.sin(2 * T), 0.0])
            assert np.abs(pv.aT - expected).max() < 1e-12
            assert abs(pv.aT @ EZ - pv.a0 @ EZ) < 1e-14
            assert abs(np.linalg.norm(pv.aT) - np.linalg.norm(pv.a0)) < 1e-12

    def test_trivial_observable_rejected(self):
        rp = ReducedProblem(v=EX, r=EY, a0=np.zeros(3), T=1.0, a_trace=1.0)
        with pytest.raises(OutOfRegimeError, match="trivial observable"):
            vectors(rp)

    def test_angle_difference_is_v_to_r(self):
        rng = np.random.default_rng(34)
        for _ in range(40):
            rp = ReducedProblem(
                v=np.append(rng.normal(size=2), 0.0),
                r=np.append(rng.normal(size=2), 0.0),
                a0=np.append(rng.normal(size=2), 0.0),
                T=rng.uniform(0.1, 3.0),
            )
            pv = vectors(rp)
            expected = np.arctan2(cross_z(rp.v, rp.r), float(rp.v @ rp.r))
            diff = (pv.alpha - pv.beta - expected) % (2.0 * np.pi)
            assert min(diff, 2.0 * np.pi - diff) < 1e-12

    def test_phi_v(self):
        pv = vectors(ReducedProblem(v=np.array([-1.0, 1.0, 0.0]), r=EY,
                                    a0=EX, T=1.0))
        assert abs(pv.phi_v - 3.0 * np.pi / 4.0) < 1e-15


class TestValidation:
    def test_reduced_problem_requires_planar_v(self):
        with pytest.raises(ValueError, match="planar"):
            ReducedProblem(v=EZ, r=EY, a0=EX, T=1.0)

    def test_reduced_problem_requires_nonzero_v(self):
        with pytest.raises(ValueError, match="nonzero"):
            ReducedProblem(v=np.zeros(3), r=EY, a0=EX, T=1.0)

    def test_control_problem_trace(self):
        with pytest.raises(ValueError, match="unit trace"):
            ControlProblem(H0=SZ_OP, V=SX_OP, rho0=Hermitian2(0.6, np.zeros(3)),
                           A=Hermitian2(0.5, 0.5 * EX), T=1.0)

    def test_control_problem_positivity(self):
        with pytest.raises(ValueError, match="positive semidefinite"):
            ControlProblem(H0=SZ_OP, V=SX_OP, rho0=Hermitian2(0.5, (0.9, 0.0, 0.0)),
                           A=Hermitian2(0.5, 0.5 * EX), T=1.0)

    def test_control_problem_needs_coupling(self):
        with pytest.raises(ValueError, match="Pauli part"):
            ControlProblem(H0=SZ_OP, V=Hermitian2(1.0, np.zeros(3)),
                           rho0=Hermitian2(0.5, np.zeros(3)),
                           A=Hermitian2(0.5, 0.5 * EX), T=1.0)


class TestPresets:
    def test_landau_zener(self):
        p = make_preset("landau-zener", T=2.0)
        assert np.array_equal(p.V.h, EX)
        assert np.array_equal(p.H0.h, EZ)

    def test_scan_default_geometry(self):
        p = make_preset("scan-default", T=1.0, phi=0.25, psi=1.5)
        rp = reduce_problem(p)
        assert np.abs(rp.r - EY).max() < 1e-14
        assert abs(rp.v[0] - np.cos(0.25)) < 1e-15
        assert abs(rp.a0[1] - np.sin(1.5)) < 1e-15
        assert rp.a_trace == 1.0

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown preset"):
            make_preset("nonsense", T=1.0)

    def test_spin_rotation_needs_coupling(self):
        with pytest.raises(ValueError, match="coupling"):
            make_preset("spin-rotation", T=1.0, vx=0.0, vy=0.0)
