"""Control problems, their canonical reduced form, and the Bloch-frame
parameter vectors.

A general problem (H0, V, rho0, A, T) with Tr V = 0 and Tr(H0 V) = 0 is
reduced, by diagonalizing the traceless part of H0 and rescaling time, to
dynamics generated by sigma_z + f(t)(v_x sigma_x + v_y sigma_y).  All
landscape analysis then runs on the reduced data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRegimeError
from .su2 import EY, EZ, Hermitian2, cross_z, pauli_decompose, rotate_about_z

REDUCIBLE_TOL = 1e-10


@dataclass(frozen=True)
class ControlProblem:
    """Full problem data: free Hamiltonian H0, interaction V, initial state
    rho0 (unit trace, positive semidefinite), target observable A, and
    horizon T (energy units with hbar = 1)."""

    H0: Hermitian2
    V: Hermitian2
    rho0: Hermitian2
    A: Hermitian2
    T: float

    def __post_init__(self):
        if abs(2.0 * self.rho0.c0 - 1.0) > 1e-12:
            raise ValueError(f"rho0 must have unit trace, got {2.0 * self.rho0.c0!r}")
        lam_min = self.rho0.c0 - float(np.linalg.norm(self.rho0.h))
        if lam_min < -1e-12:
            raise ValueError(f"rho0 is not positive semidefinite (lambda_min = {lam_min!r})")
        if np.linalg.norm(self.V.h) == 0.0:
            raise ValueError("interaction V must have a nonzero Pauli part")
        if not (np.isfinite(self.T) and self.T > 0.0):
            raise ValueError(f"horizon T must be positive, got {self.T!r}")
        object.__setattr__(self, "T", float(self.T))


def _readonly(vec) -> np.ndarray:
    v = np.array(vec, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    v.flags.writeable = False
    return v


@dataclass(frozen=True)
class ReducedProblem:
    """Canonical-form problem: dynamics sigma_z + f(t) v.sigma with planar v.

    r is the initial Bloch vector Tr(rho0 sigma), a0 the target vector
    Tr(A sigma), and a_trace = Tr(A) (needed so objective values match the
    original problem's).  Time is in rescaled units.
    """

    v: np.ndarray
    r: np.ndarray
    a0: np.ndarray
    T: float
    a_trace: float = 1.0

    def __post_init__(self):
        v = _readonly(self.v)
        if abs(v[2]) > 1e-12:
            raise ValueError(f"coupling vector must be planar, got v_z = {v[2]!r}")
        if np.linalg.norm(v) == 0.0:
            raise ValueError("coupling vector must be nonzero")
        if not (np.isfinite(self.T) and self.T > 0.0):
            raise ValueError(f"horizon T must be positive, got {self.T!r}")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "r", _readonly(self.r))
        object.__setattr__(self, "a0", _readonly(self.a0))
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "a_trace", float(self.a_trace))


@dataclass(frozen=True)
class ProblemVectors:
    """Bloch-frame parameters of a reduced problem.

    aT is the target vector carried to the horizon, aT = rotate_about_z(a0,
    2T); alpha and beta are the signed planar angles from v to a0 and from
    r to a0 (counterclockwise positive, viewed from +z), so that alpha -
    beta is the signed angle from v to r.
    """

    r: np.ndarray
    a0: np.ndarray
    aT: np.ndarray
    v: np.ndarray
    h0: np.ndarray
    alpha: float
    beta: float
    phi_v: float
    T: float


def exceptional_control(H0: Hermitian2, V: Hermitian2) -> float:
    """The unique constant control -Tr(H0 V)/Tr(V^2) that can be both
    critical and non-regular; the only trap candidate at small horizons."""
    tr_v2 = 2.0 * (V.c0 * V.c0 + float(V.h @ V.h))
    if tr_v2 <= 0.0:
        raise OutOfRegimeError("exceptional control is undefined for V = 0")
    tr_h0v = 2.0 * (H0.c0 * V.c0 + float(H0.h @ V.h))
    return -tr_h0v / tr_v2 + 0.0  # normalize -0.0


def critical_time(H0: Hermitian2, V: Hermitian2) -> float:
    """pi over the spectral norm of H0 - (Tr H0 / 2) I + f0 V.

    Beyond this horizon every extremum of the objective is global.  For a
    Hermitian c I + g.sigma the spectral norm is |c| + |g|.
    """
    f0 = exceptional_control(H0, V)
    c = f0 * V.c0
    g = H0.h + f0 * V.h
    norm = abs(c) + float(np.linalg.norm(g))
    if norm < 1e-12:
        raise OutOfRegimeError(
            "critical time is infinite: the shifted operator H0 - (Tr H0/2) I + f0 V vanishes"
        )
    return np.pi / norm


def _eigenbasis_phase_fixed(h: np.ndarray) -> np.ndarray:
    """Unitary whose columns are the +/- eigenvectors of (h/|h|).sigma,
    with phases fixed so the largest component of each column is real
    positive (deterministic basis choice)."""
    n = h / np.linalg.norm(h)
    m = np.array(
        [[n[2], n[0] - 1j * n[1]], [n[0] + 1j * n[1], -n[2]]], dtype=complex
    )
    _, vecs = np.linalg.eigh(m)  # ascending eigenvalues (-1, +1)
    w = vecs[:, ::-1]
    for col in range(2):
        pivot = w[np.argmax(np.abs(w[:, col])), col]
        w[:, col] *= np.conj(pivot) / abs(pivot)
    return w


def reduce_problem(p: ControlProblem) -> ReducedProblem:
    """Bring a problem with Tr V = 0 and Tr(H0 V) = 0 to canonical form.

    Diagonalizes the traceless part of H0, rescales time by s = |Bloch(H0)|
    so the free generator is exactly sigma_z, and transforms V, rho0, A
    into that basis.  Objective values are preserved: a control f on the
    original problem corresponds to the reduced control with breakpoints
    multiplied by s and amplitudes divided by s.

    Raises OutOfRegimeError when Tr V or Tr(H0 V) is nonzero beyond
    ``REDUCIBLE_TOL`` (such problems fall outside the canonical form) or
    when H0 has no traceless part (no preferred basis).
    """
    tr_v = 2.0 * p.V.c0
    tr_h0v = 2.0 * (p.H0.c0 * p.V.c0 + float(p.H0.h @ p.V.h))
    if abs(tr_v) > REDUCIBLE_TOL:
        raise OutOfRegimeError(f"not reducible: Tr V = {tr_v!r} is nonzero")
    if abs(tr_h0v) > REDUCIBLE_TOL:
        raise OutOfRegimeError(f"not reducible: Tr(H0 V) = {tr_h0v!r} is nonzero")
    scale = float(np.linalg.norm(p.H0.h))
    if scale < 1e-12:
        raise OutOfRegimeError(
            "no preferred basis: the free Hamiltonian has no traceless part"
        )
    w = _eigenbasis_phase_fixed(p.H0.h)
    wd = w.conj().T

    def transformed(op: Hermitian2) -> Hermitian2:
        return pauli_decompose(wd @ op.matrix() @ w)

    v = transformed(p.V).h
    v = np.array([v[0], v[1], 0.0])  # v_z vanishes exactly when Tr(H0 V) = 0
    r = 2.0 * transformed(p.rho0).h
    a0 = 2.0 * transformed(p.A).h
    return ReducedProblem(v=v, r=r, a0=a0, T=scale * p.T, a_trace=2.0 * p.A.c0)


def vectors(rp: ReducedProblem) -> ProblemVectors:
    """Extract the Bloch-frame vectors and angles of a reduced problem.

    Raises OutOfRegimeError for a trivial observable (zero Pauli part),
    for which no direction is defined.
    """
    a0 = rp.a0
    if np.linalg.norm(a0) < 1e-14:
        raise OutOfRegimeError("trivial observable: A has no Pauli part")
    aT = rotate_about_z(a0, 2.0 * rp.T)
    alpha = float(np.arctan2(cross_z(rp.v, a0), float(rp.v @ a0)))
    beta = float(np.arctan2(cross_z(rp.r, a0), float(rp.r @ a0)))
    phi_v = float(np.arctan2(rp.v[1], rp.v[0]))
    return ProblemVectors(
        r=rp.r, a0=a0, aT=aT, v=rp.v, h0=EZ.copy(),
        alpha=alpha, beta=beta, phi_v=phi_v, T=rp.T,
    )


PRESET_NAMES = ("spin-rotation", "landau-zener", "scan-default")


def make_preset(name: str, T: float, vx: float = 1.0, vy: float = 0.0,
                phi: float = 0.0, psi: float = 0.0) -> ControlProblem:
    """Named problem presets.

    spin-rotation: rho0 = (1 - sigma_y)/2, A = (1 + sigma_x)/2, planar
    coupling (vx, vy); rotates spin from -y to +x.
    landau-zener: H = sigma_z + f sigma_x, spin-up start, spin-down target.
    scan-default: r = e_y with unit planar v and a0 at angles phi and psi.
    """
    sz = Hermitian2(0.0, (0.0, 0.0, 1.0))
    if name == "spin-rotation":
        if vx == 0.0 and vy == 0.0:
            raise ValueError("spin-rotation preset needs a nonzero coupling (vx, vy)")
        return ControlProblem(
            H0=sz,
            V=Hermitian2(0.0, (vx, vy, 0.0)),
            rho0=Hermitian2(0.5, (0.0, -0.5, 0.0)),
            A=Hermitian2(0.5, (0.5, 0.0, 0.0)),
            T=T,
        )
    if name == "landau-zener":
        return ControlProblem(
            H0=sz,
            V=Hermitian2(0.0, (1.0, 0.0, 0.0)),
            rho0=Hermitian2(0.5, (0.0, 0.0, 0.5)),
            A=Hermitian2(0.5, (0.0, 0.0, -0.5)),
            T=T,
        )
    if name == "scan-default":
        return ControlProblem(
            H0=sz,
            V=Hermitian2(0.0, (np.cos(phi), np.sin(phi), 0.0)),
            rho0=Hermitian2(0.5, 0.5 * EY),
            A=Hermitian2(0.5, (0.5 * np.cos(psi), 0.5 * np.sin(psi), 0.0)),
            T=T,
        )
    raise ValueError(f"unknown preset {name!r}; choose one of {PRESET_NAMES}")
