"""Exact 2x2 Hermitian/unitary algebra in the Pauli basis.

Every operator is represented as c0*I + h.sigma with a real scalar c0 and a
real 3-vector h.  Matrix exponentials use the SU(2) closed form, never a
series or Pade approximation, so downstream propagation is exact to
roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

EX = np.array([1.0, 0.0, 0.0])
EY = np.array([0.0, 1.0, 0.0])
EZ = np.array([0.0, 0.0, 1.0])

for _m in (SIGMA_X, SIGMA_Y, SIGMA_Z, IDENTITY, PAULI, EX, EY, EZ):
    _m.flags.writeable = False

#: absolute per-entry tolerance for Hermiticity validation
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Hermitian2:
    """Hermitian 2x2 operator c0*I + h.sigma.

    The trace is 2*c0 and the eigenvalues are c0 +/- |h|.
    """

    c0: float
    h: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Hermitian2):
            return NotImplemented
        return self.c0 == other.c0 and np.array_equal(self.h, other.h)

    def __post_init__(self):
        h = np.array(self.h, dtype=float)
        if h.shape != (3,):
            raise ValueError(f"Pauli vector must have shape (3,), got {h.shape}")
        if not (np.isfinite(self.c0) and np.all(np.isfinite(h))):
            raise ValueError("Hermitian2 coefficients must be finite")
        h.flags.writeable = False
        object.__setattr__(self, "c0", float(self.c0))
        object.__setattr__(self, "h", h)

    def matrix(self) -> np.ndarray:
        """Dense 2x2 complex representation."""
        return self.c0 * IDENTITY + np.tensordot(self.h, PAULI, axes=1)

    def __add__(self, other: "Hermitian2") -> "Hermitian2":
        return Hermitian2(self.c0 + other.c0, self.h + other.h)

    def __sub__(self, other: "Hermitian2") -> "Hermitian2":
        return Hermitian2(self.c0 - other.c0, self.h - other.h)

    def __rmul__(self, scalar: float) -> "Hermitian2":
        return Hermitian2(scalar * self.c0, scalar * self.h)


def pauli_decompose(m) -> Hermitian2:
    """Decompose a dense Hermitian 2x2 matrix into c0*I + h.sigma.

    c0 = Tr(M)/2 and h_k = Tr(M sigma_k)/2; recomposition reproduces M
    exactly to roundoff.  Rejects matrices whose max entry asymmetry
    |M - M^dagger| exceeds ``HERMITICITY_TOL``.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    asym = float(np.abs(m - m.conj().T).max())
    if asym > HERMITICITY_TOL:
        raise ValueError(
            f"matrix is not Hermitian: max asymmetry {asym:.3e} exceeds "
            f"{HERMITICITY_TOL:.0e}"
        )
    c0 = float(m.trace().real) / 2.0
    h = np.einsum("kij,ji->k", PAULI, m).real / 2.0
    return Hermitian2(c0, h)


def pauli_vector(m) -> np.ndarray:
    """Tr(M sigma) as a real 3-vector (twice the Pauli part of M)."""
    return 2.0 * pauli_decompose(m).h


def expi(op: Hermitian2, t: float) -> np.ndarray:
    """exp(-i*(c0*I + h.sigma)*t) via the closed form.

    Returns e^{-i c0 t} (cos(|h|t) I - i sin(|h|t) (h.sigma)/|h|); for
    |h| < 1e-300 the rotation factor is the identity.
    """
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    phase = np.exp(-1j * op.c0 * t)
    hnorm = float(np.linalg.norm(op.h))
    if hnorm < 1e-300:
        return phase * np.eye(2, dtype=complex)
    theta = hnorm * t
    ns = np.tensordot(op.h / hnorm, PAULI, axes=1)
    return phase * (np.cos(theta) * IDENTITY - 1j * np.sin(theta) * ns)


def _exp_divided_difference(xp: complex, xm: complex) -> complex:
    # (e^xp - e^xm)/(xp - xm), stable for xp ~ xm
    d = 0.5 * (xp - xm)
    mid = 0.5 * (xp + xm)
    if abs(d) < 1e-5:
        d2 = d * d
        return np.exp(mid) * (1.0 + d2 / 6.0 + d2 * d2 / 120.0)
    return np.exp(mid) * np.sinh(d) / d


def expi_frechet(op: Hermitian2, direction: Hermitian2, t: float) -> np.ndarray:
    """Derivative of expi(op + s*direction, t) with respect to s at s = 0.

    Uses the spectral representation of the generator: with projectors P+-
    onto the eigenspaces of op and X = -i*op*t, the derivative is
    sum_{jk} f(x_j, x_k) P_j E P_k where E = -i*direction*t and f is the
    divided difference of exp.
    """
    e = -1j * t * direction.matrix()
    hnorm = float(np.linalg.norm(op.h))
    if hnorm < 1e-12:
        return np.exp(-1j * op.c0 * t) * e
    ns = np.tensordot(op.h / hnorm, PAULI, axes=1)
    pp = 0.5 * (IDENTITY + ns)
    pm = 0.5 * (IDENTITY - ns)
    xp = -1j * (op.c0 + hnorm) * t
    xm = -1j * (op.c0 - hnorm) * t
    fpm = _exp_divided_difference(xp, xm)
    return (
        np.exp(xp) * (pp @ e @ pp)
        + np.exp(xm) * (pm @ e @ pm)
        + fpm * (pp @ e @ pm + pm @ e @ pp)
    )


def cross_z(u, v) -> float:
    """z-component of the cross product, u_x v_y - u_y v_x."""
    return float(u[0] * v[1] - u[1] * v[0])


def rotate_about_z(u, angle: float) -> np.ndarray:
    """u*cos(angle) + (u x e_z)*sin(angle); the z-component is unchanged."""
    c = np.cos(angle)
    s = np.sin(angle)
    return np.array([u[0] * c + u[1] * s, u[1] * c - u[0] * s, u[2]])
