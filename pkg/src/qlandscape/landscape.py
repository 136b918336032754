"""Landscape analysis: domain classification, trap-free conditions, saddle
probing, and the span-rank regularity check.

The planar parameter space splits into four sign quadrants of the two
cross-product invariants

    Phi = (v x r)_z (v x a)_z      Psi = (r x a)_z

evaluated with the horizon-rotated target vector a = aT.  In D_III and
D_IV (where Phi * Psi < 0) the exceptional control f = 0 is a saddle for
every horizon, which ``probe_saddle`` certifies constructively with
two-bump variations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dynamics import (
    PiecewiseControl,
    hessian_kernel_at_zero,
    kernel_direction,
    objective,
)
from .errors import OutOfRegimeError
from .problem import ProblemVectors, ReducedProblem, vectors
from .su2 import PAULI, cross_z, expi, pauli_decompose, Hermitian2

#: half-width of the classification boundary band on Phi and Psi
BOUNDARY_TOL = 1e-10
#: planarity tolerance on the z-components of r, a, v
PLANAR_TOL = 1e-10


class DomainLabel(Enum):
    """Sign quadrant of (Phi, Psi); BOUNDARY when either is within tolerance
    of zero, where no classification claim is made."""

    D_I = "D1"
    D_II = "D2"
    D_III = "D3"
    D_IV = "D4"
    BOUNDARY = "B"

    @property
    def short(self) -> str:
        return self.value


@dataclass(frozen=True)
class TrapFreeVerdict:
    """Outcome of the trap-free condition checks.

    reason is one of NonPlanar (some z-component is nonzero, trap-free for
    any horizon), SaddleDomain (the horizon-dependent product condition
    held at the given T), SmallTCondition (the T-independent product is
    negative, so some horizon threshold exists below which the problem is
    trap-free), or Inconclusive.  details carries every evaluated quantity.
    """

    reason: str
    details: dict

    def as_dict(self) -> dict:
        return {"reason": self.reason, "details": dict(self.details)}


@dataclass(frozen=True)
class SaddleProbeReport:
    """Result of certifying a saddle with a pair of bump variations."""

    t1: float
    t2: float
    epsilon: float
    ascent_pair: tuple
    descent_pair: tuple
    J0: float
    J_up: float
    J_down: float
    verdict: str

    def as_dict(self) -> dict:
        return {
            "t1": self.t1,
            "t2": self.t2,
            "epsilon": self.epsilon,
            "ascent_pair": list(self.ascent_pair),
            "descent_pair": list(self.descent_pair),
            "J0": self.J0,
            "J_up": self.J_up,
            "J_down": self.J_down,
            "verdict": self.verdict,
        }


def domain_invariants(pv: ProblemVectors) -> tuple[float, float]:
    """(Phi, Psi) = ((v x r)_z (v x a)_z, (r x a)_z), with a = aT."""
    phi = cross_z(pv.v, pv.r) * cross_z(pv.v, pv.aT)
    psi = cross_z(pv.r, pv.aT)
    return phi, psi


def _max_z(pv: ProblemVectors) -> float:
    return max(abs(float(pv.r[2])), abs(float(pv.aT[2])), abs(float(pv.v[2])))


def classify(pv: ProblemVectors) -> DomainLabel:
    """Sign-quadrant label of (Phi, Psi); BOUNDARY within ``BOUNDARY_TOL``.

    Requires planar vectors (use ``planarity_guard`` first for the general
    case); raises OutOfRegimeError otherwise.
    """
    zmax = _max_z(pv)
    if zmax > PLANAR_TOL:
        raise OutOfRegimeError(
            f"classification is defined for planar r, a, v; max |z| is {zmax:.3e}"
        )
    phi, psi = domain_invariants(pv)
    if abs(phi) <= BOUNDARY_TOL or abs(psi) <= BOUNDARY_TOL:
        return DomainLabel.BOUNDARY
    if phi > 0.0:
        return DomainLabel.D_I if psi > 0.0 else DomainLabel.D_III
    return DomainLabel.D_IV if psi > 0.0 else DomainLabel.D_II


def planarity_guard(pv: ProblemVectors) -> TrapFreeVerdict | None:
    """NonPlanar verdict when any of r_z, aT_z, v_z exceeds ``PLANAR_TOL``
    in magnitude (such problems are trap-free for any horizon); None when
    all three are planar."""
    zs = {"r_z": float(pv.r[2]), "a_z": float(pv.aT[2]), "v_z": float(pv.v[2])}
    if max(abs(z) for z in zs.values()) > PLANAR_TOL:
        return TrapFreeVerdict(reason="NonPlanar", details=zs)
    return None


def trap_free_at(pv: ProblemVectors, T: float) -> bool:
    """Horizon-dependent trap-free condition, evaluated with a0 (not aT):

    (v x r)_z [(v x a0)_z cos 2T - (v . a0) sin 2T]
            [(r x a0)_z cos 2T - (r . a0) sin 2T] < 0
    """
    c = np.cos(2.0 * T)
    s = np.sin(2.0 * T)
    f1 = cross_z(pv.v, pv.r)
    f2 = cross_z(pv.v, pv.a0) * c - float(pv.v @ pv.a0) * s
    f3 = cross_z(pv.r, pv.a0) * c - float(pv.r @ pv.a0) * s
    return bool(f1 * f2 * f3 < 0.0)


def trap_free_small_t(pv: ProblemVectors) -> bool:
    """Horizon-independent condition (v x r)_z (v x a0)_z (r x a0)_z < 0;
    equivalently sin(alpha - beta) sin(alpha) sin(beta) < 0.  When it
    holds, some threshold horizon exists below which the problem is
    trap-free."""
    product = cross_z(pv.v, pv.r) * cross_z(pv.v, pv.a0) * cross_z(pv.r, pv.a0)
    return bool(product < 0.0)


def trap_free_report(pv: ProblemVectors, T: float) -> TrapFreeVerdict:
    """Full verdict: planarity guard first, then the condition at the given
    horizon, then the small-horizon condition."""
    guard = planarity_guard(pv)
    if guard is not None:
        return guard
    phi, psi = domain_invariants(pv)
    details = {
        "cross_vr_va": phi,
        "cross_ra": psi,
        "alpha": pv.alpha,
        "beta": pv.beta,
        "T": float(T),
        "angle_product": float(
            np.sin(pv.alpha - pv.beta) * np.sin(pv.alpha) * np.sin(pv.beta)
        ),
    }
    if trap_free_at(pv, T):
        return TrapFreeVerdict(reason="SaddleDomain", details=details)
    if trap_free_small_t(pv):
        return TrapFreeVerdict(reason="SmallTCondition", details=details)
    return TrapFreeVerdict(reason="Inconclusive", details=details)


def bump_quadratic_form(pv: ProblemVectors, t1: float, t2: float,
                        lam: float, mu: float) -> float:
    """Quadratic form governing a pair of bump variations at 0 < t1 < t2:

    lam^2 (r.r2)(a.r2) + 2 lam mu (r.r1)(a.r2) + mu^2 (r.r1)(a.r1)

    with a = aT.  Indefinite exactly when its discriminant
    (r.r1)^2 (a.r2)^2 - (r.r2)(a.r2)(r.r1)(a.r1) is positive.
    """
    r1 = kernel_direction(pv, t1)
    r2 = kernel_direction(pv, t2)
    rr1 = float(pv.r @ r1)
    rr2 = float(pv.r @ r2)
    ar1 = float(pv.aT @ r1)
    ar2 = float(pv.aT @ r2)
    return lam * lam * rr2 * ar2 + 2.0 * lam * mu * rr1 * ar2 + mu * mu * rr1 * ar1


def _bump_control(T: float, t1: float, t2: float, coeffs, eps: float) -> PiecewiseControl:
    """Two rectangular bumps of width eps centered at t1 < t2, with unit
    integral per unit coefficient (height coeff/eps)."""
    breakpoints = [0.0, t1 - eps / 2.0, t1 + eps / 2.0, t2 - eps / 2.0,
                   t2 + eps / 2.0, T]
    amplitudes = [0.0, coeffs[0] / eps, 0.0, coeffs[1] / eps, 0.0]
    return PiecewiseControl(np.array(breakpoints), np.array(amplitudes))


def probe_saddle(rp: ReducedProblem, *, scale0: float = 0.1,
                 max_refine: int = 20) -> SaddleProbeReport:
    """Certify that f = 0 is a saddle for a problem in D_III or D_IV.

    Picks probe times t1 < t2 near zero (halving from T/8, T/4 until the
    domain's sign condition on (r.r1)(a.r2) holds), takes the eigenvector
    coefficient pairs of the 2x2 kernel matrix as ascent and descent
    directions, realizes them as two-bump controls of width eps and
    amplitude scale s, and shrinks (eps, s) geometrically until the
    measured objective differences carry the predicted signs over two
    consecutive refinements.  Returns a Saddle report with J_down < J0 <
    J_up, or NoSplitFound once the refinement budget is spent.

    Raises OutOfRegimeError when the problem is not in D_III or D_IV.
    """
    pv = vectors(rp)
    label = classify(pv)
    if label not in (DomainLabel.D_III, DomainLabel.D_IV):
        raise OutOfRegimeError(
            f"saddle probe requires domain D_III or D_IV, got {label.name}"
        )
    T = rp.T
    t1, t2 = T / 8.0, T / 4.0
    want_positive = label is DomainLabel.D_III
    for _ in range(60):
        q = float(pv.r @ kernel_direction(pv, t1)) * float(pv.aT @ kernel_direction(pv, t2))
        if q != 0.0 and (q > 0.0) == want_positive:
            break
        t1 /= 2.0
        t2 /= 2.0

    k11 = hessian_kernel_at_zero(pv, t1, t1).value
    k12 = hessian_kernel_at_zero(pv, t1, t2).value
    k22 = hessian_kernel_at_zero(pv, t2, t2).value
    kmat = np.array([[k11, k12], [k12, k22]])
    evals, evecs = np.linalg.eigh(kmat)
    c_down = evecs[:, 0]  # most negative curvature
    c_up = evecs[:, 1]

    j0 = objective(rp, PiecewiseControl.zero(T))
    eps0 = min(t1, (t2 - t1) / 2.0, T - t2)
    previous_ok = False
    eps = eps0
    scale = scale0
    j_up = j_down = j0
    up_pair = down_pair = (0.0, 0.0)
    for _ in range(max_refine):
        up_pair = tuple(scale * c_up)
        down_pair = tuple(scale * c_down)
        j_up = objective(rp, _bump_control(T, t1, t2, up_pair, eps))
        j_down = objective(rp, _bump_control(T, t1, t2, down_pair, eps))
        ok = j_down < j0 < j_up
        if ok and previous_ok:
            return SaddleProbeReport(
                t1=t1, t2=t2, epsilon=eps, ascent_pair=up_pair,
                descent_pair=down_pair, J0=j0, J_up=j_up, J_down=j_down,
                verdict="Saddle",
            )
        previous_ok = ok
        eps /= 2.0
        scale /= 2.0
    return SaddleProbeReport(
        t1=t1, t2=t2, epsilon=eps, ascent_pair=up_pair,
        descent_pair=down_pair, J0=j0, J_up=j_up, J_down=j_down,
        verdict="NoSplitFound",
    )


def span_rank(rp: ReducedProblem, control: PiecewiseControl, samples: int = 3) -> int:
    """Dimension spanned by the conjugated couplings U_t^dagger V U_t.

    Samples each constant interval on a uniform grid (endpoints included),
    takes the Bloch vectors of the conjugated coupling, and returns the
    numerical rank of the sample matrix (singular values above 1e-9 times
    the largest).  Rank 3 means small control variations reach every
    direction of the evolution; rank 2 signals a non-regular control.
    """
    if samples < 3:
        raise ValueError(f"need at least 3 samples per interval, got {samples}")
    w = np.tensordot(rp.v, PAULI, axes=1)
    rows = []
    u_start = np.eye(2, dtype=complex)
    for i, amp in enumerate(control.amplitudes):
        left = control.breakpoints[i]
        right = control.breakpoints[i + 1]
        gen = Hermitian2(0.0, (amp * rp.v[0], amp * rp.v[1], 1.0))
        for t in np.linspace(0.0, right - left, samples):
            u_t = expi(gen, t) @ u_start
            v_t = u_t.conj().T @ w @ u_t
            rows.append(2.0 * pauli_decompose(v_t).h)
        u_start = expi(gen, right - left) @ u_start
    m = np.array(rows)
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > 1e-9 * sv[0]))
