"""Exact propagation of piecewise-constant controls and derivatives of the
control objective.

All dynamics run in the reduced frame: i dU/dt = (sigma_z + f(t) v.sigma) U
with a planar coupling vector v.  Controls are exactly piecewise constant,
so each interval contributes one closed-form SU(2) exponential and the
propagator carries no step-size error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRegimeError
from .su2 import IDENTITY, PAULI

PLANAR_TOL = 1e-10


@dataclass(frozen=True)
class PiecewiseControl:
    """A control pulse: sorted breakpoints with one constant amplitude per
    interval.  Breakpoints start at 0 and end at the horizon T."""

    breakpoints: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        b = np.array(self.breakpoints, dtype=float)
        a = np.array(self.amplitudes, dtype=float)
        if b.ndim != 1 or a.ndim != 1 or b.size != a.size + 1:
            raise ValueError(
                f"need n+1 breakpoints for n amplitudes, got {b.size} and {a.size}"
            )
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(a))):
            raise ValueError("breakpoints and amplitudes must be finite")
        if b[0] != 0.0:
            raise ValueError(f"first breakpoint must be 0, got {b[0]!r}")
        if np.any(np.diff(b) <= 0.0):
            raise ValueError("breakpoints must be strictly increasing")
        b.flags.writeable = False
        a.flags.writeable = False
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def uniform(cls, T: float, amplitudes) -> "PiecewiseControl":
        """Control on a uniform grid of len(amplitudes) intervals over [0, T]."""
        amplitudes = np.asarray(amplitudes, dtype=float)
        return cls(np.linspace(0.0, T, amplitudes.size + 1), amplitudes)

    @classmethod
    def zero(cls, T: float, intervals: int = 1) -> "PiecewiseControl":
        return cls.uniform(T, np.zeros(intervals))

    @property
    def T(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def durations(self) -> np.ndarray:
        return np.diff(self.breakpoints)


@dataclass(frozen=True)
class HessianSample:
    """One evaluation of the second functional derivative density at f = 0."""

    t1: float
    t2: float
    value: float


def _check_span(rp, control: PiecewiseControl) -> None:
    if control.T != rp.T:
        raise OutOfRegimeError(
            f"control spans [0, {control.T!r}] but the problem horizon is {rp.T!r}"
        )


def _step_unitaries(rp, control: PiecewiseControl) -> np.ndarray:
    """Per-interval closed-form exponentials of sigma_z + a_i v.sigma."""
    a = control.amplitudes
    hx = a * rp.v[0]
    hy = a * rp.v[1]
    om = np.sqrt(1.0 + hx * hx + hy * hy)
    th = om * control.durations
    c = np.cos(th)
    s = np.sin(th) / om
    u = np.empty((a.size, 2, 2), dtype=complex)
    u[:, 0, 0] = c - 1j * s
    u[:, 1, 1] = c + 1j * s
    u[:, 0, 1] = -1j * s * (hx - 1j * hy)
    u[:, 1, 0] = -1j * s * (hx + 1j * hy)
    return u


def propagate(rp, control: PiecewiseControl) -> np.ndarray:
    """Unitary evolution over [0, T]: the ordered product of the per-interval
    exponentials (later intervals applied on the left)."""
    _check_span(rp, control)
    u = np.eye(2, dtype=complex)
    for step in _step_unitaries(rp, control):
        u = step @ u
    return u


def _rho0_matrix(rp) -> np.ndarray:
    return 0.5 * (IDENTITY + np.tensordot(rp.r, PAULI, axes=1))


def _observable_matrix(rp) -> np.ndarray:
    return 0.5 * rp.a_trace * IDENTITY + 0.5 * np.tensordot(rp.a0, PAULI, axes=1)


def _objective_from_unitary(rp, u: np.ndarray) -> float:
    rho_t = u @ _rho0_matrix(rp) @ u.conj().T
    rtx = 2.0 * rho_t[1, 0].real
    rty = 2.0 * rho_t[1, 0].imag
    rtz = (rho_t[0, 0] - rho_t[1, 1]).real
    return 0.5 * rp.a_trace + 0.5 * (rtx * rp.a0[0] + rty * rp.a0[1] + rtz * rp.a0[2])


def objective(rp, control: PiecewiseControl) -> float:
    """J[f] = Tr(U rho0 U^dagger A).  Always within [lambda_min(A), lambda_max(A)]."""
    return _objective_from_unitary(rp, propagate(rp, control))


def transition_probability(rp, control: PiecewiseControl, psi_i, psi_f) -> float:
    """|<psi_f| U |psi_i>|^2 for normalized states.

    Equals the objective with rho0 = |psi_i><psi_i| and A = |psi_f><psi_f|.
    """
    psi_i = np.asarray(psi_i, dtype=complex)
    psi_f = np.asarray(psi_f, dtype=complex)
    for name, psi in (("psi_i", psi_i), ("psi_f", psi_f)):
        if psi.shape != (2,):
            raise ValueError(f"{name} must be a 2-component state vector")
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-12:
            raise OutOfRegimeError(f"{name} is not normalized: |psi| = {norm!r}")
    amp = psi_f.conj() @ propagate(rp, control) @ psi_i
    return float(abs(amp) ** 2)


def _frechet_steps(rp, control: PiecewiseControl) -> np.ndarray:
    """d/da of each interval exponential, batched over intervals.

    Spectral form: with projectors P+- of the interval generator and
    E = -i*(v.sigma)*dt, the derivative is sum_{jk} f(x_j,x_k) P_j E P_k
    where f is the divided difference of exp.  The generator gap is
    2*sqrt(1 + a^2 v^2) >= 2, so the divided difference needs no series
    guard here.
    """
    a = control.amplitudes
    dts = control.durations
    hx = a * rp.v[0]
    hy = a * rp.v[1]
    om = np.sqrt(1.0 + hx * hx + hy * hy)
    n = np.empty((a.size, 2, 2), dtype=complex)
    n[:, 0, 0] = 1.0 / om
    n[:, 1, 1] = -1.0 / om
    n[:, 0, 1] = (hx - 1j * hy) / om
    n[:, 1, 0] = (hx + 1j * hy) / om
    eye = np.broadcast_to(IDENTITY, n.shape)
    pp = 0.5 * (eye + n)
    pm = 0.5 * (eye - n)
    w = np.tensordot(rp.v, PAULI, axes=1)
    e = (-1j * dts)[:, None, None] * w
    xp = -1j * om * dts
    xm = 1j * om * dts
    d = 0.5 * (xp - xm)
    fpm = np.exp(0.5 * (xp + xm)) * np.sinh(d) / d
    out = (
        np.exp(xp)[:, None, None] * (pp @ e @ pp)
        + np.exp(xm)[:, None, None] * (pm @ e @ pm)
        + fpm[:, None, None] * (pp @ e @ pm + pm @ e @ pp)
    )
    return out


def objective_and_gradient(rp, control: PiecewiseControl):
    """J[f] together with dJ/da_i for every interval amplitude.

    Adjoint evaluation: propagate forward once, back-propagate the
    observable, and trace each interval's exponential derivative against
    the sandwiched operator.  Cost is linear in the interval count.
    """
    _check_span(rp, control)
    steps = _step_unitaries(rp, control)
    k = steps.shape[0]
    fwd = np.empty((k + 1, 2, 2), dtype=complex)
    fwd[0] = IDENTITY
    for i in range(k):
        fwd[i + 1] = steps[i] @ fwd[i]
    bwd = np.empty((k + 1, 2, 2), dtype=complex)
    bwd[k] = IDENTITY
    for i in range(k - 1, -1, -1):
        bwd[i] = bwd[i + 1] @ steps[i]
    u = fwd[k]
    j_val = _objective_from_unitary(rp, u)
    x = _rho0_matrix(rp) @ u.conj().T @ _observable_matrix(rp)
    # M_i = F_i X B_i with F_i the product before interval i and B_i after it
    mid = fwd[:k] @ x @ bwd[1:]
    deriv = _frechet_steps(rp, control)
    grad = 2.0 * np.einsum("kij,kji->k", deriv, mid).real
    return j_val, grad


def gradient(rp, control: PiecewiseControl) -> np.ndarray:
    """dJ/da_i for each interval amplitude, by the adjoint method."""
    return objective_and_gradient(rp, control)[1]


def _require_planar(pv) -> None:
    zmax = max(abs(float(pv.r[2])), abs(float(pv.aT[2])), abs(float(pv.v[2])))
    if zmax > PLANAR_TOL:
        raise OutOfRegimeError(
            f"kernel is defined for planar r, a, v; max |z| component is {zmax:.3e}"
        )


def kernel_direction(pv, t: float) -> np.ndarray:
    """Planar unit vector sin(2t - phi_v) e_x + cos(2t - phi_v) e_y."""
    ang = 2.0 * t - pv.phi_v
    return np.array([np.sin(ang), np.cos(ang), 0.0])


def hessian_kernel_at_zero(pv, t1: float, t2: float) -> HessianSample:
    """Second functional derivative density of J at f = 0, symmetric in
    (t1, t2).

    Value: -v^2 (r . r_early)(a . r_late) with r_k = sin(2 t_k - phi) e_x
    + cos(2 t_k - phi) e_y, a the horizon-rotated target vector, and
    "early"/"late" by time order.  The true second derivative of the
    objective is exactly twice this kernel (see the finite-difference
    checks in the test suite); every landscape conclusion uses the sign
    only, which the constant does not affect.
    """
    _require_planar(pv)
    if not (-1e-12 <= t1 <= pv.T + 1e-12 and -1e-12 <= t2 <= pv.T + 1e-12):
        raise OutOfRegimeError(
            f"kernel times must lie in [0, {pv.T!r}], got ({t1!r}, {t2!r})"
        )
    t_early, t_late = (t1, t2) if t1 <= t2 else (t2, t1)
    r_early = kernel_direction(pv, t_early)
    r_late = kernel_direction(pv, t_late)
    v2 = float(pv.v @ pv.v)
    value = -v2 * float(pv.r @ r_early) * float(pv.aT @ r_late)
    return HessianSample(t1=float(t1), t2=float(t2), value=value)


def control_to_text(control: PiecewiseControl) -> str:
    """Serialize a control to text; round-trips bit-exactly (17 significant
    digits per value)."""
    lines = [
        "# piecewise control",
        "breakpoints = " + " ".join(f"{x:.17g}" for x in control.breakpoints),
        "amplitudes = " + " ".join(f"{x:.17g}" for x in control.amplitudes),
    ]
    return "\n".join(lines) + "\n"


def control_from_text(text: str) -> PiecewiseControl:
    """Parse the text form produced by ``control_to_text``."""
    fields = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"malformed control line: {line!r}")
        key, _, value = line.partition("=")
        fields[key.strip()] = np.array([float(tok) for tok in value.split()])
    missing = {"breakpoints", "amplitudes"} - fields.keys()
    if missing:
        raise ValueError(f"control record is missing {sorted(missing)}")
    unknown = fields.keys() - {"breakpoints", "amplitudes"}
    if unknown:
        raise ValueError(f"unknown control fields {sorted(unknown)}")
    return PiecewiseControl(fields["breakpoints"], fields["amplitudes"])


def save_control(path, control: PiecewiseControl) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(control_to_text(control))


def load_control(path) -> PiecewiseControl:
    with open(path, encoding="utf-8") as f:
        return control_from_text(f.read())
