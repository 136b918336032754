"""Monte Carlo landscape scans over the (phi, psi) parameter grid, plus
gradient-ascent optimization.

Each grid cell fixes v = (cos phi, sin phi, 0) and a0 = (cos psi, sin psi,
0), draws random piecewise-constant controls, and estimates the
probability P that a random control lowers the objective below its value
at f = 0.  Saturated P (0 or 1) marks cells where f = 0 behaves as a local
extremum; fractional P marks saddles.

Randomness is counter-based: cell (seed, cell_index) keys a Philox stream,
so cells are order-independent and any subset can be evaluated
concurrently with bit-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import backend
from .dynamics import PiecewiseControl, objective, objective_and_gradient
from .landscape import DomainLabel, classify
from .problem import ProblemVectors, ReducedProblem
from .su2 import EY, EZ, cross_z, rotate_about_z


@dataclass(frozen=True)
class ScanConfig:
    """Scan parameters; the defaults reproduce the production protocol
    (300 unit-dispersion normal controls on 100 uniform intervals)."""

    T: float
    grid_phi: int = 101
    grid_psi: int = 101
    samples: int = 300
    intervals: int = 100
    amplitude_sigma: float = 1.0
    seed: int = 0
    r: np.ndarray = field(default_factory=lambda: EY.copy())

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0.0):
            raise ValueError(f"horizon T must be positive, got {self.T!r}")
        for name in ("grid_phi", "grid_psi", "samples", "intervals"):
            value = getattr(self, name)
            if not (isinstance(value, (int, np.integer)) and value >= 1):
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.amplitude_sigma < 0.0:
            raise ValueError(f"amplitude_sigma must be >= 0, got {self.amplitude_sigma!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed!r}")
        r = np.array(self.r, dtype=float)
        if r.shape != (3,):
            raise ValueError(f"r must be a 3-vector, got shape {r.shape}")
        r.flags.writeable = False
        object.__setattr__(self, "r", r)

    def cell_angles(self, i: int, j: int) -> tuple[float, float]:
        """Cell centers phi_i = 2 pi (i + 1/2)/grid_phi (same for psi);
        centers avoid the exact boundary angles where the invariants
        vanish."""
        phi = 2.0 * np.pi * (i + 0.5) / self.grid_phi
        psi = 2.0 * np.pi * (j + 0.5) / self.grid_psi
        return phi, psi

    def cell_index(self, i: int, j: int) -> int:
        return i * self.grid_psi + j


@dataclass(frozen=True)
class ScanCell:
    """One grid cell: objective at f = 0, count of samples strictly below
    it, the estimated probability P = count_below/samples, and the domain
    label."""

    phi: float
    psi: float
    J0: float
    count_below: int
    P: float
    label: DomainLabel


def cell_amplitudes(cfg: ScanConfig, cell_index: int) -> np.ndarray:
    """All amplitude draws for one cell, shape (samples, intervals).

    Stream keyed by (seed, cell_index); row k is the k-th sample's draw
    block, so individual samples are reproducible without the rest.
    """
    key = np.array([cfg.seed, cell_index], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    draws = gen.standard_normal((cfg.samples, cfg.intervals))
    return cfg.amplitude_sigma * draws


def sample_control(cfg: ScanConfig, cell_index: int, sample_index: int) -> PiecewiseControl:
    """The sample_index-th random control of a cell: uniform intervals over
    [0, T] with independent normal(0, sigma^2) amplitudes; bit-exact for a
    given (seed, cell_index, sample_index)."""
    if not 0 <= sample_index < cfg.samples:
        raise ValueError(f"sample_index out of range [0, {cfg.samples})")
    amplitudes = cell_amplitudes(cfg, cell_index)[sample_index]
    return PiecewiseControl.uniform(cfg.T, amplitudes)


def _cell_vectors(rp: ReducedProblem) -> ProblemVectors:
    # Direct record construction: estimate_P must also handle a trivial
    # observable (a0 = 0), which classifies as BOUNDARY.
    aT = rotate_about_z(rp.a0, 2.0 * rp.T)
    alpha = float(np.arctan2(cross_z(rp.v, rp.a0), float(rp.v @ rp.a0)))
    beta = float(np.arctan2(cross_z(rp.r, rp.a0), float(rp.r @ rp.a0)))
    phi_v = float(np.arctan2(rp.v[1], rp.v[0]))
    return ProblemVectors(r=rp.r, a0=rp.a0, aT=aT, v=rp.v, h0=EZ.copy(),
                          alpha=alpha, beta=beta, phi_v=phi_v, T=rp.T)


def estimate_P(rp: ReducedProblem, cfg: ScanConfig, cell_index: int,
               phi: float, psi: float, kernel=None) -> ScanCell:
    """Estimate P for one cell by drawing cfg.samples controls and counting
    strict objective decreases J[f] < J[0]; exact ties count as not-below.

    J[0] is evaluated through the same kernel as the samples so that tie
    comparisons are consistent.
    """
    if rp.T != cfg.T:
        raise ValueError(f"problem horizon {rp.T!r} does not match scan T {cfg.T!r}")
    kern = kernel if kernel is not None else backend.get()
    dt = cfg.T / cfg.intervals
    amplitudes = np.ascontiguousarray(cell_amplitudes(cfg, cell_index))
    args = (rp.v[0], rp.v[1], rp.r[0], rp.r[1], rp.r[2],
            rp.a0[0], rp.a0[1], rp.a0[2], 0.5 * rp.a_trace, dt)
    j_samples = kern.objectives_uniform(*args, amplitudes)
    j0 = float(kern.objectives_uniform(*args, np.zeros((1, cfg.intervals)))[0])
    count = int(np.count_nonzero(j_samples < j0))
    label = classify(_cell_vectors(rp))
    return ScanCell(phi=float(phi), psi=float(psi), J0=j0, count_below=count,
                    P=count / cfg.samples, label=label)


@dataclass(frozen=True)
class ScanResult:
    """Row-major grid of scan cells (phi index outer, psi index inner)."""

    config: ScanConfig
    cells: list

    def cell(self, i: int, j: int) -> ScanCell:
        return self.cells[self.config.cell_index(i, j)]

    def _grid(self, getter):
        shape = (self.config.grid_phi, self.config.grid_psi)
        return np.array([getter(c) for c in self.cells]).reshape(shape)

    def P_grid(self) -> np.ndarray:
        return self._grid(lambda c: c.P)

    def J0_grid(self) -> np.ndarray:
        return self._grid(lambda c: c.J0)

    def count_grid(self) -> np.ndarray:
        return self._grid(lambda c: c.count_below).astype(int)

    def label_grid(self) -> np.ndarray:
        return self._grid(lambda c: c.label.short)


CSV_HEADER = "phi,psi,J0,P,count_below,samples,label"


def write_scan_csv(result: ScanResult, stream) -> None:
    """CSV with the exact header phi,psi,J0,P,count_below,samples,label;
    floats carry 17 significant digits."""
    stream.write(CSV_HEADER + "\n")
    samples = result.config.samples
    for c in result.cells:
        stream.write(
            f"{c.phi:.17g},{c.psi:.17g},{c.J0:.17g},{c.P:.17g},"
            f"{c.count_below},{samples},{c.label.short}\n"
        )


def run_scan(cfg: ScanConfig, kernel=None) -> ScanResult:
    """Full grid scan; bit-identical across runs with the same config and
    backend.  Cells are independent (keyed RNG), so any evaluation order
    yields the same grid."""
    if cfg.grid_phi < 2 or cfg.grid_psi < 2:
        raise ValueError("grid must be at least 2x2")
    kern = kernel if kernel is not None else backend.get()
    cells = []
    for i in range(cfg.grid_phi):
        for j in range(cfg.grid_psi):
            phi, psi = cfg.cell_angles(i, j)
            rp = ReducedProblem(
                v=np.array([np.cos(phi), np.sin(phi), 0.0]),
                r=cfg.r,
                a0=np.array([np.cos(psi), np.sin(psi), 0.0]),
                T=cfg.T,
            )
            cells.append(estimate_P(rp, cfg, cfg.cell_index(i, j), phi, psi,
                                    kernel=kern))
    return ScanResult(config=cfg, cells=cells)


@dataclass(frozen=True)
class OptimizeReport:
    """Gradient-ascent run record; the J trace is nondecreasing."""

    start_seed: int | None
    iterations: int
    j_trace: list
    final_control: PiecewiseControl
    final_J: float
    grad_max: float
    converged: bool

    def as_dict(self) -> dict:
        return {
            "start_seed": self.start_seed,
            "iterations": self.iterations,
            "j_trace": [float(j) for j in self.j_trace],
            "final_J": self.final_J,
            "grad_max": self.grad_max,
            "converged": self.converged,
            "final_breakpoints": [float(x) for x in self.final_control.breakpoints],
            "final_amplitudes": [float(x) for x in self.final_control.amplitudes],
        }


def random_start(T: float, intervals: int, seed: int, sigma: float = 1.0) -> PiecewiseControl:
    """Seeded normal(0, sigma^2) start on a uniform grid."""
    rng = np.random.default_rng(seed)
    return PiecewiseControl.uniform(T, sigma * rng.standard_normal(intervals))


def optimize(rp: ReducedProblem, intervals: int, start: PiecewiseControl | None = None,
             max_iter: int = 2000, tol: float = 1e-7,
             seed: int | None = None) -> OptimizeReport:
    """Monotone gradient ascent with backtracking line search on the
    amplitude vector.

    Stops when the gradient max-norm drops below tol, when max_iter is
    reached, or when no step improves the objective at floating-point
    resolution.  The line search only ever accepts improvements, so the J
    trace is nondecreasing.
    """
    if start is None:
        start = random_start(rp.T, intervals, 0 if seed is None else seed)
    if start.amplitudes.size != intervals:
        raise ValueError(
            f"start has {start.amplitudes.size} intervals, expected {intervals}"
        )
    uniform = np.linspace(0.0, rp.T, intervals + 1)
    if np.max(np.abs(start.breakpoints - uniform)) > 1e-12 * max(rp.T, 1.0):
        raise ValueError("start control must live on the uniform interval grid")

    amps = start.amplitudes.copy()
    j_val, grad = objective_and_gradient(rp, PiecewiseControl.uniform(rp.T, amps))
    trace = [j_val]
    step = 1.0
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        gmax = float(np.max(np.abs(grad)))
        if gmax < tol:
            converged = True
            iterations -= 1
            break
        gsq = float(grad @ grad)
        alpha = step
        accepted = False
        for _ in range(60):
            candidate = amps + alpha * grad
            j_new = objective(rp, PiecewiseControl.uniform(rp.T, candidate))
            if j_new >= j_val + 1e-4 * alpha * gsq:
                accepted = True
                break
            alpha /= 2.0
        if not accepted:
            break  # no ascent step resolvable at double precision
        amps = candidate
        j_val, grad = objective_and_gradient(rp, PiecewiseControl.uniform(rp.T, amps))
        trace.append(j_val)
        step = alpha * 2.0
    gmax = float(np.max(np.abs(grad)))
    return OptimizeReport(
        start_seed=seed,
        iterations=iterations,
        j_trace=trace,
        final_control=PiecewiseControl.uniform(rp.T, amps),
        final_J=j_val,
        grad_max=gmax,
        converged=converged or gmax < tol,
    )
