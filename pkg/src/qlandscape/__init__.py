"""Desk-scale laboratory for the control landscape of a single qubit under
ultrafast piecewise-constant pulses."""

from .dynamics import (
    HessianSample,
    PiecewiseControl,
    gradient,
    hessian_kernel_at_zero,
    objective,
    objective_and_gradient,
    propagate,
    transition_probability,
)
from .errors import OutOfRegimeError
from .landscape import (
    DomainLabel,
    SaddleProbeReport,
    TrapFreeVerdict,
    bump_quadratic_form,
    classify,
    domain_invariants,
    planarity_guard,
    probe_saddle,
    span_rank,
    trap_free_at,
    trap_free_report,
    trap_free_small_t,
)
from .problem import (
    ControlProblem,
    ProblemVectors,
    ReducedProblem,
    critical_time,
    exceptional_control,
    make_preset,
    reduce_problem,
    vectors,
)
from .scan import (
    OptimizeReport,
    ScanCell,
    ScanConfig,
    ScanResult,
    estimate_P,
    optimize,
    run_scan,
    sample_control,
    write_scan_csv,
)
from .su2 import Hermitian2, cross_z, expi, expi_frechet, pauli_decompose, rotate_about_z

__version__ = "0.1.0"
