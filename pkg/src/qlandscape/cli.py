"""Command-line surface: problem presets, objective evaluation, kernel
grids, classification, trap-free verdicts, saddle probing, span rank,
Monte Carlo scans, and gradient-ascent optimization.

Every output file is paired with a <name>.manifest.json recording the
resolved configuration; `replay` re-runs a manifest and reproduces the
outputs byte for byte.  Exit codes: 0 success, 2 configuration error,
3 out-of-regime / precondition error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import __version__, backend
from .dynamics import (
    HessianSample,
    hessian_kernel_at_zero,
    load_control,
    objective,
)
from .errors import OutOfRegimeError
from .landscape import classify, probe_saddle, span_rank, trap_free_report
from .problem import (
    ControlProblem,
    PRESET_NAMES,
    critical_time,
    exceptional_control,
    make_preset,
    reduce_problem,
    vectors,
)
from .scan import ScanConfig, optimize, random_start, run_scan, write_scan_csv
from .su2 import Hermitian2

_PI_FORM = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_float_expr(text: str) -> float:
    """Decimal literal or an exact multiple/fraction of pi such as
    'pi/12', '2*pi/3', '-pi'."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_FORM.match(text)
    if not m:
        raise ValueError(f"cannot parse numeric expression {text!r}")
    num_text, den_text = m.groups()
    if num_text in ("", "+"):
        num = 1.0
    elif num_text == "-":
        num = -1.0
    else:
        num = float(num_text)
    den = float(den_text) if den_text else 1.0
    if den == 0.0:
        raise ValueError(f"zero denominator in {text!r}")
    return num * np.pi / den


def parse_grid(text: str) -> tuple[int, int]:
    m = re.match(r"^(\d+)x(\d+)$", text)
    if not m:
        raise ValueError(f"grid must look like 101x101, got {text!r}")
    return int(m.group(1)), int(m.group(2))


_OPERATOR_KEYS = ("c0", "hx", "hy", "hz")
_OPERATOR_NAMES = ("H0", "V", "rho0", "A")


def problem_to_text(p: ControlProblem) -> str:
    lines = [
        "# qlandscape problem file",
        "# operators are c0*I + hx*sigma_x + hy*sigma_y + hz*sigma_z",
    ]
    for name in _OPERATOR_NAMES:
        op = getattr(p, name)
        values = (op.c0, op.h[0], op.h[1], op.h[2])
        for key, value in zip(_OPERATOR_KEYS, values):
            lines.append(f"{name}.{key} = {value:.17g}")
    lines.append(f"T = {p.T:.17g}")
    return "\n".join(lines) + "\n"


def problem_from_text(text: str) -> ControlProblem:
    expected = {f"{n}.{k}" for n in _OPERATOR_NAMES for k in _OPERATOR_KEYS} | {"T"}
    fields: dict[str, float] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"malformed problem line: {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in expected:
            raise ValueError(f"unknown problem key {key!r}")
        if key in fields:
            raise ValueError(f"duplicate problem key {key!r}")
        fields[key] = float(value)
    missing = expected - fields.keys()
    if missing:
        raise ValueError(f"problem file is missing keys {sorted(missing)}")

    def op(name):
        return Hermitian2(fields[f"{name}.c0"],
                          (fields[f"{name}.hx"], fields[f"{name}.hy"],
                           fields[f"{name}.hz"]))

    return ControlProblem(H0=op("H0"), V=op("V"), rho0=op("rho0"), A=op("A"),
                          T=fields["T"])


def load_problem(path: str) -> ControlProblem:
    with open(path, encoding="utf-8") as f:
        return problem_from_text(f.read())


def save_problem(path: str, p: ControlProblem) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(problem_to_text(p))


def _write_manifest(out_path: str, subcommand: str, canonical_argv: list,
                    seed=None) -> None:
    manifest = {
        "tool": "qlandscape",
        "version": __version__,
        "subcommand": subcommand,
        "seed": seed,
        "backend": backend.name(),
        "argv": [str(a) for a in canonical_argv],
        "outputs": [out_path],
    }
    with open(out_path + ".manifest.json", "w", encoding="utf-8",
              newline="\n") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def _emit(text: str, out: str | None, subcommand: str,
          canonical_argv: list, seed=None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    _write_manifest(out, subcommand, canonical_argv, seed=seed)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_preset(args) -> int:
    p = make_preset(args.name, T=args.T, vx=args.vx, vy=args.vy,
                    phi=args.phi, psi=args.psi)
    canonical = ["preset", args.name, "--T", _fmt(args.T),
                 "--vx", _fmt(args.vx), "--vy", _fmt(args.vy),
                 "--phi", _fmt(args.phi), "--psi", _fmt(args.psi)]
    if args.out:
        canonical += ["--out", args.out]
    _emit(problem_to_text(p), args.out, "preset", canonical)
    return 0


def _vec(v) -> list:
    return [float(x) for x in v]


def _cmd_info(args) -> int:
    p = load_problem(args.problem)
    rp = reduce_problem(p)
    pv = vectors(rp)
    try:
        t0 = critical_time(p.H0, p.V)
    except OutOfRegimeError:
        t0 = None
    try:
        label = classify(pv).short
    except OutOfRegimeError:
        label = "NonPlanar"
    from .landscape import domain_invariants

    phi_inv, psi_inv = domain_invariants(pv)
    info = {
        "f0": exceptional_control(p.H0, p.V),
        "T0": t0,
        "reduced": {
            "v": _vec(rp.v), "r": _vec(rp.r), "a0": _vec(rp.a0),
            "T": rp.T, "a_trace": rp.a_trace,
        },
        "aT": _vec(pv.aT),
        "angles": {"alpha": pv.alpha, "beta": pv.beta, "phi_v": pv.phi_v},
        "invariants": {"cross_vr_va": phi_inv, "cross_ra": psi_inv},
        "label": label,
    }
    canonical = ["info", "--problem", args.problem]
    if args.out:
        canonical += ["--out", args.out]
    _emit(json.dumps(info, indent=2) + "\n", args.out, "info", canonical)
    return 0


def _cmd_evaluate(args) -> int:
    p = load_problem(args.problem)
    rp = reduce_problem(p)
    control = load_control(args.control)
    j = objective(rp, control)
    if args.format == "json":
        text = json.dumps({"J": j}) + "\n"
    else:
        text = _fmt(j) + "\n"
    canonical = ["evaluate", "--problem", args.problem, "--control",
                 args.control, "--format", args.format]
    if args.out:
        canonical += ["--out", args.out]
    _emit(text, args.out, "evaluate", canonical)
    return 0


def _cmd_hessian(args) -> int:
    p = load_problem(args.problem)
    rp = reduce_problem(p)
    pv = vectors(rp)
    n1, n2 = args.grid
    t1s = np.linspace(0.0, rp.T, n1)
    t2s = np.linspace(0.0, rp.T, n2)
    lines = ["t1,t2,value"]
    for t1 in t1s:
        for t2 in t2s:
            s: HessianSample = hessian_kernel_at_zero(pv, t1, t2)
            lines.append(f"{_fmt(s.t1)},{_fmt(s.t2)},{_fmt(s.value)}")
    canonical = ["hessian", "--problem", args.problem, "--grid",
                 f"{n1}x{n2}"]
    if args.out:
        canonical += ["--out", args.out]
    _emit("\n".join(lines) + "\n", args.out, "hessian", canonical)
    return 0


def _cmd_classify(args) -> int:
    p = load_problem(args.problem)
    label = classify(vectors(reduce_problem(p)))
    sys.stdout.write(label.short + "\n")
    return 0


def _cmd_trap_free(args) -> int:
    p = load_problem(args.problem)
    if args.T is not None:
        p = ControlProblem(H0=p.H0, V=p.V, rho0=p.rho0, A=p.A, T=args.T)
    rp = reduce_problem(p)
    pv = vectors(rp)
    verdict = trap_free_report(pv, rp.T)
    canonical = ["trap-free", "--problem", args.problem]
    if args.T is not None:
        canonical += ["--T", _fmt(args.T)]
    if args.out:
        canonical += ["--out", args.out]
    _emit(json.dumps(verdict.as_dict(), indent=2) + "\n", args.out,
          "trap-free", canonical)
    return 0


def _cmd_probe_saddle(args) -> int:
    p = load_problem(args.problem)
    rp = reduce_problem(p)
    report = probe_saddle(rp)
    canonical = ["probe-saddle", "--problem", args.problem]
    if args.out:
        canonical += ["--out", args.out]
    _emit(json.dumps(report.as_dict(), indent=2) + "\n", args.out,
          "probe-saddle", canonical)
    return 0


def _cmd_span_rank(args) -> int:
    p = load_problem(args.problem)
    rp = reduce_problem(p)
    control = load_control(args.control)
    rank = span_rank(rp, control, samples=args.samples)
    sys.stdout.write(f"{rank}\n")
    return 0


def _cmd_scan(args) -> int:
    grid_phi, grid_psi = args.grid
    r = np.array([float(x) for x in args.r.split(",")])
    cfg = ScanConfig(T=args.T, grid_phi=grid_phi, grid_psi=grid_psi,
                     samples=args.samples, intervals=args.intervals,
                     amplitude_sigma=args.sigma, seed=args.seed, r=r)
    result = run_scan(cfg)
    if args.format == "json":
        payload = {
            "config": {
                "T": cfg.T, "grid_phi": cfg.grid_phi, "grid_psi": cfg.grid_psi,
                "samples": cfg.samples, "intervals": cfg.intervals,
                "amplitude_sigma": cfg.amplitude_sigma, "seed": cfg.seed,
                "r": _vec(cfg.r),
            },
            "cells": [
                {"phi": c.phi, "psi": c.psi, "J0": c.J0, "P": c.P,
                 "count_below": c.count_below, "samples": cfg.samples,
                 "label": c.label.short}
                for c in result.cells
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        import io

        buffer = io.StringIO()
        write_scan_csv(result, buffer)
        text = buffer.getvalue()
    canonical = ["scan", "--T", _fmt(cfg.T), "--grid", f"{grid_phi}x{grid_psi}",
                 "--samples", str(cfg.samples), "--intervals", str(cfg.intervals),
                 "--sigma", _fmt(cfg.amplitude_sigma), "--seed", str(cfg.seed),
                 "--r", ",".join(_fmt(x) for x in cfg.r),
                 "--format", args.format]
    if args.out:
        canonical += ["--out", args.out]
    _emit(text, args.out, "scan", canonical, seed=cfg.seed)
    return 0


def _cmd_optimize(args) -> int:
    p = load_problem(args.problem)
    rp = reduce_problem(p)
    start = random_start(rp.T, args.intervals, args.seed)
    report = optimize(rp, args.intervals, start=start, max_iter=args.max_iter,
                      tol=args.tol, seed=args.seed)
    canonical = ["optimize", "--problem", args.problem,
                 "--intervals", str(args.intervals), "--seed", str(args.seed),
                 "--max-iter", str(args.max_iter), "--tol", _fmt(args.tol)]
    if args.out:
        canonical += ["--out", args.out]
    _emit(json.dumps(report.as_dict(), indent=2) + "\n", args.out,
          "optimize", canonical, seed=args.seed)
    return 0


def _cmd_replay(args) -> int:
    with open(args.manifest, encoding="utf-8") as f:
        manifest = json.load(f)
    return main(manifest["argv"])


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlandscape",
        description="Control-landscape laboratory for a single qubit under "
                    "ultrafast piecewise-constant pulses.",
    )
    parser.add_argument("--version", action="version",
                        version=f"qlandscape {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_out(p):
        p.add_argument("--out", help="output file (a manifest is written "
                                     "alongside); stdout when omitted")

    p = sub.add_parser("preset", help="emit a named problem file")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("--T", type=parse_float_expr, required=True,
                   help="horizon; accepts pi expressions like pi/12 or 2*pi/3")
    p.add_argument("--vx", type=parse_float_expr, default=1.0)
    p.add_argument("--vy", type=parse_float_expr, default=0.0)
    p.add_argument("--phi", type=parse_float_expr, default=0.0)
    p.add_argument("--psi", type=parse_float_expr, default=0.0)
    add_out(p)
    p.set_defaults(func=_cmd_preset)

    p = sub.add_parser("info", help="exceptional control, critical time, "
                                    "reduced vectors, angles, domain label")
    p.add_argument("--problem", required=True)
    add_out(p)
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("evaluate", help="objective value for a control file")
    p.add_argument("--problem", required=True)
    p.add_argument("--control", required=True)
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    add_out(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("hessian", help="kernel samples on a (t1, t2) grid as CSV")
    p.add_argument("--problem", required=True)
    p.add_argument("--grid", type=parse_grid, default=(101, 101))
    add_out(p)
    p.set_defaults(func=_cmd_hessian)

    p = sub.add_parser("classify", help="domain label (D1..D4 or B)")
    p.add_argument("--problem", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("trap-free", help="evaluate the trap-free conditions")
    p.add_argument("--problem", required=True)
    p.add_argument("--T", type=parse_float_expr, default=None,
                   help="override the problem horizon")
    add_out(p)
    p.set_defaults(func=_cmd_trap_free)

    p = sub.add_parser("probe-saddle", help="certify a saddle with bump pairs")
    p.add_argument("--problem", required=True)
    add_out(p)
    p.set_defaults(func=_cmd_probe_saddle)

    p = sub.add_parser("span-rank", help="rank of the conjugated coupling span")
    p.add_argument("--problem", required=True)
    p.add_argument("--control", required=True)
    p.add_argument("--samples", type=int, default=9,
                   help="sample points per constant interval")
    p.set_defaults(func=_cmd_span_rank)

    p = sub.add_parser("scan", help="Monte Carlo (phi, psi) grid scan")
    p.add_argument("--T", type=parse_float_expr, required=True)
    p.add_argument("--grid", type=parse_grid, default=(101, 101))
    p.add_argument("--samples", type=int, default=300)
    p.add_argument("--intervals", type=int, default=100)
    p.add_argument("--sigma", type=parse_float_expr, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", default="0,1,0", help="initial Bloch vector x,y,z")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    add_out(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("optimize", help="seeded gradient-ascent run")
    p.add_argument("--problem", required=True)
    p.add_argument("--intervals", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--tol", type=parse_float_expr, default=1e-7)
    add_out(p)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("replay", help="re-run a manifest; outputs are "
                                      "byte-identical")
    p.add_argument("manifest")
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OutOfRegimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
