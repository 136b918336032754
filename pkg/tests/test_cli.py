import json
import subprocess
import sys

import numpy as np
import pytest

from qlandscape.cli import (
    main,
    parse_float_expr,
    parse_grid,
    problem_from_text,
    problem_to_text,
)
from qlandscape.dynamics import PiecewiseControl, objective, save_control
from qlandscape.problem import make_preset, reduce_problem

SQRT5 = np.sqrt(5.0)


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExpressionParsing:
    @pytest.mark.parametrize("text,expected", [
        ("0.25", 0.25),
        ("-3", -3.0),
        ("pi", np.pi),
        ("-pi", -np.pi),
        ("pi/12", np.pi / 12),
        ("2*pi/3", 2 * np.pi / 3),
        ("2pi/3", 2 * np.pi / 3),
        ("0.5*pi", 0.5 * np.pi),
        ("+pi/2", np.pi / 2),
    ])
    def test_valid(self, text, expected):
        assert parse_float_expr(text) == expected

    @pytest.mark.parametrize("text", ["pie", "pi/0", "two*pi", "", "1/2"])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            parse_float_expr(text)

    def test_grid(self):
        assert parse_grid("101x101") == (101, 101)
        assert parse_grid("3x7") == (3, 7)
        with pytest.raises(ValueError):
            parse_grid("10by10")


class TestProblemFiles:
    def test_round_trip(self):
        p = make_preset("spin-rotation", T=np.pi / 12, vx=0.3, vy=-0.8)
        q = problem_from_text(problem_to_text(p))
        assert q.H0 == p.H0 and q.V == p.V and q.rho0 == p.rho0
        assert q.A == p.A and q.T == p.T

    def test_unknown_key(self):
        text = problem_to_text(make_preset("landau-zener", T=1.0))
        with pytest.raises(ValueError, match="unknown problem key"):
            problem_from_text(text + "B.c0 = 1\n")

    def test_missing_key(self):
        text = problem_to_text(make_preset("landau-zener", T=1.0))
        stripped = "\n".join(line for line in text.splitlines()
                             if not line.startswith("T ="))
        with pytest.raises(ValueError, match="missing"):
            problem_from_text(stripped)

    def test_duplicate_key(self):
        text = problem_to_text(make_preset("landau-zener", T=1.0))
        with pytest.raises(ValueError, match="duplicate"):
            problem_from_text(text + "T = 2\n")


class TestSubcommands:
    def test_preset_info_reports_parameters(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        code, _, _ = run_cli(["preset", "spin-rotation", "--T", "pi/12",
                              "--out", str(prob)], capsys)
        assert code == 0
        code, out, _ = run_cli(["info", "--problem", str(prob)], capsys)
        assert code == 0
        info = json.loads(out)
        assert info["f0"] == 0.0
        assert info["T0"] == np.pi
        assert info["reduced"]["r"] == [0.0, -1.0, 0.0]
        assert info["reduced"]["a0"] == [1.0, 0.0, 0.0]

    def test_scan_deterministic_and_replayable(self, tmp_path, capsys):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        argv = ["scan", "--T", "0.2617993877991494", "--seed", "7",
                "--grid", "5x5", "--samples", "12", "--intervals", "10"]
        assert run_cli(argv + ["--out", str(out1)], capsys)[0] == 0
        assert run_cli(argv + ["--out", str(out2)], capsys)[0] == 0
        assert out1.read_bytes() == out2.read_bytes()
        manifest = out1.with_suffix(".csv.manifest.json")
        assert manifest.exists()
        first = out1.read_bytes()
        out1.unlink()
        assert run_cli(["replay", str(manifest)], capsys)[0] == 0
        assert out1.read_bytes() == first

    def test_scan_csv_header(self, capsys):
        code, out, _ = run_cli(["scan", "--T", "pi/12", "--grid", "2x2",
                                "--samples", "5", "--intervals", "8"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "phi,psi,J0,P,count_below,samples,label"
        assert len(out.splitlines()) == 5

    def test_trap_free_saddle_domain(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        run_cli(["preset", "spin-rotation", "--T", "pi/12",
                 "--vx", f"{1 / SQRT5}", "--vy", f"{-2 / SQRT5}",
                 "--out", str(prob)], capsys)
        code, out, _ = run_cli(["trap-free", "--problem", str(prob)], capsys)
        assert code == 0
        verdict = json.loads(out)
        assert verdict["reason"] == "SaddleDomain"
        assert "cross_vr_va" in verdict["details"]

    def test_probe_saddle_report(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        run_cli(["preset", "spin-rotation", "--T", "pi/12",
                 "--vx", f"{1 / SQRT5}", "--vy", f"{-2 / SQRT5}",
                 "--out", str(prob)], capsys)
        code, out, _ = run_cli(["probe-saddle", "--problem", str(prob)], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["verdict"] == "Saddle"
        assert report["J_down"] < report["J0"] < report["J_up"]

    def test_probe_saddle_out_of_regime_exit_3(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        run_cli(["preset", "spin-rotation", "--T", "pi/12", "--out", str(prob)],
                capsys)  # default v = e_x sits in D_I at this horizon
        code, _, err = run_cli(["probe-saddle", "--problem", str(prob)], capsys)
        assert code == 3
        assert "D_III or D_IV" in err

    def test_evaluate_matches_library(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        ctrl = tmp_path / "c.txt"
        run_cli(["preset", "spin-rotation", "--T", "1.0", "--out", str(prob)],
                capsys)
        rng = np.random.default_rng(5)
        control = PiecewiseControl.uniform(1.0, rng.normal(size=12))
        save_control(ctrl, control)
        code, out, _ = run_cli(["evaluate", "--problem", str(prob),
                                "--control", str(ctrl)], capsys)
        assert code == 0
        rp = reduce_problem(make_preset("spin-rotation", T=1.0))
        assert float(out) == objective(rp, control)
        code, out, _ = run_cli(["evaluate", "--problem", str(prob),
                                "--control", str(ctrl), "--format", "json"],
                               capsys)
        assert json.loads(out)["J"] == objective(rp, control)

    def test_evaluate_horizon_mismatch_exit_3(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        ctrl = tmp_path / "c.txt"
        run_cli(["preset", "spin-rotation", "--T", "1.0", "--out", str(prob)],
                capsys)
        save_control(ctrl, PiecewiseControl.zero(0.5, 3))
        code, _, err = run_cli(["evaluate", "--problem", str(prob),
                                "--control", str(ctrl)], capsys)
        assert code == 3
        assert "horizon" in err

    def test_hessian_grid_csv(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        run_cli(["preset", "spin-rotation", "--T", "pi/4", "--out", str(prob)],
                capsys)
        code, out, _ = run_cli(["hessian", "--problem", str(prob),
                                "--grid", "4x5"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "t1,t2,value"
        assert len(lines) == 1 + 4 * 5
        t1, t2, value = lines[1].split(",")
        assert float(t1) == 0.0 and float(t2) == 0.0
        float(value)

    def test_classify(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        run_cli(["preset", "spin-rotation", "--T", "pi/12", "--out", str(prob)],
                capsys)
        code, out, _ = run_cli(["classify", "--problem", str(prob)], capsys)
        assert code == 0
        assert out.strip() == "D1"

    def test_span_rank_landau_zener(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        run_cli(["preset", "landau-zener", "--T", "1.0", "--out", str(prob)],
                capsys)
        zero = tmp_path / "zero.txt"
        save_control(zero, PiecewiseControl.zero(1.0))
        code, out, _ = run_cli(["span-rank", "--problem", str(prob),
                                "--control", str(zero)], capsys)
        assert code == 0 and out.strip() == "2"
        biased = tmp_path / "biased.txt"
        save_control(biased, PiecewiseControl.uniform(1.0, [1.0]))
        code, out, _ = run_cli(["span-rank", "--problem", str(prob),
                                "--control", str(biased)], capsys)
        assert code == 0 and out.strip() == "3"

    def test_optimize_report(self, tmp_path, capsys):
        prob = tmp_path / "p.txt"
        run_cli(["preset", "spin-rotation", "--T", "2*pi/3", "--out", str(prob)],
                capsys)
        out = tmp_path / "opt.json"
        code, _, _ = run_cli(["optimize", "--problem", str(prob),
                              "--intervals", "20", "--seed", "1",
                              "--max-iter", "200", "--out", str(out)], capsys)
        assert code == 0
        report = json.loads(out.read_text())
        trace = report["j_trace"]
        assert all(b >= a for a, b in zip(trace, trace[1:]))
        assert report["start_seed"] == 1
        assert out.with_suffix(".json.manifest.json").exists()

    def test_bad_problem_file_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("H0.c0 = 1\nnot a line\n")
        code, _, err = run_cli(["info", "--problem", str(bad)], capsys)
        assert code == 2
        assert "error:" in err

    def test_missing_file_exit_2(self, capsys):
        code, _, _ = run_cli(["info", "--problem", "/nonexistent/x.txt"], capsys)
        assert code == 2

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["scan", "--T", "1.0", "--frobnicate"])
        assert exc.value.code == 2


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "qlandscape", "preset", "scan-default",
             "--T", "pi/3", "--phi", "1.0", "--psi", "2.0"],
            capture_output=True, text=True)
        assert result.returncode == 0
        assert "rho0.hy = 0.5" in result.stdout

    def test_version_flag(self):
        result = subprocess.run(
            [sys.executable, "-m", "qlandscape", "--version"],
            capture_output=True, text=True)
        assert result.returncode == 0
        assert "qlandscape" in result.stdout
