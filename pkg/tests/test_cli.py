"""End-to-end command-line behavior: flags, outputs, determinism, exit codes."""

import math

import numpy as np
import pytest

from legdiff.cli import main
from legdiff.coeffs import CoeffField, save_csv


def _parse_grid_csv(text, header):
    lines = text.splitlines()
    assert lines[0] == header
    return [tuple(float(part) for part in line.split(",")) for line in lines[1:]]


class TestDifferentiate:
    def test_builtin_grid_output(self, capsys):
        code = main(
            [
                "differentiate", "--builtin", "f2", "--r", "2", "--mu", "6",
                "--delta", "1e-6", "--noise", "none", "--n", "11", "--grid", "5",
            ]
        )
        captured = capsys.readouterr()
        assert code == 0
        rows = _parse_grid_csv(captured.out, "t,tau,value")
        assert len(rows) == 25
        assert all(math.isfinite(v) for _, _, v in rows)
        ts = sorted({row[0] for row in rows})
        assert ts == [-1.0, -0.5, 0.0, 0.5, 1.0]
        assert "n=11" in captured.err
        # Builtin references carry their exact derivative: diagnostics appear.
        assert "card=" in captured.err
        assert "l2_error=" in captured.err
        assert "sup_error=" in captured.err

    def test_coeffs_file_resolves_level_from_rule(self, tmp_path, capsys):
        path = tmp_path / "c.csv"
        save_csv(CoeffField.from_entries({(2, 2): 0.1, (3, 2): -0.05}), path)
        code = main(
            [
                "differentiate", "--coeffs", str(path), "--r", "2",
                "--mu", "5.5", "--delta", "1e-7", "--grid", "9",
            ]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert "n=19" in captured.err
        # No exact derivative is known for file input: no error diagnostics.
        assert "l2_error=" not in captured.err
        assert len(_parse_grid_csv(captured.out, "t,tau,value")) == 81

    def test_noise_changes_output_deterministically(self, capsys):
        common = [
            "differentiate", "--builtin", "f1", "--mu", "5.5", "--delta", "1e-6",
            "--seed", "7", "--n", "6", "--grid", "5",
        ]
        noisy = common + ["--noise", "gaussian"]
        assert main(noisy) == 0
        first = capsys.readouterr().out
        assert main(noisy) == 0
        second = capsys.readouterr().out
        assert first == second
        assert main(common + ["--noise", "none"]) == 0
        clean = capsys.readouterr().out
        assert first != clean

    def test_writes_to_file(self, tmp_path, capsys):
        out = tmp_path / "grid.csv"
        code = main(
            [
                "differentiate", "--builtin", "f2", "--mu", "6",
                "--n", "11", "--grid", "3", "--out", str(out),
            ]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert captured.out == ""
        assert len(_parse_grid_csv(out.read_text(), "t,tau,value")) == 9

    def test_smoothness_below_bound_is_usage_error(self, capsys):
        code = main(
            [
                "differentiate", "--builtin", "f1", "--r", "2",
                "--mu", "4", "--s", "2", "--delta", "1e-6",
            ]
        )
        captured = capsys.readouterr()
        assert code == 2
        assert "error:" in captured.err

    def test_missing_mu_is_usage_error(self, capsys):
        assert main(["differentiate", "--builtin", "f1"]) == 2
        capsys.readouterr()

    def test_source_required_and_exclusive(self, tmp_path, capsys):
        assert main(["differentiate", "--mu", "6"]) == 2
        capsys.readouterr()
        path = tmp_path / "c.csv"
        save_csv(CoeffField.from_entries({(2, 2): 0.1}), path)
        assert (
            main(
                [
                    "differentiate", "--coeffs", str(path),
                    "--builtin", "f1", "--mu", "6",
                ]
            )
            == 2
        )
        capsys.readouterr()

    def test_noise_without_positive_delta_is_usage_error(self, capsys):
        code = main(
            ["differentiate", "--builtin", "f1", "--mu", "5.5", "--n", "6",
             "--noise", "gaussian"]
        )
        captured = capsys.readouterr()
        assert code == 2
        assert "delta" in captured.err

    def test_malformed_coeffs_file_is_data_error(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("k,j,value\n1,not_a_number,3.0\n")
        code = main(
            ["differentiate", "--coeffs", str(path), "--mu", "5.5", "--delta", "1e-7"]
        )
        captured = capsys.readouterr()
        assert code == 1
        assert "error:" in captured.err

    def test_unwritable_output_is_runtime_error(self, tmp_path, capsys):
        missing_dir = tmp_path / "absent" / "grid.csv"
        code = main(
            [
                "differentiate", "--builtin", "f2", "--mu", "6",
                "--n", "11", "--grid", "3", "--out", str(missing_dir),
            ]
        )
        capsys.readouterr()
        assert code == 1


class TestExperiment:
    def test_unknown_preset_is_usage_error(self, capsys):
        assert main(["experiment", "--preset", "bogus"]) == 2
        capsys.readouterr()

    def test_table3_rows(self, capsys):
        code = main(["experiment", "--preset", "table3"])
        captured = capsys.readouterr()
        assert code == 0
        lines = captured.out.splitlines()
        assert lines[0] == "delta,n,card,l2_error,sup_error,seed"
        assert len(lines) == 4
        deltas = [line.split(",")[0] for line in lines[1:]]
        assert deltas == ["1e-06", "1e-07", "1e-08"]
        ns = [line.split(",")[1] for line in lines[1:]]
        assert ns == ["11", "18", "25"]

    def test_stochastic_preset_structure_and_determinism(self, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        argv = ["experiment", "--preset", "table1", "--seeds", "2"]
        assert main(argv + ["--out", str(out_a)]) == 0
        assert main(argv + ["--out", str(out_b)]) == 0
        text = out_a.read_text()
        assert text == out_b.read_text()
        lines = text.splitlines()
        # Header + 3 deltas * (2 seeds + 1 median).
        assert len(lines) == 10
        assert lines[3].split(",")[5] == "median"

    def test_zero_seeds_is_usage_error(self, capsys):
        assert main(["experiment", "--preset", "table1", "--seeds", "0"]) == 2
        capsys.readouterr()


class TestConvergence:
    def test_sweep_reports_slope(self, tmp_path, capsys):
        out = tmp_path / "rows.csv"
        code = main(
            [
                "convergence", "--builtin", "f2", "--mu", "6", "--r", "2",
                "--deltas", "1e-5:1e-8:4", "--seeds", "2", "--out", str(out),
            ]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert captured.out.startswith("fitted_slope=")
        assert "theoretical_exponent=" in captured.out
        slope = float(captured.out.split()[0].split("=")[1])
        assert math.isfinite(slope)
        lines = out.read_text().splitlines()
        assert lines[0] == "delta,n,card,l2_error,sup_error,seed"
        # 4 deltas * (2 seeds + 1 median).
        assert len(lines) == 13

    def test_rows_go_to_stdout_without_out(self, capsys):
        code = main(
            [
                "convergence", "--builtin", "f1", "--mu", "5.5",
                "--deltas", "1e-4:1e-7:4", "--seeds", "1", "--noise", "none",
            ]
        )
        captured = capsys.readouterr()
        assert code == 0
        lines = captured.out.splitlines()
        assert lines[0] == "delta,n,card,l2_error,sup_error,seed"
        assert lines[-1].startswith("fitted_slope=")

    def test_malformed_delta_range_is_usage_error(self, capsys):
        for bad in ("1e-5:1e-9", "1e-5:1e-9:1", "a:b:3", "-1e-5:1e-9:5"):
            assert main(
                ["convergence", "--builtin", "f2", "--mu", "6", "--deltas", bad]
            ) == 2
            capsys.readouterr()

    def test_too_narrow_range_is_data_error(self, capsys):
        code = main(
            ["convergence", "--builtin", "f2", "--mu", "6",
             "--deltas", "1e-5:1e-6:3", "--seeds", "1"]
        )
        captured = capsys.readouterr()
        assert code == 1
        assert "decades" in captured.err


class TestBasis:
    def test_second_derivative_of_phi2_is_constant(self, capsys):
        code = main(["basis", "--k", "2", "--r", "2", "--grid", "3"])
        captured = capsys.readouterr()
        assert code == 0
        rows = _parse_grid_csv(captured.out, "t,value")
        assert [t for t, _ in rows] == [-1.0, 0.0, 1.0]
        for _, v in rows:
            assert v == pytest.approx(3.0 * math.sqrt(5.0) / math.sqrt(2.0), rel=1e-12)
            assert v == pytest.approx(4.7434165, rel=1e-7)

    def test_phi0_value(self, capsys):
        code = main(["basis", "--k", "0", "--r", "0", "--grid", "1"])
        captured = capsys.readouterr()
        assert code == 0
        rows = _parse_grid_csv(captured.out, "t,value")
        assert len(rows) == 1
        assert rows[0][1] == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)

    def test_derivative_of_constant_is_zero(self, capsys):
        code = main(["basis", "--k", "0", "--r", "1", "--grid", "5"])
        captured = capsys.readouterr()
        assert code == 0
        rows = _parse_grid_csv(captured.out, "t,value")
        assert all(v == 0.0 for _, v in rows)

    def test_matches_derivative_oracle(self, capsys):
        # phi_5' sampled on a grid must match an independent polynomial oracle.
        import numpy.polynomial.legendre as npleg

        code = main(["basis", "--k", "5", "--r", "1", "--grid", "41"])
        captured = capsys.readouterr()
        assert code == 0
        rows = _parse_grid_csv(captured.out, "t,value")
        ts = np.array([t for t, _ in rows])
        values = np.array([v for _, v in rows])
        basis5 = np.zeros(6)
        basis5[5] = math.sqrt(5.5)
        oracle = npleg.legval(ts, npleg.legder(basis5, 1))
        np.testing.assert_allclose(values, oracle, rtol=1e-12, atol=1e-12)


class TestSharedFlags:
    def test_threads_must_be_positive(self, capsys):
        assert main(
            ["differentiate", "--builtin", "f1", "--mu", "5.5", "--n", "6",
             "--threads", "0"]
        ) == 2
        capsys.readouterr()

    def test_threads_accepted_and_inert(self, capsys):
        argv = ["basis", "--k", "2", "--r", "2", "--grid", "3"]
        assert main(argv) == 0
        base = capsys.readouterr().out
        assert main(argv + ["--threads", "4"]) == 0
        assert capsys.readouterr().out == base

    def test_missing_subcommand_is_usage_error(self, capsys):
        assert main([]) == 2
        capsys.readouterr()
