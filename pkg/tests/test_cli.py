import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from bandedhh import read_matrix, write_matrix
from bandedhh.cli import main

ORACLE_SCRIPT = Path(__file__).resolve().parent.parent / "scripts" / "dense_apply_oracle.py"


def write_random(path, m, n, seed):
    a = np.random.default_rng(seed).standard_normal((m, n))
    write_matrix(a, path)
    return a


class TestFactorCommand:
    def test_tall_mode_top_placement(self, tmp_path, capsys):
        write_random(tmp_path / "a.txt", 7, 4, 0)
        code = main(["factor", str(tmp_path / "a.txt"), str(tmp_path / "a.bhf"),
                     "--mode", "tall"])
        out = capsys.readouterr().out
        assert code == 0
        assert "placement: TOP" in out
        assert "12 floats (+4 betas)" in out
        assert (tmp_path / "a.bhf").stat().st_size == 280

    def test_auto_mode_narrow_band(self, tmp_path, capsys):
        write_random(tmp_path / "a.txt", 10, 9, 1)
        code = main(["factor", str(tmp_path / "a.txt"), str(tmp_path / "a.bhf")])
        out = capsys.readouterr().out
        assert code == 0
        assert "placement: BOTTOM" in out
        assert "9 floats (+1 betas)" in out

    def test_wide_input_rejected(self, tmp_path, capsys):
        write_random(tmp_path / "a.txt", 3, 5, 2)
        code = main(["factor", str(tmp_path / "a.txt"), str(tmp_path / "a.bhf")])
        assert code == 1
        assert "m >= n" in capsys.readouterr().err

    def test_missing_input(self, tmp_path, capsys):
        code = main(["factor", str(tmp_path / "nope.txt"), str(tmp_path / "a.bhf")])
        assert code == 1
        assert capsys.readouterr().err.startswith("error:")

    def test_self_check_passes(self, tmp_path, capsys):
        write_random(tmp_path / "a.txt", 12, 5, 3)
        code = main(["factor", str(tmp_path / "a.txt"), str(tmp_path / "a.bhf"),
                     "--self-check"])
        assert code == 0
        assert "self-check: ok" in capsys.readouterr().out


class TestApplyCommand:
    def _factor(self, tmp_path, m, n, seed):
        a = write_random(tmp_path / "a.txt", m, n, seed)
        assert main(["factor", str(tmp_path / "a.txt"), str(tmp_path / "a.bhf")]) == 0
        return a

    def test_square_factor_is_identity(self, tmp_path, capsys):
        self._factor(tmp_path, 5, 5, 4)
        capsys.readouterr()
        x = write_random(tmp_path / "x.txt", 5, 1, 5)
        code = main(["apply", str(tmp_path / "a.bhf"), str(tmp_path / "x.txt")])
        assert code == 0
        out = capsys.readouterr().out
        (tmp_path / "y.txt").write_text(out)
        assert np.array_equal(read_matrix(tmp_path / "y.txt"), x)

    def test_apply_then_transpose_restores(self, tmp_path, capsys):
        self._factor(tmp_path, 9, 4, 6)
        capsys.readouterr()
        x = write_random(tmp_path / "x.txt", 9, 1, 7)
        assert main(["apply", str(tmp_path / "a.bhf"), str(tmp_path / "x.txt")]) == 0
        (tmp_path / "y.txt").write_text(capsys.readouterr().out)
        assert main(["apply", str(tmp_path / "a.bhf"), str(tmp_path / "y.txt"),
                     "--transpose"]) == 0
        (tmp_path / "z.txt").write_text(capsys.readouterr().out)
        z = read_matrix(tmp_path / "z.txt")
        assert np.linalg.norm(z - x) <= 1e-13 * np.linalg.norm(x)

    def test_matches_dense_oracle_script(self, tmp_path, capsys):
        self._factor(tmp_path, 8, 3, 8)
        capsys.readouterr()
        write_random(tmp_path / "x.txt", 8, 1, 9)
        assert main(["apply", str(tmp_path / "a.bhf"), str(tmp_path / "x.txt")]) == 0
        (tmp_path / "y.txt").write_text(capsys.readouterr().out)
        result = subprocess.run(
            [sys.executable, str(ORACLE_SCRIPT), str(tmp_path / "a.bhf"),
             str(tmp_path / "x.txt")],
            capture_output=True, text=True, check=True)
        (tmp_path / "y_oracle.txt").write_text(result.stdout)
        y = read_matrix(tmp_path / "y.txt")
        y_oracle = read_matrix(tmp_path / "y_oracle.txt")
        assert np.linalg.norm(y - y_oracle) <= 1e-13 * np.linalg.norm(y_oracle)

    def test_dimension_mismatch(self, tmp_path, capsys):
        self._factor(tmp_path, 9, 4, 10)
        capsys.readouterr()
        write_random(tmp_path / "x.txt", 5, 1, 11)
        code = main(["apply", str(tmp_path / "a.bhf"), str(tmp_path / "x.txt")])
        assert code == 1
        assert "does not match" in capsys.readouterr().err

    def test_corrupt_factor_file(self, tmp_path, capsys):
        (tmp_path / "bad.bhf").write_bytes(b"XHF1" + b"\x00" * 40)
        write_random(tmp_path / "x.txt", 5, 1, 12)
        code = main(["apply", str(tmp_path / "bad.bhf"), str(tmp_path / "x.txt")])
        assert code == 1
        assert "magic" in capsys.readouterr().err


class TestReportCommand:
    def test_seven_by_four(self, capsys):
        assert main(["report", "7", "4"]) == 0
        out = capsys.readouterr().out
        assert "dense:       28" in out
        assert "householder: 18.0" in out
        assert "banded:      12" in out
        assert "banded/dense:       42.9%" in out
        assert "banded/householder: 66.7%" in out

    def test_square_has_zero_banded(self, capsys):
        assert main(["report", "5", "5"]) == 0
        assert "banded:      0" in capsys.readouterr().out

    def test_double_ratio(self, capsys):
        assert main(["report", "8", "4"]) == 0
        assert "banded/dense:       50.0%" in capsys.readouterr().out

    def test_monotone_counts(self, capsys):
        from bandedhh.cli import StorageReport

        for m in range(1, 101):
            for n in range(1, m + 1):
                rep = StorageReport(m, n)
                assert rep.banded_floats <= rep.householder_floats <= rep.dense_floats

    def test_invalid_shape(self, capsys):
        assert main(["report", "3", "5"]) == 1


class TestBenchCommand:
    def test_prints_flop_formula(self, capsys):
        m, n = 24, 6
        assert main(["bench", str(m), str(n), "--reps", "2", "--seed", "3"]) == 0
        out = capsys.readouterr().out
        assert f"banded matvec flops: {4 * n * (m - n) + 2 * n}" in out

    def test_block_report(self, capsys):
        assert main(["bench", "40", "16", "--reps", "2", "--block-size", "8",
                     "--seed", "4"]) == 0
        out = capsys.readouterr().out
        assert "blocked: block size 8, blocks 2" in out

    def test_seeded_determinism(self, capsys):
        assert main(["bench", "20", "7", "--reps", "1", "--seed", "11"]) == 0
        first = capsys.readouterr().out
        assert main(["bench", "20", "7", "--reps", "1", "--seed", "11"]) == 0
        second = capsys.readouterr().out
        digest = [ln for ln in first.splitlines() if ln.startswith("factor bytes")]
        assert digest == [ln for ln in second.splitlines() if ln.startswith("factor bytes")]

    def test_usage_error(self, capsys):
        assert main(["bench", "4", "9"]) == 1


class TestUsage:
    def test_no_arguments(self):
        assert main([]) == 1

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 1

    def test_help_exits_zero(self):
        assert main(["--help"]) == 0
