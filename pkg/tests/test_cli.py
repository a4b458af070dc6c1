"""End-to-end tests of the command-line interface and its exit codes."""

import json
import subprocess
import sys

import pytest

from polydensity.cli import main


@pytest.fixture
def write_config(tmp_path):
    def _write(name="cfg.json", **overrides):
        config = {
            "polynomials": ["x1^2 + x2^2"],
            "box": [[1, 2], [1, 2]],
            "mode": "squarefree",
            "P_grid": [20, 40],
            "euler_cutoff": 30,
            "tolerances": {},
        }
        config.update(overrides)
        path = tmp_path / name
        path.write_text(json.dumps(config))
        return str(path)

    return _write


class TestCheck:
    def test_passing_config(self, write_config, capsys):
        code = main(["check", write_config()])
        assert code == 0
        out = capsys.readouterr().out
        assert "theorem-1.4" in out
        assert "[ pass  ]" in out

    def test_gated_config(self, write_config, capsys):
        code = main(["check", write_config(mode="prime")])
        assert code == 2
        assert "fail" in capsys.readouterr().out

    def test_missing_file(self, tmp_path, capsys):
        code = main(["check", str(tmp_path / "nope.json")])
        assert code == 4
        assert "config error" in capsys.readouterr().err

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["check", str(path)]) == 4

    def test_invalid_schema(self, write_config):
        assert main(["check", write_config(mode="nonsense")]) == 4


class TestDensities:
    def test_stdout_csv(self, write_config, capsys):
        code = main(["densities", write_config()])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].strip() == "P,euler_value,euler_tail,li_value,predicted"
        assert len(lines) == 3

    def test_gate(self, write_config, capsys):
        assert main(["densities", write_config(mode="prime")]) == 2

    def test_forced(self, write_config):
        code = main(
            ["densities", write_config(mode="prime", force=True, P_grid=[20])]
        )
        assert code == 0


class TestExpsum:
    def test_table(self, write_config, capsys):
        code = main(["expsum", write_config(), "--q", "5"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].strip() == "q,a,re,im"
        # phi(5) = 4 residues plus the T_f and G summary rows
        assert len(lines) == 1 + 4 + 2

    def test_bad_q(self, write_config):
        assert main(["expsum", write_config(), "--q", "0"]) == 4

    def test_budget(self, write_config):
        cfg = write_config(
            polynomials=["x1^2 + x2^2"], budget=10
        )
        assert main(["expsum", cfg, "--q", "97"]) == 3


class TestCount:
    def test_counts(self, write_config, tmp_path):
        out = tmp_path / "counts.csv"
        code = main(["count", write_config(), "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].strip() == "P,lattice_points,count"
        p, lat, cnt = lines[1].strip().split(",")
        assert (p, lat) == ("20", str(21 * 21))
        assert 0 < int(cnt) <= 21 * 21

    def test_budget(self, write_config, capsys):
        cfg = write_config(P_grid=[10, 10**6], budget=10**6)
        assert main(["count", cfg]) == 3
        assert "budget" in capsys.readouterr().err


class TestVerify:
    def test_json_report(self, write_config, tmp_path):
        out = tmp_path / "report.json"
        code = main(["verify", write_config(P_grid=[20]), "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["mode"] == "squarefree"
        assert len(doc["rows"]) == 1
        assert 0.8 < doc["rows"][0]["ratio"] < 1.2

    def test_csv_format(self, write_config, capsys):
        code = main(["verify", write_config(P_grid=[20]), "--format", "csv"])
        assert code == 0
        header = capsys.readouterr().out.strip().splitlines()[0].strip()
        assert header == (
            "P,lattice_points,empirical,predicted,ratio,"
            "euler_value,euler_tail,li_value,li_error"
        )

    def test_gate_exit(self, write_config):
        assert main(["verify", write_config(mode="prime")]) == 2

    def test_budget_exit(self, write_config):
        cfg = write_config(P_grid=[10, 10**6], budget=10**6)
        assert main(["verify", cfg]) == 3

    def test_bad_format(self, write_config):
        assert main(["verify", write_config(), "--format", "xml"]) == 4


class TestReport:
    def test_reemit_csv(self, write_config, tmp_path, capsys):
        saved = tmp_path / "report.json"
        assert main(["verify", write_config(P_grid=[20]), "--out", str(saved)]) == 0
        code = main(["report", str(saved), "--format", "csv"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0].strip().startswith("P,lattice_points")

    def test_reemit_plot_data(self, write_config, tmp_path, capsys):
        saved = tmp_path / "report.json"
        main(["verify", write_config(P_grid=[20]), "--out", str(saved)])
        assert main(["report", str(saved), "--format", "plot-data"]) == 0
        assert capsys.readouterr().out.startswith("#")

    def test_missing_report(self, tmp_path):
        assert main(["report", str(tmp_path / "x.json"), "--format", "csv"]) == 4

    def test_format_required(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text("{}")
        assert main(["report", str(path)]) == 4


class TestTopLevel:
    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == 4

    def test_no_arguments(self):
        assert main([]) == 4

    def test_module_invocation(self, tmp_path):
        config = {
            "polynomials": ["x1^2 + x2^2"],
            "box": [[1, 2], [1, 2]],
            "mode": "squarefree",
            "P_grid": [10],
            "euler_cutoff": 30,
            "tolerances": {},
        }
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(config))
        proc = subprocess.run(
            [sys.executable, "-m", "polydensity.cli", "check", str(path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "pass" in proc.stdout
