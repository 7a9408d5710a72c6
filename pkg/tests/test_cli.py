"""Command-line surface: exit codes, artifacts, manifests."""

import json

import numpy as np
import pytest

from trotterlab.cli import main, parse_grid
from trotterlab.errors import ValidityError


class TestParseGrid:
    def test_log(self):
        grid = parse_grid("log:0.01:1:3")
        np.testing.assert_allclose(grid, [0.01, 0.1, 1.0], rtol=1e-12)

    def test_comma(self):
        assert parse_grid("0.1,0.5") == (0.1, 0.5)

    def test_bad(self):
        with pytest.raises(ValidityError):
            parse_grid("log:1:0.1:5")
        with pytest.raises(ValidityError):
            parse_grid("abc")


class TestPresets:
    def test_list(self, capsys):
        assert main(["presets", "list"]) == 0
        out = capsys.readouterr().out
        for name in ("two-level", "ising8", "tfim6", "h2-jw", "h2-bk",
                     "h2-checksum", "h2-updown"):
            assert name in out

    def test_show_updown(self, capsys):
        assert main(["presets", "show", "h2-updown"]) == 0
        out = capsys.readouterr().out
        assert out.count("H2 terms:") == 1
        # 5 terms with the printed constants
        assert "-0.347" in out and "0.182 XX" in out
        h2_block = out.split("H2 terms:")[1]
        assert len([l for l in h2_block.splitlines() if l.strip()]) == 5

    def test_show_tfim(self, capsys):
        assert main(["presets", "show", "tfim6"]) == 0
        out = capsys.readouterr().out
        assert "+1 ZZIIII" in out and "+0.8 ZIIIII" in out and "+0.9 XIIIII" in out

    def test_show_two_level(self, capsys):
        assert main(["presets", "show", "two-level"]) == 0
        out = capsys.readouterr().out
        assert "+1 X" in out and "+1 Z" in out

    def test_unknown(self, capsys):
        assert main(["presets", "show", "nope"]) == 2


class TestSweepCommand:
    def test_dry_run(self, capsys):
        code = main(["sweep", "--dt-grid", "log:0.01:1:5", "--T-grid", "50",
                     "--out", "/dev/null", "--dry-run"])
        assert code == 0
        assert "5 dt x 1 T" in capsys.readouterr().out

    def test_invalid_fraction(self, capsys):
        code = main(["sweep", "--dt-grid", "0.1", "--T-grid", "50",
                     "--fraction", "1.5", "--out", "/dev/null"])
        assert code == 2

    def test_run_and_manifest(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = main(["sweep", "--preset", "two-level",
                     "--dt-grid", "log:0.05:0.5:6", "--T-grid", "50",
                     "--op-norm", "off", "--threads", "1",
                     "--fit-window", "0.05:0.5", "--out", str(out)])
        assert code == 0
        assert out.exists()
        stdout = capsys.readouterr().out
        assert "exponent" in stdout
        manifest = json.loads((tmp_path / "sweep.csv.manifest.json").read_text())
        assert manifest["command"] == "sweep"
        assert manifest["config"]["dt_grid"] == "log:0.05:0.5:6"
        assert "trotterlab" in manifest["versions"]

    def test_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--dt-grid", "0.1,0.3", "--T-grid", "40",
                "--op-norm", "off", "--threads", "2"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_custom_hamiltonian_file(self, tmp_path):
        ham = tmp_path / "ham.txt"
        ham.write_text("# two-qubit test\n1.0 ZZ\n0.5 ZI\n")
        out = tmp_path / "sweep.csv"
        code = main(["sweep", "--hamiltonian", str(ham), "--dt-grid", "0.2",
                     "--T-grid", "30", "--op-norm", "off", "--out", str(out)])
        assert code == 0
        assert out.exists()


class TestOtherCommands:
    def test_bounds(self, capsys):
        assert main(["bounds", "--preset", "two-level", "--T", "100",
                     "--dt", "0.1"]) == 0
        out = capsys.readouterr().out
        assert "c1 = 1" in out and "c2 = 1" in out and "c3 = 0.5" in out
        assert "lemma1_first_order" in out

    def test_population(self, tmp_path, capsys):
        out = tmp_path / "pops.csv"
        assert main(["population", "--preset", "two-level", "--T", "40",
                     "--dt", "0.5", "--out", str(out)]) == 0
        header = out.read_text().splitlines()[0]
        assert header == "t,u,pop_0,pop_1"

    def test_diagnostics(self, capsys):
        assert main(["diagnostics", "--preset", "two-level", "--T", "50",
                     "--dt", "0.1", "--times", "0,25,50"]) == 0
        out = capsys.readouterr().out
        assert out.count("max|R|") == 3

    def test_step_counts(self, capsys):
        assert main(["step-counts", "--epsilon", "1e-4", "--p", "1"]) == 0
        out = capsys.readouterr().out
        assert "r ~ 100" in out and "1e+06" in out

    def test_variable_step(self, tmp_path, capsys):
        out = tmp_path / "vs.csv"
        assert main(["variable-step", "--preset", "two-level", "--T", "60",
                     "--dt-grid", "0.3,0.6", "--fraction", "0.9",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("dt,T,fraction,infid_standard,infid_variable")
        assert len(lines) == 3

    def test_qaoa_pipeline_validation(self, capsys):
        assert main(["qaoa-pipeline", "--n", "6", "--regularity", "2",
                     "--p-min", "5", "--p-max", "4", "--out-dir", "/tmp/x"]) == 2

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "conf.txt"
        cfg.write_text("# defaults\npreset = two-level\nT = 100\ndt = 0.1\n")
        assert main(["--config", str(cfg), "bounds"]) == 0
        out = capsys.readouterr().out
        assert "theorem1_bound" in out
