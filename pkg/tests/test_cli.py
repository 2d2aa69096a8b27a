"""
Command Line Tests

End-to-end tests of the qudit-msd subcommands and their exit codes.
"""

import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

# Add project root
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import cli.main
from cli.main import main
from src.distillation.sweep import SurveyRow
from src.serialization.formats import file_digest


def write_json(path: Path, payload) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


class TestCanonicalize:
    """Test suite for the canonicalize command."""

    def test_trivial(self, tmp_path, capsys):
        """Test Z(x)I reports trivial."""
        code = write_json(tmp_path / "c.json", {"d": 3, "N": 2, "rows": [[1, 0, 0, 0]]})
        assert main(["canonicalize", str(code)]) == 0
        assert "trivial: true" in capsys.readouterr().out

    def test_nontrivial(self, tmp_path, capsys):
        """Test Z(x)Z reports nontrivial."""
        code = write_json(tmp_path / "c.json", {"d": 3, "N": 2, "rows": [[1, 1, 0, 0]]})
        assert main(["canonicalize", str(code)]) == 0
        assert "trivial: false" in capsys.readouterr().out

    def test_malformed(self, tmp_path):
        """Test exit code 2 on malformed JSON."""
        path = tmp_path / "c.json"
        path.write_text("{not json")
        assert main(["canonicalize", str(path)]) == 2

    def test_invalid_code(self, tmp_path):
        """Test exit code 2 on non-commuting generators."""
        code = write_json(tmp_path / "c.json",
                          {"d": 3, "N": 3, "rows": [[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0]]})
        assert main(["canonicalize", str(code)]) == 2

    def test_bad_arguments(self):
        """Test exit code 2 on an unknown subcommand."""
        assert main(["transmogrify"]) == 2

    def test_stdout_run_writes_manifest(self, tmp_path, manifest_dir):
        """Test that a run without --output still leaves a manifest."""
        code = write_json(tmp_path / "c.json", {"d": 3, "N": 2, "rows": [[1, 1, 0, 0]]})
        assert main(["canonicalize", str(code)]) == 0
        manifests = list(manifest_dir.glob("canonicalize-*.manifest.json"))
        assert len(manifests) == 1
        manifest = json.loads(manifests[0].read_text())
        assert manifest["command"] == "canonicalize"
        assert manifest["exit_code"] == 0
        assert manifest["outputs"] == {}
        assert manifest["parameters"]["code"] == str(code)


class TestDistill:
    """Test suite for the distill command."""

    def test_exact_trivial(self, tmp_path, trivial_code, strange_wigner):
        """Test that the trivial code returns its input and writes a manifest."""
        out = tmp_path / "out.json"
        assert main(["distill", str(trivial_code), str(strange_wigner), "--output", str(out)]) == 0
        result = json.loads(out.read_text())
        assert np.allclose(result["values"], [-1 / 3] + [1 / 6] * 8, atol=1e-12)
        manifest = json.loads(Path(str(out) + ".manifest.json").read_text())
        assert manifest["exit_code"] == 0
        assert manifest["outputs"][str(out)] == file_digest(out)

    def test_mc_negative_input(self, tmp_path, trivial_code, strange_wigner):
        """Test exit code 4 when Monte Carlo is given a negative state."""
        assert main(["distill", str(trivial_code), str(strange_wigner),
                     "--engine", "mc", "--samples", "1000"]) == 4

    def test_mc_positive(self, tmp_path, trivial_code):
        """Test a Monte Carlo run on the uniform state."""
        state = write_json(tmp_path / "w.json", {"d": 3, "values": [1 / 9] * 9})
        out = tmp_path / "mc.json"
        assert main(["distill", str(trivial_code), str(state), "--engine", "mc",
                     "--samples", "20000", "--seed", "3", "--output", str(out)]) == 0
        result = json.loads(out.read_text())
        assert result["samples"] == 20000
        assert result["seed"] == 3
        assert abs(result["acceptance_probability"] - 1 / 3) < 0.02

    def test_zero_acceptance(self, tmp_path, zero_syndrome_code):
        """Test exit code 3 when nothing lands in the codespace."""
        values = [1 / 6] * 9
        for i in (0, 3, 6):
            values[i] = 0.0
        state = write_json(tmp_path / "w.json", {"d": 3, "values": values})
        assert main(["distill", str(zero_syndrome_code), str(state)]) == 3

    def test_strange_state_on_zero_weight_line(self, zero_syndrome_code, strange_wigner):
        """Test exit code 3: the x=0 line of the strange state sums to 0."""
        assert main(["distill", str(zero_syndrome_code), str(strange_wigner)]) == 3


class TestSweep:
    """Test suite for the sweep command."""

    def test_trivial(self, tmp_path, trivial_code):
        """Test nu_out = nu_in for the trivial code."""
        out = tmp_path / "sweep.csv"
        assert main(["sweep", str(trivial_code), "--output", str(out)]) == 0
        frame = pd.read_csv(out)
        assert len(frame) == 101
        assert np.allclose(frame["nu_out"], frame["nu_in"], atol=1e-12)

    def test_nontrivial(self, tmp_path):
        """Test the Z(x)Z gap and the maximally mixed fixed point."""
        code = write_json(tmp_path / "c.json", {"d": 3, "N": 2, "rows": [[1, 1, 0, 0]]})
        out = tmp_path / "sweep.csv"
        assert main(["sweep", str(code), "--nu-min", "0", "--nu-max", str(1 / 9),
                     "--steps", "2", "--output", str(out)]) == 0
        frame = pd.read_csv(out)
        assert frame["nu_out"][0] == pytest.approx(1 / 11, abs=1e-12)
        assert frame["nu_out"][1] == pytest.approx(1 / 9, abs=1e-12)


class TestWitness:
    """Test suite for the witness command."""

    def test_maximally_mixed(self, tmp_path, capsys):
        """Test that I/3 is not contextual."""
        state = write_json(tmp_path / "rho.json",
                           {"d": 3, "re": (np.eye(3) / 3).tolist()})
        assert main(["witness", str(state)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["value"] == pytest.approx(80 / 3)
        assert report["contextual"] is False

    def test_strange_state(self, tmp_path, strange_wigner, capsys):
        """Test that the strange state is contextual at the origin."""
        assert main(["witness", str(strange_wigner), "--face", "0,0"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["value"] == pytest.approx(28.0)
        assert report["contextual"] is True

    def test_bad_face(self, strange_wigner):
        """Test exit code 2 on an unparsable face."""
        assert main(["witness", str(strange_wigner), "--face", "zero"]) == 2

    def test_non_hermitian_state(self, tmp_path):
        """Test exit code 2 on a dense matrix that is not Hermitian."""
        state = write_json(tmp_path / "rho.json",
                           {"d": 3, "re": [[1, 5, 0], [0, 0, 0], [0, 0, 0]]})
        assert main(["witness", str(state)]) == 2


class TestTheorem2:
    """Test suite for the survey command."""

    def test_no_codes(self, tmp_path):
        """Test that zero codes succeed."""
        assert main(["theorem2", "--codes", "0", "--output", str(tmp_path / "s.csv")]) == 0

    def test_reproducible(self, tmp_path):
        """Test identical tables for a fixed seed."""
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["theorem2", "--codes", "6", "--n-max", "3", "--seed", "9",
                         "--output", str(out)]) == 0
        assert a.read_text() == b.read_text()
        frame = pd.read_csv(a)
        assert frame["consistent"].all()
        assert (frame["margin"] <= 0).all()
        assert (frame.loc[frame["trivial"], "margin"] == 0).all()

    def test_dichotomy_failure_exit_code(self, tmp_path, monkeypatch, capsys):
        """Test exit code 4 when a trivial code reports a nonzero gap."""
        broken = [SurveyRow("0" * 16, 2, True, 0.5, 0.0)]
        monkeypatch.setattr(cli.main, "theorem2_survey", lambda *args, **kwargs: broken)
        assert main(["theorem2", "--codes", "1", "--output", str(tmp_path / "s.csv")]) == 4
        assert "dichotomy failures: 1" in capsys.readouterr().out


class TestGraph:
    """Test suite for the graph command."""

    def test_counts(self, tmp_path, capsys):
        """Test counts and the DIMACS export at d=3."""
        out = tmp_path / "g.dimacs"
        assert main(["graph", "--d", "3", "--face", "0,0", "--out", str(out)]) == 0
        assert "vertices: 240, edges: 7116" in capsys.readouterr().out
        assert out.read_text().startswith("p edge 240 7116")
        assert Path(str(out) + ".manifest.json").exists()


@pytest.fixture(autouse=True)
def manifest_dir(tmp_path, monkeypatch):
    """Send stdout-run manifests to a temporary directory."""
    out = tmp_path / "outputs"
    monkeypatch.setattr(cli.main, "OUTPUT_DIR", out)
    return out / "manifests"


@pytest.fixture
def trivial_code(tmp_path):
    """Z(x)I code file at d=3 with syndrome 1: qudit 1 fixed on the line x=1."""
    return write_json(tmp_path / "trivial.json",
                      {"d": 3, "N": 2, "rows": [[1, 0, 0, 0]], "syndrome": [1]})


@pytest.fixture
def zero_syndrome_code(tmp_path):
    """Z(x)I code file at d=3 with syndrome 0: qudit 1 fixed on the line x=0."""
    return write_json(tmp_path / "trivial0.json", {"d": 3, "N": 2, "rows": [[1, 0, 0, 0]]})


@pytest.fixture
def strange_wigner(tmp_path):
    """Wigner file of (|1> - |2>)/sqrt 2."""
    return write_json(tmp_path / "strange.json", {"d": 3, "values": [-1 / 3] + [1 / 6] * 8})


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
