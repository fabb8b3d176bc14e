import json

import pytest

from troprec import __version__
from troprec.src.cli import main
from troprec.src.entropy import TightnessPattern


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    """Test cases for `troprec analyze`."""

    def test_text(self, capsys):
        """Test the report for (0, 1, 0)."""
        code, out, _ = run(capsys, "analyze", "0,1,0")
        assert code == 0
        assert "edge 0: [0,2] slope 0 on-edge [0, 2] (progression d=2)" in out
        assert "not regular" in out

    def test_json(self, capsys):
        """Test the machine-readable form for a gapped support."""
        code, out, _ = run(capsys, "analyze", "0,0,inf,0", "--json")
        payload = json.loads(out)
        assert code == 0
        assert payload["support"] == [0, 1, 3]
        assert payload["zero_set_progression"] is None
        assert payload["regularity"]["is_regular"] is False

    def test_regular(self, capsys):
        """Test that (0, 0) is reported regular."""
        _, out, _ = run(capsys, "analyze", "0,0")
        assert out.strip().endswith("regular")
        assert "not regular" not in out

    def test_parse_error(self, capsys):
        """Test that malformed input exits with code 2."""
        code, _, err = run(capsys, "analyze", "0,x,0")
        assert code == 2
        assert "error: MalformedToken" in err


class TestDetect:
    """Test cases for `troprec detect`."""

    def test_all_periodic(self, capsys):
        """Test that (0, 1, 0) exits with 0."""
        code, out, _ = run(capsys, "detect", "0,1,0", "--threads", "1")
        assert code == 0
        assert "verdict: AllPeriodic" in out
        assert "periodic: 2:0,1:0" in out

    def test_json(self, capsys):
        """Test the JSON verdict schema."""
        _, out, _ = run(capsys, "detect", "0,0", "--threads", "1", "--json")
        payload = json.loads(out)
        assert payload["verdict"] == "AllPeriodic"
        assert payload["stable_periodic_only"] is True
        assert payload["cycles"] == [{"d": 1, "values": ["0"], "drift": "0"}]
        assert payload["witness"] is None

    def test_infinite_entry(self, capsys):
        """Test that infinite entries point to the witness command."""
        code, _, err = run(capsys, "detect", "0,0,inf,0", "--threads", "1")
        assert code == 1
        assert "InfiniteCoefficient" in err
        assert "troprec witness" in err

    def test_state_limit(self, capsys):
        """Test that --max-states aborts with exit code 4."""
        code, _, err = run(capsys, "detect", "0,1,0", "--threads", "1", "--max-states", "3")
        assert code == 4
        assert "StateLimitExceeded" in err

    def test_state_limit_from_environment(self, capsys, monkeypatch):
        """Test that TROPREC_MAX_STATES sets the default limit."""
        monkeypatch.setenv("TROPREC_MAX_STATES", "3")
        code, _, _ = run(capsys, "detect", "0,1,0", "--threads", "1")
        assert code == 4

    def test_dot(self, capsys, tmp_path):
        """Test that --dot writes the pruned graph."""
        path = tmp_path / "g.dot"
        code, _, _ = run(capsys, "detect", "0,0", "--threads", "1", "--dot", str(path))
        assert code == 0
        assert path.read_text(encoding="utf-8").startswith("digraph windows {")

    def test_identical_across_threads(self, capsys, tmp_path):
        """Test that the JSON and DOT output do not depend on the worker count."""
        outputs = []
        for threads in ("1", "2"):
            path = tmp_path / f"g{threads}.dot"
            _, out, _ = run(capsys, "detect", "0,1,0", "--threads", threads, "--json", "--dot", str(path))
            outputs.append((out, path.read_text(encoding="utf-8")))
        assert outputs[0] == outputs[1]

    @pytest.mark.slow
    def test_non_periodic(self, capsys):
        """Test that (0, 1, 3, 0) exits with 3 and prints a witness word."""
        code, out, _ = run(capsys, "detect", "0,1,3,0", "--threads", "1")
        assert code == 3
        assert "verdict: NonPeriodicExists" in out
        assert "word: " in out


class TestEntropy:
    """Test cases for `troprec entropy`."""

    def test_table(self, capsys):
        """Test the text table for (0, 0, 0)."""
        code, out, _ = run(capsys, "entropy", "0,0,0", "--s-max", "6")
        assert code == 0
        assert "d_3 = 2  ratio 2/3" in out
        assert "d_6 = 3  ratio 1/2" in out
        assert "lower bound: 1/4" in out

    def test_minimal_json(self, capsys):
        """Test the minimal-mode JSON table."""
        _, out, _ = run(capsys, "entropy", "0,0,0", "--s-max", "5", "--minimal", "--json")
        payload = json.loads(out)
        assert payload["mode"] == "minimal"
        assert [row["dim"] for row in payload["rows"]] == [1, 1, 1]
        assert payload["h_upper"] == "1/5"

    def test_s_max_too_small(self, capsys):
        """Test that a too small --s-max is a domain error."""
        code, _, err = run(capsys, "entropy", "0,1,0", "--s-max", "2")
        assert code == 1
        assert "STooSmall" in err

    def test_inconsistent_table(self, capsys, monkeypatch):
        """Test that a non-subadditive table exits with 1 instead of printing rows."""
        values = {2: 1, 3: 1, 4: 3}
        monkeypatch.setattr("troprec.src.entropy.dimension_search",
                            lambda a, s, mode: (values[s], TightnessPattern(windows=())))
        code, out, err = run(capsys, "entropy", "0,0", "--s-max", "4")
        assert code == 1
        assert "InconsistentTable" in err
        assert "d_4" not in out


class TestCheck:
    """Test cases for `troprec check`."""

    def test_minimal_word(self, capsys):
        """Test a satisfying minimal word."""
        _, out, _ = run(capsys, "check", "0,1,0", "--word", "0,1,0,1,0")
        assert "satisfies: True" in out
        assert "minimal: True" in out

    def test_non_minimal_word(self, capsys):
        """Test that the non-tight position is listed."""
        _, out, _ = run(capsys, "check", "0,0,0", "--word", "0,0,1,0,0")
        assert "minimal: False" in out
        assert "non-minimal positions: [2]" in out

    def test_period(self, capsys):
        """Test a periodic sequence given as d:values:drift."""
        _, out, _ = run(capsys, "check", "0,1,0", "--period", "2:0,1:0", "--json")
        payload = json.loads(out)
        assert payload["satisfies"] is True
        assert payload["minimal"] is True

    def test_short_word(self, capsys):
        """Test that a word shorter than a window is rejected."""
        code, _, err = run(capsys, "check", "0,1,0", "--word", "0,1")
        assert code == 1
        assert "WordTooShort" in err


class TestWitness:
    """Test cases for `troprec witness`."""

    def test_thm2(self, capsys):
        """Test the parity construction."""
        code, out, _ = run(capsys, "witness", "0,1,0,2,0", "--family", "thm2", "--q", "1")
        assert code == 0
        assert "satisfies: True" in out
        assert "minimal: True" in out

    def test_prop1_json(self, capsys):
        """Test the zero set bump with a custom range."""
        code, out, _ = run(capsys, "witness", "0,0,inf,0", "--family", "prop1", "--range", "-4", "6", "--json")
        payload = json.loads(out)
        assert code == 0
        assert payload["word"]["offset"] == -4
        assert len(payload["word"]["values"]) == 11
        assert payload["check"]["minimal"] is True

    def test_polygon_defaults(self, capsys):
        """Test that edge lengths default to the edges of P(a)."""
        code, out, _ = run(capsys, "witness", "0,1,4", "--family", "polygon")
        assert code == 0
        assert "satisfies: True" in out

    def test_rejected_family(self, capsys):
        """Test that equal odd entries are reported."""
        code, _, err = run(capsys, "witness", "0,1,0,1,0", "--family", "thm2")
        assert code == 1
        assert "OddEntriesEqual" in err


def test_version(capsys):
    """Test the --version flag."""
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out
