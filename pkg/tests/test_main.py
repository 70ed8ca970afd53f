"""Tests for the command line entry point."""

import lxml.etree
import pytest

from main import main, parse_args
from src.orbifile import FORMAT, load_orbifold
from src.verify import SampleResult, SampleSummary


@pytest.fixture
def oct_file(tmp_path):
    path = tmp_path / "oct.orb"
    assert main(["oct", "--out", str(path)]) == 0
    return path


class TestParseArgs:
    """Tests for argument parsing."""

    def test_defaults(self):
        args = parse_args(["verify-lemmas"])
        assert args.command == "verify-lemmas"
        assert (args.count, args.seed, args.variants) == (100, 0, False)
        assert args.log_level == "WARNING"

    def test_file_command_reads_input(self, tmp_path):
        args = parse_args(["check", "--in", str(tmp_path / "x.orb"), "--tol", "1e-6"])
        assert args.input.name == "x.orb"
        assert args.tol == 1e-6


class TestUsageErrors:
    """Malformed invocations and inputs exit with status 2."""

    def test_missing_input(self):
        assert main(["check"]) == 2

    def test_unknown_flag(self):
        assert main(["oct", "--bogus"]) == 2

    def test_no_command(self):
        assert main([]) == 2

    def test_missing_file(self, tmp_path):
        assert main(["check", "--in", str(tmp_path / "absent.orb")]) == 2

    def test_malformed_document(self, tmp_path):
        path = tmp_path / "bad.orb"
        path.write_text(f"format={FORMAT}\nkind=params\na1=oops\n", encoding="utf-8")
        assert main(["lengths", "--in", str(path)]) == 2

    def test_bad_config(self):
        assert main(["oct", "--max-word", "0"]) == 2

    def test_malformed_label(self, oct_file, tmp_path):
        out = tmp_path / "x.svg"
        assert main(["render", "--in", str(oct_file), "--labels", "q13", "--out", str(out)]) == 2


class TestCommands:
    """End-to-end runs of the file commands."""

    def test_oct_document(self, oct_file, oct_pair):
        assert load_orbifold(oct_file).params == oct_pair[0]

    def test_check_oct(self, oct_file, capsys):
        assert main(["check", "--in", str(oct_file)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 29
        assert lines[-1].startswith("in_domain,true")

    def test_lengths(self, oct_file, capsys):
        assert main(["lengths", "--in", str(oct_file)]) == 0
        assert capsys.readouterr().out.startswith("arc\tlength\nγ1\t1.52857")

    def test_random_is_deterministic(self, capsys):
        assert main(["random", "--seed", "4"]) == 0
        first = capsys.readouterr().out
        assert main(["random", "--seed", "4"]) == 0
        assert capsys.readouterr().out == first
        assert first.startswith(f"format={FORMAT}\nkind=params\n")

    def test_reduce_writes_matrices(self, oct_file, tmp_path):
        out = tmp_path / "reduced.orb"
        assert main(["reduce", "--in", str(oct_file), "--out", str(out)]) == 0
        doc = load_orbifold(out)
        assert doc.kind == "matrices"
        assert main(["check", "--in", str(out), "--out", str(tmp_path / "r.csv")]) == 0

    def test_render(self, oct_file, tmp_path):
        out = tmp_path / "oct.svg"
        args = ["render", "--in", str(oct_file), "--labels", "b13, B34^6", "--out", str(out)]
        assert main(args) == 0
        root = lxml.etree.parse(str(out)).getroot()
        assert root.tag.endswith("svg")
        assert len(root.findall(".//{http://www.w3.org/2000/svg}path")) == 8

    @pytest.mark.slow
    def test_minimality(self, oct_file, capsys):
        assert main(["minimality", "--in", str(oct_file)]) == 0
        out = capsys.readouterr().out
        assert "minimal (worst margin" in out
        assert "crossing bounds" in out

    @pytest.mark.slow
    def test_verify_lemmas(self, tmp_path):
        out = tmp_path / "summary.csv"
        assert main(["verify-lemmas", "--count", "2", "--seed", "3", "--out", str(out)]) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 3
        assert lines[0].endswith(",status")


def test_verify_lemmas_fails_when_nothing_converged(monkeypatch, tmp_path):
    def unreduced(sample_cfg, config):
        results = tuple(SampleResult(i, None, "unreduced") for i in range(sample_cfg.count))
        return SampleSummary(sample_cfg, results)

    monkeypatch.setattr("main.run_samples", unreduced)
    out = tmp_path / "summary.csv"
    assert main(["verify-lemmas", "--count", "3", "--out", str(out)]) == 1
    assert out.read_text(encoding="utf-8").count("unreduced") == 3


@pytest.mark.slow
def test_census(tmp_path):
    out = tmp_path / "census.csv"
    assert main(["census", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "group,lhs,rhs_label,tight_on"
    assert len(lines) == 28
