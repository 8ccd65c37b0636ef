import subprocess
import sys

import pytest

from noisetol import cli
from noisetol.data import iris_path

FAST = ["--max-iters", "1500", "--restarts", "2"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestVerify:
    def test_examples(self, capsys):
        code, out, _ = run(capsys, "verify", "--scope", "examples")
        assert code == 0
        for i in range(1, 6):
            assert f"Example {i}: PASS" in out
        assert out.rstrip().endswith("OVERALL: PASS")

    def test_theorems(self, capsys):
        code, out, _ = run(capsys, "verify", "--scope", "theorems", "--instances", "20")
        assert code == 0 and "OVERALL: PASS" in out

    def test_bogus_scope(self, capsys):
        code, out, err = run(capsys, "verify", "--scope", "bogus")
        assert code == 2 and out == "" and "scope" in err

    def test_deterministic(self, capsys):
        argv = ["verify", "--scope", "all", "--seed", "7", "--instances", "20"]
        first = run(capsys, *argv)
        assert first == run(capsys, *argv)
        assert first[0] == 0

    def test_out_file(self, capsys, tmp_path):
        p = tmp_path / "v.txt"
        code, out, _ = run(capsys, "verify", "--scope", "examples", "--out", str(p))
        assert code == 0 and out == ""
        assert "OVERALL: PASS" in p.read_text()


class TestIris:
    def test_default_table_shape(self, capsys):
        code, out, _ = run(capsys, "iris", "--trials", "1", "--seed", "42", *FAST)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "dataset: Iris, Iris-virginica = +1 vs rest"
        header = lines[2]
        for label in ("0-1 (annealing)", "hinge risk (LP)", "least squares", "log loss", "FLD"):
            assert label in header
        assert len(lines[4:]) == 6

    def test_csv_out(self, capsys, tmp_path):
        p = tmp_path / "r.csv"
        code, out, _ = run(capsys, "iris", "--trials", "1", "--format", "csv", "--out", str(p), "--algorithms", "fld,hinge")
        assert code == 0 and out == ""
        lines = p.read_text().splitlines()
        assert lines[0] == "noise,algorithm,mean,std,trials"
        assert len(lines) == 1 + 6 * 2

    def test_unwritable_out(self, capsys, tmp_path):
        code, _, err = run(capsys, "iris", "--trials", "1", "--algorithms", "fld", "--out", str(tmp_path / "no" / "r.csv"))
        assert code == 1 and "cannot write" in err

    def test_byte_identical(self, capsys, tmp_path):
        argv = ["iris", "--trials", "2", "--seed", "5", "--noise", "uniform:0.2", "--noise", "none", *FAST]
        a, b = run(capsys, *argv), run(capsys, *argv)
        assert a == b
        fa, fb = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, *argv, "--format", "csv", "--out", str(fa))
        run(capsys, *argv, "--format", "csv", "--out", str(fb))
        assert fa.read_bytes() == fb.read_bytes()

    def test_noise_order_kept(self, capsys):
        code, out, _ = run(capsys, "iris", "--trials", "1", "--format", "csv", "--algorithms", "fld",
                           "--noise", "uniform:0.2", "--noise", "none")
        assert [line.split(",")[0] for line in out.splitlines()[1:]] == ['"uniform:0.2"', '"none"']

    @pytest.mark.parametrize(
        "argv",
        [
            ["iris", "--trials", "0"],
            ["iris", "--trials", "many"],
            ["iris", "--seed", "-1"],
            ["iris", "--seed", str(2**64)],
            ["iris", "--noise", "uniform:0.7"],
            ["iris", "--noise", "gauss:1"],
            ["iris", "--format", "json"],
            ["iris", "--algorithms", "svm"],
            ["iris", "--bogus-flag"],
            ["launch"],
            [],
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2 and out == "" and err


class TestAnalyze:
    def test_matches_iris(self, capsys):
        common = ["--trials", "2", "--seed", "3", "--format", "csv", *FAST]
        _, iris_out, _ = run(capsys, "iris", *common)
        code, out, _ = run(
            capsys, "analyze", "--data", str(iris_path()), "--label-column", "species", "--positive", "Iris-virginica",
            "--negative", "Iris-setosa", "--negative", "Iris-versicolor", *common,
        )
        assert code == 0 and out == iris_out

    def test_non_binary(self, capsys):
        code, _, err = run(capsys, "analyze", "--data", str(iris_path()), "--label-column", "species",
                           "--positive", "Iris-setosa", "--trials", "1")
        assert code == 1 and "Iris-virginica" in err

    def test_bad_cell(self, capsys, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("a,b,y\n1,2,p\n3,x,n\n")
        code, _, err = run(capsys, "analyze", "--data", str(p), "--label-column", "y", "--positive", "p", "--trials", "1")
        assert code == 1 and "row 3" in err and "'b'" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", "--data", str(tmp_path / "none.csv"), "--label-column", "y", "--positive", "p")
        assert code == 1

    def test_cccn_row(self, capsys, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("a,b,y\n" + "".join(f"{i},{(i * 7) % 5},{'p' if i % 2 else 'n'}\n" for i in range(20)))
        code, out, _ = run(capsys, "analyze", "--data", str(p), "--label-column", "y", "--positive", "p",
                           "--noise", "cccn:0.1,0.3", "--trials", "2", "--algorithms", "hinge,least-squares")
        assert code == 0
        assert out.splitlines()[4].startswith("cccn:0.1,0.3")

    def test_requires_data(self, capsys):
        code, _, err = run(capsys, "analyze", "--label-column", "y", "--positive", "p")
        assert code == 2 and "--data" in err


class TestConfigFile:
    def test_precedence(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# sweep\ntrials = 1\nseed = 5\nformat = csv\nnoise = uniform:0.2\nnoise = none\nalgorithms = fld\n")
        code, out, _ = run(capsys, "iris", "--config", str(cfg))
        assert code == 0
        assert out.splitlines()[1:] == ['"uniform:0.2",fld,0.800000,0.000000,1', '"none",fld,0.806667,0.000000,1']
        # flags win over the file, list flags replace the file's list
        code, out, _ = run(capsys, "iris", "--config", str(cfg), "--noise", "uniform:0.1", "--format", "table")
        assert code == 0 and out.startswith("dataset:") and "uniform:0.1" in out and "uniform:0.2" not in out

    @pytest.mark.parametrize("text", ["colour = red\n", "trials 3\n", "trials = 1\ntrials = 2\n", "trials = x\n"])
    def test_bad_file(self, capsys, tmp_path, text):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(text)
        code, _, err = run(capsys, "iris", "--config", str(cfg), "--algorithms", "fld")
        assert code == 2 and err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "iris", "--config", str(tmp_path / "nope.cfg"))
        assert code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "noisetol", "verify", "--scope", "bogus"], capture_output=True, text=True)
    assert out.returncode == 2
    out = subprocess.run([sys.executable, "-m", "noisetol", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "analyze" in out.stdout
