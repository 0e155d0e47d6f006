"""Command-line interface: output, exit codes, batch mode."""

import json

import pytest

from termlat.cli import main
from tests.conftest import SIG_EX2_TEXT


@pytest.fixture
def sig_file(tmp_path):
    path = tmp_path / "ex2.sig"
    path.write_text(SIG_EX2_TEXT)
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUnifyCommand:
    def test_worked_example_json(self, capsys, sig_file):
        code, out, _ = run(capsys, [
            "unify", "h(X,g(Y,b),f(Y,c))", "l(f(a,Z),g(d,c))",
            "--sig", sig_file, "--mode", "full", "--json",
        ])
        assert code == 0
        body = json.loads(out)
        assert body["status"] == "SOLVED"
        assert body["degree"] == pytest.approx(0.6, abs=1e-9)
        assert body["substitution"] == {"Y": "c", "Z": "c"}
        assert len(body["trace"]) == 8
        assert body["dropped_args"] == [{"position": 1, "term": "X"}]

    def test_default_mode_full_with_signature(self, capsys, sig_file):
        code, out, _ = run(capsys, [
            "unify", "a", "b", "--sig", sig_file, "--json",
        ])
        body = json.loads(out)
        assert code == 0
        assert body["degree"] == pytest.approx(0.7)

    def test_clash_exit_code(self, capsys):
        code, out, _ = run(capsys, ["unify", "a", "b"])
        assert code == 1
        assert "CLASH" in out

    def test_occurs_exit_code(self, capsys):
        code, out, _ = run(capsys, ["unify", "X", "f(X)"])
        assert code == 1
        assert "OCCURS_FAIL" in out

    def test_no_occurs_check_flag(self, capsys):
        code, out, _ = run(capsys, ["unify", "X", "f(X)", "--no-occurs-check"])
        assert code == 0
        assert "SOLVED" in out

    def test_parse_error_exit_code(self, capsys):
        code, _, err = run(capsys, ["unify", "f(", "a"])
        assert code == 2
        assert "offset 2" in err

    def test_trace_output(self, capsys, sig_file):
        code, out, _ = run(capsys, [
            "unify", "h(X,g(Y,b),f(Y,c))", "l(f(a,Z),g(d,c))",
            "--sig", sig_file, "--trace",
        ])
        assert code == 0
        assert "Fuzzy Equation Reorientation" in out
        assert "Generic Weak Term Decomposition" in out
        assert "Variable Elimination" in out

    def test_verify_passes(self, capsys, sig_file):
        code, _, _ = run(capsys, [
            "unify", "h(X,g(Y,b),f(Y,c))", "l(f(a,Z),g(d,c))",
            "--sig", sig_file, "--verify",
        ])
        assert code == 0

    def test_verify_mismatch_exits_3(self, capsys, sig_file, monkeypatch):
        import termlat.cli as cli

        monkeypatch.setattr(cli, "oracle_similarity", lambda *a, **k: 0.123)
        code, _, err = run(capsys, [
            "unify", "h(X,g(Y,b),f(Y,c))", "l(f(a,Z),g(d,c))",
            "--sig", sig_file, "--verify",
        ])
        assert code == 3
        assert "verify failed" in err

    def test_env_var_signature(self, capsys, sig_file, monkeypatch):
        monkeypatch.setenv("TERMLAT_SIG", sig_file)
        code, out, _ = run(capsys, ["unify", "a", "b", "--json"])
        assert code == 0
        assert json.loads(out)["degree"] == pytest.approx(0.7)

    def test_strict_arity_rejects(self, capsys):
        code, _, err = run(capsys, [
            "unify", "f(f(a,b))", "f(X)", "--strict-arity",
        ])
        assert code == 2
        assert "arities" in err

    def test_human_and_json_degrees_agree(self, capsys, sig_file):
        argv = ["unify", "h(X,g(Y,b),f(Y,c))", "l(f(a,Z),g(d,c))", "--sig", sig_file]
        _, human, _ = run(capsys, argv)
        _, machine, _ = run(capsys, argv + ["--json"])
        human_degree = [
            line.split(": ")[1] for line in human.splitlines()
            if line.startswith("degree:")
        ][0]
        assert float(human_degree) == pytest.approx(
            json.loads(machine)["degree"], abs=1e-6
        )


class TestGeneralizeCommand:
    def test_crisp_example(self, capsys):
        code, out, _ = run(capsys, ["generalize", "f(a,b)", "f(a,c)", "--json"])
        assert code == 0
        body = json.loads(out)
        assert body["status"] == "GENERALIZED"
        assert body["degree"] == 1.0
        assert body["generalizer"] == "f(a,_G0)"
        assert body["sigma1"] == {"_G0": "b"}
        assert body["sigma2"] == {"_G0": "c"}

    def test_human_output(self, capsys):
        code, out, _ = run(capsys, ["generalize", "f(a,b)", "f(a,c)"])
        assert code == 0
        assert "generalizer: f(a,_G0)" in out
        assert "sigma1:" in out and "sigma2:" in out

    def test_verify(self, capsys, sig_file):
        code, _, _ = run(capsys, [
            "generalize", "l(f(a,Z),g(d,c))", "h(X,g(Y,b),f(Y,c))",
            "--sig", sig_file, "--verify",
        ])
        assert code == 0


class TestSimilarityCommand:
    def test_mapped_degree(self, capsys, sig_file):
        code, out, _ = run(capsys, [
            "similarity", "h(X,g(c,b),f(c,c))", "l(f(a,c),g(d,c))",
            "--sig", sig_file, "--json",
        ])
        assert code == 0
        assert json.loads(out)["degree"] == pytest.approx(0.6)

    def test_zero_degree_exit(self, capsys):
        code, out, _ = run(capsys, ["similarity", "a", "b", "--json"])
        assert code == 1
        assert json.loads(out)["degree"] == 0.0

    def test_crisp_mode_ignores_signature(self, capsys, sig_file):
        code, out, _ = run(capsys, [
            "similarity", "a", "b", "--sig", sig_file, "--mode", "crisp", "--json",
        ])
        assert code == 1
        assert json.loads(out)["degree"] == 0.0

    def test_product_tnorm_flag(self, capsys, sig_file):
        code, out, _ = run(capsys, [
            "similarity", "f(a,c)", "g(c,b)", "--sig", sig_file,
            "--tnorm", "product", "--json",
        ])
        assert code == 0
        # 0.9 * 0.7 under product instead of min
        assert json.loads(out)["degree"] == pytest.approx(0.63)


class TestSubsumesCommand:
    def test_positive(self, capsys):
        code, out, _ = run(capsys, ["subsumes", "f(X,Y)", "f(a,b)", "--json"])
        assert code == 0
        assert json.loads(out)["substitution"] == {"X": "a", "Y": "b"}

    def test_negative(self, capsys):
        code, _, _ = run(capsys, ["subsumes", "f(a)", "f(b)"])
        assert code == 1


class TestCheckSig:
    def test_valid(self, capsys, sig_file):
        code, out, _ = run(capsys, ["check-sig", sig_file])
        assert code == 0
        assert "4 entries" in out

    def test_invalid_names_entry(self, capsys, tmp_path):
        bad = tmp_path / "bad.sig"
        bad.write_text("sim f/2 g/3 : 0.5 [1->2, 2->2]\n")
        code, _, err = run(capsys, ["check-sig", str(bad)])
        assert code == 2
        assert "injective" in err
        assert "f/2" in err

    def test_transitivity_warning(self, capsys, tmp_path):
        sig = tmp_path / "gap.sig"
        sig.write_text("sim a/0 b/0 : 0.9\nsim b/0 c/0 : 0.8\n")
        code, _, err = run(capsys, ["check-sig", str(sig), "--check-transitive"])
        assert code == 0
        assert "warning" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, ["check-sig", str(tmp_path / "nope.sig")])
        assert code == 2


class TestBatch:
    def test_worked_examples(self, capsys, sig_file, tmp_path):
        batch = tmp_path / "problems.tsv"
        batch.write_text(
            "unify\th(X,g(Y,b),f(Y,c))\tl(f(a,Z),g(d,c))\n"
            "generalize\th(f(a,X1),g(X1,b),f(Y1,Y1))\th(X2,X2,g(c,d))\n"
        )
        code, out, _ = run(capsys, [
            "unify", "--batch", str(batch), "--sig", sig_file,
        ])
        assert code == 0
        lines = out.strip().splitlines()
        assert "degree=0.6" in lines[0]
        assert "degree=0.9" in lines[1]
        assert lines[-1] == "ok=2 fail=0 err=0"

    def test_empty_file(self, capsys, tmp_path):
        batch = tmp_path / "empty.tsv"
        batch.write_text("")
        code, out, _ = run(capsys, ["unify", "--batch", str(batch)])
        assert code == 0
        assert out.strip() == "ok=0 fail=0 err=0"

    def test_malformed_line_isolated(self, capsys, tmp_path):
        batch = tmp_path / "mixed.tsv"
        batch.write_text(
            "unify\ta\ta\n"
            "not a line\n"
            "unify\ta\tb\n"
            "unify\tf(\ta\n"
        )
        code, out, _ = run(capsys, ["unify", "--batch", str(batch)])
        assert code == 1
        assert out.strip().splitlines()[-1] == "ok=1 fail=1 err=2"

    def test_output_order_matches_input(self, capsys, tmp_path):
        batch = tmp_path / "order.tsv"
        batch.write_text("unify\ta\ta\nunify\tb\tb\nunify\tc\tc\n")
        code, out, _ = run(capsys, ["unify", "--batch", str(batch)])
        nums = [int(line.split(":")[0]) for line in out.strip().splitlines()[:-1]]
        assert nums == sorted(nums)
