"""CLI dispatch, exit codes, report determinism, expression round trips."""

import json


from qchar2.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestVerbs:
    def test_witt_isotropy_anisotropic(self, capsys):
        code, out = run(capsys, "witt", "isotropy", "--field", "F2((t))", "<<t,1]]")
        assert code == 0
        assert "anisotropic" in out

    def test_isotropy_undecidable_exit(self, capsys):
        # wild mixture: two pairs with an irreducible pole in the a-slot
        code, out = run(capsys, "isotropy", "--field", "F2((t))",
                        "[1,1/t]+(1+t)*[1,1/t]", "--budget", "64")
        assert code == 1
        assert "undecided" in out

    def test_symlen_bound(self, capsys):
        code, out = run(capsys, "symlen", "bound", "--u", "8,8", "--n", "3")
        assert code == 0
        assert "3" in out

    def test_symlen_split(self, capsys):
        code, out = run(capsys, "symlen", "split", "--field", "F2((t))",
                        "t*[1,1]+[1,1]", "--n", "2", "--format", "json", "--no-meta")
        assert code == 0
        data = json.loads(out)
        assert data["slots"] == ["t"]

    def test_invariants(self, capsys):
        code, out = run(capsys, "invariants", "--field", "F2((t))", "t*[1,1]",
                        "--n", "2", "--format", "json", "--no-meta")
        assert code == 0
        data = json.loads(out)
        assert data["arf"]["trivial"] is False
        assert data["membership"]["member"] is False

    def test_symbol_trivial(self, capsys):
        code, out = run(capsys, "symbol", "trivial", "--field", "F2((t))",
                        "1 d(t)/t", "--format", "json", "--no-meta")
        assert code == 0
        assert json.loads(out)["trivial"] is False

    def test_symbol_rewrite_roundtrip(self, capsys):
        code, out = run(capsys, "symbol", "rewrite",
                        "--field", "F2((t1))((t2))",
                        "(1+t1) d(t1*t2)/(t1*t2)",
                        "--format", "json", "--no-meta")
        assert code == 0
        data = json.loads(out)
        assert data["symbols"] <= 2

    def test_linkage_max(self, capsys):
        code, out = run(capsys, "linkage", "max", "--field", "F2((t1))((t2))",
                        "--p", "<<t1,1]]", "--q", "<<t2,1]]",
                        "--format", "json", "--no-meta", "--budget", "0")
        assert code == 0
        data = json.loads(out)
        assert data["max_separable_linkage"] >= 1

    def test_u_invariant(self, capsys):
        code, out = run(capsys, "u-invariant", "--field", "F2((t))", "--n", "2",
                        "--samples", "10", "--format", "json", "--no-meta")
        assert code == 0
        assert json.loads(out)["value"] == 4

    def test_pfister_expand(self, capsys):
        code, out = run(capsys, "pfister", "expand", "--field", "F2((t))",
                        "<<t,1]]", "--format", "json", "--no-meta")
        assert code == 0
        assert json.loads(out)["expansion"] == "[1,1]+t*[1,1]"

    def test_verify_small(self, capsys):
        code, out = run(capsys, "verify", "pfister-dichotomy",
                        "--field", "F2((t))", "--samples", "10", "--seed", "7",
                        "--format", "json", "--no-meta")
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_verify_theorem_suite(self, capsys):
        code, out = run(capsys, "verify", "theoremu", "--field", "F2((t))",
                        "--samples", "100", "--seed", "7",
                        "--format", "json", "--no-meta")
        assert code == 0
        data = json.loads(out)
        assert data["passed"] is True
        assert data["suites"][0]["stats"]["anisotropic_samples"] == 100

    def test_symlen_decompose(self, capsys):
        code, out = run(capsys, "symlen", "decompose",
                        "--field", "F2((t1))((t2))",
                        "<<t1,1]]+t2*(<<1+t1,t1]])", "--n", "2",
                        "--format", "json", "--no-meta")
        assert code == 0
        assert json.loads(out)["symbols"] <= 3


class TestExitCodes:
    def test_parse_error(self, capsys):
        code = main(["isotropy", "--field", "F2((t))", "<<t,1]"])
        assert code == 2

    def test_unknown_field_symbol(self, capsys):
        code = main(["isotropy", "--field", "F2((t))", "[1,x]"])
        assert code == 2

    def test_usage_error(self, capsys):
        code = main(["witt"])
        assert code == 2


class TestDeterminism:
    def test_byte_identical_reports(self, capsys):
        argv = ["verify", "invariance", "--field", "F2((t))", "--samples", "5",
                "--seed", "11", "--format", "json", "--no-meta"]
        code1, out1 = run(capsys, *argv)
        code2, out2 = run(capsys, *argv)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_report_reparses(self, capsys):
        code, out = run(capsys, "witt", "decompose", "--field", "F2((t))",
                        "<<t,1]]+[1,0]", "--format", "json", "--no-meta")
        assert code == 0
        data = json.loads(out)
        from qchar2.parsing import parse_field, parse_form

        tw = parse_field(data["field"])
        kernel = parse_form(tw, data["kernel"])
        assert kernel.dim == 4
        assert data["witt_index"] == 1
