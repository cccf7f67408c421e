import io
import json
import os

import pytest

from qdc.cli import (parse, print_ast, tokenize, evaluate_ast, render_value,
                     run, ExprError, read_session)
from qdc.calculus import DEFAULT_RMATRIX


def out_of(argv):
    buf = io.StringIO()
    code = run(argv, out=buf)
    return code, buf.getvalue()


class TestParser:
    def test_application_over_product(self):
        ast = parse("d(t[1,1]*t[1,2])")
        assert ast[0] == "d"
        assert ast[1][0] == "*"

    def test_scalar_scaled_wedge(self):
        ast = parse("(q - q^-1) * w[1,1] /\\ w[2,2]")
        assert ast[0] == "wedge"
        assert ast[1][0] == "*"

    def test_precedence_chain(self):
        # ^ > * > wedge > +
        ast = parse("q^2*w[1,1] /\\ w[2,2] + w[1,2] /\\ w[2,1]")
        assert ast[0] == "+"
        assert ast[1][0] == "wedge"
        assert ast[1][1][0] == "*"
        assert ast[1][1][1][0] == "pow"

    def test_left_associativity(self):
        ast = parse("t[1,1] - t[1,2] - t[2,1]")
        assert ast[0] == "-"
        assert ast[1][0] == "-"

    def test_unknown_symbol_with_position(self):
        with pytest.raises(ExprError) as err:
            tokenize("t[1,1] + foo")
        assert err.value.pos == 9

    def test_out_of_range_generator(self, calc):
        with pytest.raises(ExprError) as err:
            evaluate_ast(parse("t[1,3]"), calc)
        assert "t[1,3]" in str(err.value)

    def test_syntax_error_position(self):
        with pytest.raises(ExprError) as err:
            parse("d(t[1,1]")
        assert err.value.pos is not None

    def test_trailing_input(self):
        with pytest.raises(ExprError):
            parse("t[1,1] t[1,2]")

    @pytest.mark.parametrize("text", [
        "d(t[1,1]*t[1,2])",
        "(q - q^-1)*w[1,1] /\\ w[2,2]",
        "t[1,1]^3 + 2*t[1,2] - q^-1",
        "del(t[2,1]) + dlt(t[2,1])",
        "X /\\ w[1,2]",
    ])
    def test_print_parse_round_trip(self, text):
        ast = parse(text)
        assert parse(print_ast(ast)) == ast


class TestEvaluation:
    def test_engine_output_reparses_to_same_value(self, calc):
        for text in ("d(t[1,1])", "w[1,1] /\\ w[1,2] + X /\\ w[2,1]",
                     "t[2,2]*t[1,1]", "dlt(t[1,1]*t[1,2])"):
            value = evaluate_ast(parse(text), calc)
            rendered = render_value(value)
            again = evaluate_ast(parse(rendered), calc)
            assert again == value, text

    def test_d_expansion_matches_convolutions(self, calc):
        from qdc.functionals import convolve
        value = evaluate_ast(parse("d(t[1,1])"), calc)
        a = calc.qg.generator(1, 1)
        expected = calc.space.zero()
        for i in range(4):
            c = convolve(calc.dual.chi.entry(i), a, side="left")
            if not c.is_zero():
                expected = expected + calc.space.one_form(i).algebra_mul_left(c)
        assert value == expected

    def test_dd_is_zero(self, calc):
        assert evaluate_ast(parse("d(d(t[1,2]))"), calc).is_zero()

    def test_division_restricted_to_scalars(self, calc):
        from qdc.cli import CliError
        with pytest.raises(CliError):
            evaluate_ast(parse("t[1,1]/w[1,1]"), calc)
        half = evaluate_ast(parse("t[1,1]/2"), calc)
        assert render_value(half) == "(1/2)*t[1,1]"


class TestCommands:
    def test_eval_command(self):
        code, text = out_of(["eval", "d(d(t[1,2]))"])
        assert code == 0 and text.strip() == "0"

    def test_eval_structured(self):
        code, text = out_of(["--format", "structured", "eval", "q^2"])
        assert code == 0
        assert json.loads(text)["value"] == "q^2"

    def test_check_cartan_exit_zero(self):
        code, _ = out_of(["--degree", "2", "check", "--suite", "cartan"])
        assert code == 0

    def test_check_roundtrip(self):
        code, text = out_of(["--degree", "2", "check", "--suite", "roundtrip"])
        assert code == 0
        assert "PASS" in text

    def test_deterministic_dumps(self):
        a = out_of(["relations"])
        b = out_of(["relations"])
        assert a == b
        g1 = out_of(["--format", "structured", "bicomplex"])
        g2 = out_of(["--format", "structured", "bicomplex"])
        assert g1 == g2

    def test_bicomplex_structured(self):
        code, text = out_of(["--format", "structured", "bicomplex"])
        assert code == 0
        data = json.loads(text)
        dims = {(c["r"], c["s"]): c["dim"] for c in data["cells"]}
        assert dims[(0, 1)] == 3 and dims[(1, 0)] == 1
        assert data["first_empty_grade"] == 5

    def test_init_and_descriptor_flow(self, tmp_path):
        sess = str(tmp_path / "s.qdc")
        code, _ = out_of(["init", "--out", sess])
        assert code == 0
        cfg = read_session(sess)
        assert cfg["f00"] == "trace" and cfg["degree"] == 3
        code, text = out_of(["--descriptor", sess, "eval", "del(t[2,1])"])
        assert code == 0 and text.strip() != ""

    def test_missing_descriptor_errors(self, tmp_path):
        code, _ = out_of(["--descriptor", str(tmp_path / "nope.qdc"),
                          "eval", "q"])
        assert code == 2

    def test_rmatrix_flag(self, tmp_path):
        p = tmp_path / "r.rmatrix"
        p.write_text(DEFAULT_RMATRIX)
        code, text = out_of(["--rmatrix", str(p), "eval", "t[1,2]*t[1,1]"])
        assert code == 0
        assert text.strip() == "(q^-1)*t[1,1]*t[1,2]"

    def test_env_default(self, tmp_path, monkeypatch):
        p = tmp_path / "r.rmatrix"
        p.write_text(DEFAULT_RMATRIX)
        monkeypatch.setenv("QDC_DEFAULT_RMATRIX", str(p))
        code, text = out_of(["eval", "q"])
        assert code == 0 and text.strip() == "q"

    def test_bad_rmatrix_rejected(self, tmp_path):
        p = tmp_path / "bad.rmatrix"
        p.write_text(DEFAULT_RMATRIX.replace("entry 1 2 2 1 q - q^-1",
                                             "entry 1 2 2 1 q"))
        code, _ = out_of(["--rmatrix", str(p), "eval", "q"])
        assert code == 2

    def test_maps_summary(self):
        code, text = out_of(["--degree", "2", "maps"])
        assert code == 0
        assert "rank 3" in text and "rank 4" in text
