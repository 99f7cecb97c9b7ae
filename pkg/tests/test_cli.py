"""Command-line behavior: modes, determinism, and the error-code taxonomy."""

import json

from jetsym.cli import main
from jetsym.report import RunConfig, emit_report, run_pipeline


def run_json(tmp_path, args, name="out.json"):
    path = tmp_path / name
    code = main(args + ["--json", str(path)])
    payload = json.loads(path.read_text(encoding="utf-8")) if path.exists() else None
    return code, payload


class TestModes:
    def test_solve_mode(self, tmp_path):
        code, data = run_json(
            tmp_path, ["--eq", "u_t = u_2", "--mode", "solve", "--lambda", "none"]
        )
        assert code == 0
        assert data["basis"]["elements"] == ["1", "y", "u", "u_1", "u_2", "u_3"]
        assert data["basis"]["dims"] == [3, 4, 5, 6]
        assert data["criterion"] is None

    def test_structure_mode(self, tmp_path):
        code, data = run_json(
            tmp_path,
            ["--eq", "u_t = u_2", "--mode", "structure", "--lambda", "none",
             "--order", "1", "--ydeg", "1", "--jetdeg", "1"],
        )
        assert code == 0
        blocks = data["blocks"]
        assert blocks["count"] == 3
        assert [b["size"] for b in blocks["items"]] == [2, 1, 1]
        assert data["shift_matrix"][0][1] == "1"

    def test_criterion_mode_heat(self, tmp_path):
        code, data = run_json(tmp_path, ["--eq", "u_t = u_2", "--mode", "criterion"])
        assert code == 0
        assert data["criterion"]["exists"] is True
        assert data["criterion"]["witness"] == "y"

    def test_criterion_mode_decay(self, tmp_path):
        code, data = run_json(
            tmp_path, ["--eq", "u_t = u_2 - u", "--mode", "criterion"]
        )
        assert code == 0
        assert data["criterion"]["witness"] == "exp(y)"
        assert data["criterion"]["witness_weights"] == {"y": "1"}
        assert data["lambda_scan"]["candidates"] == ["-1", "0", "1"]

    def test_check_mode(self, capsys):
        code = main(["--eq", "u_t = u_2", "--check", "u_1", "--check", "y*u_1"])
        assert code == 0
        out = capsys.readouterr().out
        assert "check u_1: symmetry: true" in out
        assert "check y*u_1: symmetry: false" in out

    def test_explicit_lambda_list(self, tmp_path):
        code, data = run_json(
            tmp_path,
            ["--eq", "u_t = u_2 - u", "--lambda", "0,1,-1", "--mode", "solve"],
        )
        assert code == 0
        assert data["resolved_weights"] == ["-1", "0", "1"]
        assert "exp(y)" in data["basis"]["elements"]

    def test_human_output(self, capsys):
        code = main(["--eq", "u_t = u_2", "--mode", "solve", "--lambda", "none"])
        assert code == 0
        out = capsys.readouterr().out
        assert "basis (6 elements):" in out
        assert "bound order-1 cap (q=1): 4 <= 5  pass" in out


class TestDeterminism:
    def test_byte_identical_json(self, tmp_path):
        for eq, mode in [
            ("u_t = u_2", "criterion"),
            ("u_t = u_2 - u", "criterion"),
            ("u_t = u_3 + u*u_1", "criterion"),
        ]:
            args = ["--eq", eq, "--mode", mode, "--ydeg", "1"]
            p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
            assert main(args + ["--json", str(p1)]) == main(args + ["--json", str(p2)])
            assert p1.read_bytes() == p2.read_bytes()

    def test_emit_report_stable(self):
        cfg = RunConfig(equation="u_t = u_2", mode="solve", lambda_mode="none")
        a = emit_report(run_pipeline(cfg), "json")
        b = emit_report(run_pipeline(cfg), "json")
        assert a == b

    def test_timing_field_optional(self):
        cfg = RunConfig(equation="u_t = u_2", mode="solve", lambda_mode="none")
        assert b"timing_ms" not in emit_report(run_pipeline(cfg), "json")
        cfg2 = RunConfig(
            equation="u_t = u_2", mode="solve", lambda_mode="none", include_timing=True
        )
        assert b"timing_ms" in emit_report(run_pipeline(cfg2), "json")

    def test_report_expressions_reparse_canonically(self, tmp_path):
        from jetsym.parser import parse_expression

        code, data = run_json(
            tmp_path, ["--eq", "u_t = u_2 - u", "--mode", "criterion"]
        )
        assert code == 0
        strings = list(data["basis"]["elements"])
        strings.append(data["equation"]["rhs"])
        strings.append(data["criterion"]["witness"])
        for block in data["blocks"]["items"]:
            strings.extend(block["elements"])
        for text in strings:
            e = parse_expression(text)
            assert e.render() == text


class TestErrorCodes:
    def test_syntax_error(self, tmp_path):
        code, data = run_json(tmp_path, ["--eq", "u_t = u_2 +"])
        assert code == 2
        assert data["error"]["kind"] == "syntax"
        assert data["error"]["position"] == 11

    def test_scope_error_y(self, tmp_path):
        code, data = run_json(tmp_path, ["--eq", "u_t = y*u_2"])
        assert code == 3
        assert data["error"]["kind"] == "scope"

    def test_scope_error_low_order(self, tmp_path):
        code, data = run_json(tmp_path, ["--eq", "u_t = u_1"])
        assert code == 3

    def test_closure_violation(self, tmp_path):
        code, data = run_json(
            tmp_path,
            ["--eq", "u_t = u_2 + u^2", "--target", "u", "--mode", "structure",
             "--lambda", "none"],
        )
        assert code == 4
        assert data["error"]["kind"] == "closure"

    def test_unresolved_spectrum(self, tmp_path):
        code, data = run_json(
            tmp_path, ["--eq", "u_t = u_2 + u", "--mode", "criterion"]
        )
        assert code == 5
        assert data["error"]["kind"] == "spectrum"
        assert data["error"]["factors"] == ["lambda^2 + 1"]

    def test_bad_lambda_list(self, tmp_path):
        code, data = run_json(tmp_path, ["--eq", "u_t = u_2", "--lambda", "0,x"])
        assert code == 2

    def test_errors_not_written_as_reports(self, tmp_path):
        path = tmp_path / "err.json"
        code = main(["--eq", "u_t = u_2 +", "--json", str(path)])
        assert code == 2
        data = json.loads(path.read_text(encoding="utf-8"))
        assert set(data) == {"schema", "error"}
        assert data["error"]["exit_code"] == 2
