import json

import pytest

from qhtoeplitz.cli import main
from qhtoeplitz.report import Report


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_out(out: str) -> dict:
    return Report.from_text(out).data


class TestApply:
    def test_weight_value(self, capsys):
        code, out, _ = run(capsys, "apply", "e(1)*r^3", "--k", "0")
        assert code == 0
        data = parse_out(out)
        assert data["results"]["coefficients"]["degree_1"] == "2/3"

    def test_truncated_to_zero(self, capsys):
        code, out, _ = run(capsys, "apply", "zbar", "--k", "0")
        assert code == 0
        assert parse_out(out)["results"]["is_zero"] == "true"

    def test_json_flag(self, capsys):
        code, out, _ = run(capsys, "apply", "e(1)*r^3", "--k", "0", "--json")
        assert code == 0
        assert json.loads(out)["results"]["coefficients"]["degree_1"] == "2/3"


class TestMellin:
    def test_flags_inadmissible(self, capsys):
        code, out, _ = run(capsys, "mellin", "1*e(0)*r^-2")
        assert code == 0
        data = parse_out(out)
        assert data["results"]["degree_0"]["admissible"] == "false"


class TestComposeAndPower:
    def test_compose_recovers_symbol(self, capsys):
        code, out, _ = run(capsys, "compose", "zbar", "e(1)*r^3")
        assert code == 0
        data = parse_out(out)
        assert data["results"]["toeplitz_symbol"] == "1*e(0)*r^4"

    def test_power_always_toeplitz(self, capsys):
        code, out, _ = run(capsys, "power", "e(1)*r^3", "--n", "4")
        assert code == 0
        data = parse_out(out)
        assert "none" not in data["results"]["toeplitz_symbol"]

    def test_commutator_zero(self, capsys):
        code, out, _ = run(capsys, "commutator",
                           "2*e(1)*r^3 + 2*zbar + 3", "e(1)*r^3 + zbar")
        assert code == 0
        assert parse_out(out)["results"]["is_zero"] == "true"


class TestSquareCheck:
    def test_fails_beyond_threshold(self, capsys):
        code, out, _ = run(
            capsys, "square-check",
            "e(1)*r^3 + zbar + zbar^2 + zbar^3 + zbar^4 + zbar^5")
        assert code == 2
        data = parse_out(out)
        assert data["results"]["is_toeplitz"] == "false"
        assert data["results"]["failing_degree"] == "-4"
        assert data["results"]["witness_exponent"] == "-2"

    def test_within_threshold(self, capsys):
        code, out, _ = run(capsys, "square-check",
                           "e(1)*r^3 + zbar + zbar^2 + zbar^3 + zbar^4")
        assert code == 0
        assert parse_out(out)["results"]["is_toeplitz"] == "true"


class TestVerify:
    def test_commuting_pair_exact_zero(self, capsys):
        code, out, _ = run(capsys, "verify",
                           "2*e(1)*r^3 + 2*zbar + 3", "e(1)*r^3 + zbar",
                           "--dim", "30")
        assert code == 0
        data = parse_out(out)
        assert data["results"]["exactly_zero"] == "true"
        assert data["results"]["quadrature_ok"] == "true"

    def test_perturbed_pair_reports_entry(self, capsys):
        code, out, _ = run(capsys, "verify",
                           "e(1)*r^3 + zbar + zbar^2", "e(1)*r^3 + zbar",
                           "--dim", "20")
        assert code == 2
        data = parse_out(out)
        assert data["results"]["exactly_zero"] == "false"
        assert int(data["results"]["nonzero_entries_on_safe_columns"]) > 0

    def test_deterministic_output(self, capsys):
        args = ("verify", "2*e(1)*r^3 + 2*zbar + 3", "e(1)*r^3 + zbar",
                "--dim", "12")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        strip = lambda s: "\n".join(
            l for l in s.splitlines() if "seconds" not in l)
        assert strip(out1) == strip(out2)


class TestSolveCommutant:
    def test_small_end_to_end(self, capsys):
        g = "e(1)*r^3 + " + " + ".join(f"zbar^{l}" for l in range(1, 8))
        code, out, _ = run(capsys, "solve-commutant", g,
                           "--max-degree", "2", "--depth", "5")
        assert code == 0
        data = parse_out(out)
        assert data["results"]["dimension"] == "2"
        basis = data["results"]["basis"]
        assert basis["C_1"]["as_polynomial_in_Tg"] == "1*Tg"
        assert basis["C_0"]["as_polynomial_in_Tg"] == "1*I"

    def test_rejects_wrong_shape(self, capsys):
        code, _, err = run(capsys, "solve-commutant", "e(2)*r^3 + zbar",
                           "--max-degree", "1", "--depth", "2")
        assert code == 1
        assert "analytic part" in err


class TestInputChannels:
    def test_file_input(self, capsys, tmp_path):
        p = tmp_path / "sym.txt"
        p.write_text("e(1)*r^3\n")
        code, out, _ = run(capsys, "apply", f"@{p}", "--k", "1")
        assert code == 0
        assert parse_out(out)["results"]["coefficients"]["degree_1"] == "3/4"

    def test_stdin_input(self, capsys, monkeypatch):
        import io
        monkeypatch.setattr("sys.stdin", io.StringIO("zbar^2"))
        code, out, _ = run(capsys, "apply", "-", "--k", "3")
        assert code == 0
        assert parse_out(out)["results"]["coefficients"]["degree_-2"] == "1/2"

    def test_syntax_error_exit_code(self, capsys):
        code, _, err = run(capsys, "apply", "e(", "--k", "0")
        assert code == 1
        assert "error" in err
