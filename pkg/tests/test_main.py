"""Tests for the slo command line."""

from __future__ import annotations

import json
import math
from pathlib import Path
from unittest.mock import patch

import pytest

from schwartz_linear.config import BasisConfig
from schwartz_linear.errors import NotSchwartzAtResolution
from schwartz_linear.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main, run
from schwartz_linear.verify import CheckResult, VerificationReport

SQRT_HALF = math.sqrt(0.5)


def _stdout_json(capsys: pytest.CaptureFixture[str]) -> dict[str, object]:
    data: dict[str, object] = json.loads(capsys.readouterr().out)
    return data


def _failing_report() -> VerificationReport:
    result = CheckResult(
        name="s_linearity",
        paper_anchor="S-linearity",
        max_abs_error=1.0,
        tolerance=1e-12,
        passed=False,
        trials=1,
        seed=0,
    )
    return VerificationReport.from_results(BasisConfig(order=8), [result])


class TestArguments:
    """Tests for argument handling."""

    def test_no_command(self, clean_env: Path) -> None:
        """Test that a missing command is a usage error."""
        assert run([]) == EXIT_USAGE

    def test_version(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the --version output."""
        assert run(["--version"]) == EXIT_OK
        assert "slo 0.1.0" in capsys.readouterr().out

    def test_invalid_order(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that order 0 is a usage error."""
        assert run(["verify", "--order", "0"]) == EXIT_USAGE
        assert "slo: error" in capsys.readouterr().err

    def test_quadrature_too_coarse(self, clean_env: Path) -> None:
        """Test that Q below 2N+2 is a usage error."""
        assert run(["expand", "dirac@0", "--order", "40", "--quad", "60"]) == EXIT_USAGE

    def test_main_exits(self, clean_env: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that main() exits with the code of run()."""
        monkeypatch.setattr("sys.argv", ["slo", "--version"])
        with pytest.raises(SystemExit) as excinfo:
            main()
        assert excinfo.value.code == EXIT_OK


class TestVerifyCommand:
    """Tests for slo verify."""

    def test_json_report(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the JSON report of a passing run."""
        assert run(["verify", "--order", "8"]) == EXIT_OK
        data = _stdout_json(capsys)
        assert data["overall"] is True
        assert isinstance(data["results"], list)
        assert len(data["results"]) == 16

    def test_csv_report(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test one CSV row per check."""
        assert run(["verify", "--order", "8", "--format", "csv"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "name,anchor,error,tol,passed"
        assert len(lines) == 17
        assert all(line.endswith(",true") for line in lines[1:])

    def test_deterministic(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that --workers does not change the output."""
        run(["verify", "--order", "8", "--seed", "5"])
        first = capsys.readouterr().out
        run(["verify", "--order", "8", "--seed", "5", "--workers", "4"])
        assert capsys.readouterr().out == first

    def test_default_run_byte_identical(
        self, clean_env: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Test that two default runs of verify --seed 0 print the same bytes."""
        assert run(["verify", "--seed", "0"]) == EXIT_OK
        first = capsys.readouterr().out
        assert run(["verify", "--seed", "0"]) == EXIT_OK
        assert capsys.readouterr().out == first
        data = json.loads(first)
        assert data["config"]["order"] == 32
        assert data["config"]["quad_order"] == 80
        assert data["overall"] is True

    def test_quadrature_above_range(
        self, clean_env: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Test that an unsupported rule size is a usage error."""
        assert run(["verify", "--order", "300"]) == EXIT_USAGE
        assert "slo: error" in capsys.readouterr().err

    def test_failure_exit_code(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that a failed check exits with 1."""
        with patch("schwartz_linear.main.run_suite", return_value=_failing_report()):
            assert run(["verify"]) == EXIT_FAILED
        assert _stdout_json(capsys)["overall"] is False


class TestExpandCommand:
    """Tests for slo expand."""

    def test_dirac(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the expansion of delta_0, which is h_alpha(0)."""
        assert run(["expand", "dirac@0", "--order", "16"]) == EXIT_OK
        data = _stdout_json(capsys)
        assert data["id"] == "dirac@0"
        coefficients = data["coefficients"]
        assert isinstance(coefficients, list)
        assert len(coefficients) == 17
        assert coefficients[0]["index"] == [0]
        assert coefficients[0]["re"] == pytest.approx(math.pi**-0.25, rel=1e-15)
        assert coefficients[1]["re"] == 0.0

    def test_csv(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the CSV listing in graded order in 2-D."""
        argv = ["expand", "hermite@1,0", "--dim", "2", "--order", "4", "--format", "csv"]
        assert run(argv) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "index,re,im"
        assert lines[2].startswith("0:1,")
        assert lines[3].startswith("1:0,")
        assert len(lines) == 26

    def test_unknown_id(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that an unknown id is a usage error naming the id."""
        assert run(["expand", "nosuch"]) == EXIT_USAGE
        assert "Unknown distribution id 'nosuch'" in capsys.readouterr().err

    def test_degree_out_of_range(self, clean_env: Path) -> None:
        """Test that a Hermite degree above N is a usage error."""
        assert run(["expand", "hermite@9", "--order", "8"]) == EXIT_USAGE


class TestDerivCommand:
    """Tests for slo deriv."""

    def test_first_derivative_of_h0(
        self, clean_env: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Test (h_0)' = -sqrt(1/2) h_1 through both paths."""
        assert run(["deriv", "hermite@0", "1", "--order", "16"]) == EXIT_OK
        data = _stdout_json(capsys)
        assert data["derivative_order"] == 1
        coefficients = data["coefficients"]
        assert isinstance(coefficients, list)
        assert coefficients[1]["re"] == pytest.approx(-SQRT_HALF, abs=1e-10)
        assert coefficients[1]["operator_re"] == pytest.approx(-SQRT_HALF, abs=1e-10)
        assert coefficients[0]["re"] == pytest.approx(0.0, abs=1e-10)
        difference = data["max_abs_difference"]
        assert isinstance(difference, float)
        assert difference <= 1e-10

    def test_zeroth_derivative(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that the zeroth derivative leaves u unchanged."""
        assert run(["deriv", "dirac@0", "0"]) == EXIT_OK
        data = _stdout_json(capsys)
        assert data["derivative_order"] == 0
        assert data["max_abs_difference"] == 0.0

    def test_second_derivative_of_gaussian(
        self, clean_env: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Test the CSV header with both derivative paths."""
        assert run(["deriv", "gaussian", "2", "--format", "csv"]) == EXIT_OK
        assert capsys.readouterr().out.splitlines()[0] == "index,re,im,operator_re,operator_im"

    def test_negative_order(self, clean_env: Path) -> None:
        """Test that a negative derivative order is a usage error."""
        assert run(["deriv", "dirac@0", "-1"]) == EXIT_USAGE


class TestFamilyEvalCommand:
    """Tests for slo family-eval."""

    def test_dirac_on_h1(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test delta_0.5(h_1) = h_1(0.5)."""
        assert run(["family-eval", "dirac", "0.5", "hermite@1"]) == EXIT_OK
        data = _stdout_json(capsys)
        expected = math.sqrt(2) * 0.5 * math.pi**-0.25 * math.exp(-0.125)
        member_pairing = data["member_pairing"]
        applied_value = data["applied_value"]
        assert isinstance(member_pairing, dict)
        assert isinstance(applied_value, dict)
        assert member_pairing["re"] == pytest.approx(expected, rel=1e-13)
        assert applied_value["re"] == pytest.approx(expected, rel=1e-13)
        assert data["point"] == [0.5]

    def test_derivative_at_origin(
        self, clean_env: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Test delta'_0(h_0) = -h_0'(0) = 0."""
        assert run(["family-eval", "dirac'", "0", "hermite@0"]) == EXIT_OK
        member_pairing = _stdout_json(capsys)["member_pairing"]
        assert isinstance(member_pairing, dict)
        assert member_pairing["re"] == pytest.approx(0.0, abs=1e-15)

    def test_negative_point_csv(
        self, clean_env: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Test a negative point and the CSV layout."""
        assert run(["family-eval", "dirac", "-0.5", "gaussian", "--format", "csv"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "path,re,im"
        assert lines[3].startswith("difference,")

    def test_point_dimension(self, clean_env: Path) -> None:
        """Test that a 2-D point for a 1-D family is a usage error."""
        assert run(["family-eval", "dirac", "1,2", "hermite@0"]) == EXIT_USAGE

    def test_resolution_failure(self, clean_env: Path) -> None:
        """Test that a numerical failure exits with 1."""
        with patch(
            "schwartz_linear.main.parse_family",
            side_effect=NotSchwartzAtResolution((0,), 1.0, 1e-8),
        ):
            assert run(["family-eval", "dirac", "0", "hermite@0"]) == EXIT_FAILED


class TestConfiguration:
    """Tests for configuration sources on the command line."""

    def test_output_file(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that --out writes the result to a file instead of stdout."""
        out = clean_env / "expansion.json"
        assert run(["expand", "dirac@0", "--order", "8", "--out", str(out)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text())["order"] == 8

    def test_config_file(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test a config file given with -c."""
        config = clean_env / "custom.yaml"
        config.write_text("order: 10\nformat: json\n")
        assert run(["expand", "dirac@0", "-c", str(config)]) == EXIT_OK
        assert _stdout_json(capsys)["order"] == 10

    def test_default_config_file(
        self, clean_env: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Test that ./slo.yaml is read when present."""
        (clean_env / "slo.yaml").write_text("order: 6\n")
        assert run(["expand", "dirac@0"]) == EXIT_OK
        assert _stdout_json(capsys)["order"] == 6

    def test_env_then_flags(
        self,
        clean_env: Path,
        monkeypatch: pytest.MonkeyPatch,
        capsys: pytest.CaptureFixture[str],
    ) -> None:
        """Test that SLO_* variables override the file and flags override both."""
        (clean_env / "slo.yaml").write_text("order: 6\n")
        monkeypatch.setenv("SLO_ORDER", "12")
        assert run(["expand", "dirac@0"]) == EXIT_OK
        assert _stdout_json(capsys)["order"] == 12
        assert run(["expand", "dirac@0", "--order", "9"]) == EXIT_OK
        assert _stdout_json(capsys)["order"] == 9

    def test_missing_config_file(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that a missing -c file is a usage error."""
        assert run(["verify", "-c", str(clean_env / "missing.yaml")]) == EXIT_USAGE
        assert "Failed to load configuration" in capsys.readouterr().err

    def test_logs_on_stderr(self, clean_env: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that JSON logs go to stderr and results to stdout."""
        assert run(["expand", "dirac@0", "--order", "8", "--log-level", "info"]) == EXIT_OK
        captured = capsys.readouterr()
        events = [json.loads(line)["event"] for line in captured.err.splitlines()]
        assert "slo starting" in events
        assert "slo finished" in events
        assert json.loads(captured.out)["order"] == 8
