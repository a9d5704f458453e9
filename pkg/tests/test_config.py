"""Tests for configuration loading."""

from __future__ import annotations

from pathlib import Path

import pytest
from pydantic import ValidationError

from schwartz_linear.config import (
    BasisConfig,
    CliConfig,
    _process_env_vars,
    _substitute_env_vars,
    default_quad_order,
    load_config,
    load_config_auto,
    load_config_from_env,
)


class TestBasisConfig:
    """Tests for the basis discretization settings."""

    def test_defaults(self) -> None:
        """Test the documented default discretization."""
        config = BasisConfig()
        assert config.dim == 1
        assert config.order == 32
        assert config.quad_order == 80
        assert config.tol == 1e-10
        assert config.tail_fraction == 1e-8

    def test_derived_sizes(self) -> None:
        """Test axis and total basis sizes."""
        config = BasisConfig(dim=2, order=4)
        assert config.axis_size == 5
        assert config.size == 25

    def test_tail_and_probe_degrees(self) -> None:
        """Test the bands used by the Schwartz-membership test."""
        config = BasisConfig(order=32)
        assert config.tail_degree == 26
        assert config.probe_degree == 16

    def test_quadrature_too_coarse_rejected(self) -> None:
        """Test that quad_order below 2*order+2 is a validation error."""
        with pytest.raises(ValidationError, match="2\\*order\\+2"):
            BasisConfig(order=40, quad_order=80)

    def test_minimal_quadrature_accepted(self) -> None:
        """Test the boundary quad_order == 2*order+2."""
        assert BasisConfig(order=40, quad_order=82).quad_order == 82

    def test_quadrature_above_supported_range_rejected(self) -> None:
        """Test that quad_order is capped at the largest stable rule."""
        with pytest.raises(ValidationError, match="less than or equal to 600"):
            BasisConfig(order=40, quad_order=601)
        assert BasisConfig(order=299, quad_order=600).quad_order == 600

    @pytest.mark.parametrize("field,value", [("order", 0), ("dim", 0), ("tail_fraction", 1.0)])
    def test_invalid_fields_rejected(self, field: str, value: float) -> None:
        """Test range validation of individual fields."""
        with pytest.raises(ValidationError):
            BasisConfig.model_validate({field: value})

    def test_frozen_and_hashable(self) -> None:
        """Test that equal configurations hash alike and cannot be mutated."""
        assert hash(BasisConfig(order=8)) == hash(BasisConfig(order=8))
        with pytest.raises(ValidationError):
            BasisConfig().order = 4  # type: ignore[misc]

    def test_default_quad_order(self) -> None:
        """Test the quadrature default max(80, 2N+2)."""
        assert default_quad_order(16) == 80
        assert default_quad_order(39) == 80
        assert default_quad_order(50) == 102


class TestCliConfig:
    """Tests for the command-line settings."""

    def test_basis_uses_default_quadrature(self) -> None:
        """Test that an unset quad_order resolves from the order."""
        assert CliConfig(order=60).basis().quad_order == 122
        assert CliConfig(order=8).basis().quad_order == 80

    def test_basis_passes_settings(self) -> None:
        """Test that basis() copies the discretization fields."""
        basis = CliConfig(order=10, dim=2, tol=1e-6, tail_fraction=1e-4).basis()
        assert basis == BasisConfig(dim=2, order=10, tol=1e-6, tail_fraction=1e-4)

    def test_basis_validates_explicit_quadrature(self) -> None:
        """Test that an explicit but too small quad_order fails when the basis is built."""
        with pytest.raises(ValidationError):
            CliConfig(order=10, quad_order=12).basis()

    def test_default_quadrature_at_high_order(self) -> None:
        """Test that N = 200 gets the 402-node rule and N = 300 is out of range."""
        assert CliConfig(order=200).basis().quad_order == 402
        with pytest.raises(ValidationError):
            CliConfig(order=300).basis()

    def test_format_restricted(self) -> None:
        """Test that only json and csv are accepted."""
        with pytest.raises(ValidationError):
            CliConfig.model_validate({"format": "xml"})


class TestEnvVarSubstitution:
    """Tests for ${VAR} references in config values."""

    def test_whole_value(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test a value that is a single reference."""
        monkeypatch.setenv("SUITE_SEED", "17")
        assert _substitute_env_vars("${SUITE_SEED}") == "17"

    def test_embedded_reference(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test a reference followed by literal text."""
        monkeypatch.setenv("RUN_DIR", "/tmp/runs")
        assert _substitute_env_vars("${RUN_DIR}/report.json") == "/tmp/runs/report.json"

    def test_two_references(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test two references in one value."""
        monkeypatch.setenv("RUN_DIR", "/tmp/runs")
        monkeypatch.setenv("RUN_NAME", "order48")
        assert _substitute_env_vars("${RUN_DIR}/${RUN_NAME}.csv") == "/tmp/runs/order48.csv"

    def test_unset_reference_raises(self) -> None:
        """Test that an unset variable names itself in the error."""
        with pytest.raises(ValueError, match="Environment variable 'SLO_UNSET_DIR'"):
            _substitute_env_vars("${SLO_UNSET_DIR}/report.json")

    def test_literal_value(self) -> None:
        """Test that a value without references is unchanged."""
        assert _substitute_env_vars("report.csv") == "report.csv"


class TestProcessEnvVars:
    """Tests for substitution through parsed YAML."""

    def test_nested_mapping(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test substitution inside nested mappings."""
        monkeypatch.setenv("ORDER", "24")
        data = {"order": "${ORDER}", "extra": {"quad": "${ORDER}"}}
        assert _process_env_vars(data) == {"order": "24", "extra": {"quad": "24"}}

    def test_sequence(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test substitution inside lists."""
        monkeypatch.setenv("RUN_DIR", "/data")
        data = ["${RUN_DIR}/a.json", "b.json", {"out": "${RUN_DIR}"}]
        assert _process_env_vars(data) == ["/data/a.json", "b.json", {"out": "/data"}]

    def test_scalars_untouched(self) -> None:
        """Test that numbers, booleans and None are returned as parsed."""
        data = {"order": 16, "tol": 1e-10, "workers": None, "verbose": False}
        assert _process_env_vars(data) == data


class TestLoadConfig:
    """Tests for loading configuration from YAML."""

    def test_load_valid_config(self, sample_config_yaml: Path) -> None:
        """Test loading a valid configuration file."""
        config = load_config(sample_config_yaml)
        assert isinstance(config, CliConfig)
        assert config.order == 12
        assert config.tol == 1e-9
        assert config.seed == 7
        assert config.format == "csv"
        assert config.workers == 2

    def test_load_config_with_env_vars(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Test loading config with environment variable substitution."""
        monkeypatch.setenv("TEST_OUT", str(tmp_path / "out.json"))
        config_file = tmp_path / "config.yaml"
        config_file.write_text('output_path: "${TEST_OUT}"\n')

        config = load_config(config_file)
        assert config.output_path == tmp_path / "out.json"

    def test_load_config_defaults(self, tmp_path: Path) -> None:
        """Test that defaults are applied for optional fields."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text("seed: 3\n")

        config = load_config(config_file)

        assert config.seed == 3
        assert config.order == 32
        assert config.quad_order is None
        assert config.format == "json"
        assert config.output_path is None
        assert config.log_level == "warning"

    def test_load_empty_config(self, tmp_path: Path) -> None:
        """Test that an empty file yields the defaults."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text("")
        assert load_config(config_file) == CliConfig()

    def test_load_config_file_not_found(self, tmp_path: Path) -> None:
        """Test that missing config file raises error."""
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "nonexistent.yaml")

    def test_load_config_not_a_mapping(self, tmp_path: Path) -> None:
        """Test that a YAML list is rejected."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text("- 1\n- 2\n")
        with pytest.raises(ValueError, match="must contain a mapping"):
            load_config(config_file)

    def test_load_config_invalid_value(self, tmp_path: Path) -> None:
        """Test that an out-of-range order is a validation error."""
        config_file = tmp_path / "config.yaml"
        config_file.write_text("order: 0\n")
        with pytest.raises(ValidationError):
            load_config(config_file)


class TestLoadConfigFromEnv:
    """Tests for SLO_* environment overrides."""

    def test_env_overrides_defaults(self, clean_env: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that environment variables are parsed into typed fields."""
        monkeypatch.setenv("SLO_ORDER", "20")
        monkeypatch.setenv("SLO_TOL", "1e-7")
        monkeypatch.setenv("SLO_FORMAT", "csv")

        config = load_config_from_env()

        assert config.order == 20
        assert config.tol == 1e-7
        assert config.format == "csv"

    def test_env_overrides_base(
        self, clean_env: Path, monkeypatch: pytest.MonkeyPatch, sample_config_yaml: Path
    ) -> None:
        """Test that environment variables win over the file."""
        monkeypatch.setenv("SLO_SEED", "99")
        config = load_config_from_env(load_config(sample_config_yaml))
        assert config.seed == 99
        assert config.order == 12

    def test_empty_env_var_ignored(self, clean_env: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that empty variables do not override."""
        monkeypatch.setenv("SLO_ORDER", "")
        assert load_config_from_env().order == 32

    def test_invalid_env_value(self, clean_env: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that a malformed value is a validation error."""
        monkeypatch.setenv("SLO_DIM", "two")
        with pytest.raises(ValidationError):
            load_config_from_env()


class TestLoadConfigAuto:
    """Tests for configuration source detection."""

    def test_explicit_path(self, clean_env: Path, sample_config_yaml: Path) -> None:
        """Test that an explicit path is used and reported."""
        config, source = load_config_auto(sample_config_yaml)
        assert config.order == 12
        assert str(sample_config_yaml) in source

    def test_default_path(self, clean_env: Path) -> None:
        """Test that ./slo.yaml is picked up when present."""
        (clean_env / "slo.yaml").write_text("order: 10\n")
        config, source = load_config_auto()
        assert config.order == 10
        assert "default config" in source

    def test_defaults_only(self, clean_env: Path) -> None:
        """Test the fallback to built-in defaults."""
        config, source = load_config_auto()
        assert config == CliConfig()
        assert "defaults" in source
