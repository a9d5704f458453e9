"""Configuration loading and validation."""

from __future__ import annotations

import math
import os
import re
from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

DEFAULT_CONFIG_PATH = Path("slo.yaml")

DEFAULT_ORDER = 32
DEFAULT_QUAD_ORDER = 80
# h_0 at the outermost node of larger rules drops below the double range
MAX_QUAD_ORDER = 600
DEFAULT_TOL = 1e-10
DEFAULT_TAIL_FRACTION = 1e-8

OutputFormat = Literal["json", "csv"]
LogLevel = Literal["debug", "info", "warning", "error"]


class BasisConfig(BaseModel):
    """Discretization of S_n: tensor Hermite functions up to a fixed degree."""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(default=1, ge=1, description="Spatial dimension n")
    order: int = Field(default=DEFAULT_ORDER, ge=1, description="Maximum 1-D Hermite degree N")
    quad_order: int = Field(
        default=DEFAULT_QUAD_ORDER,
        ge=1,
        le=MAX_QUAD_ORDER,
        description="Gauss-Hermite nodes per axis Q",
    )
    tol: float = Field(default=DEFAULT_TOL, ge=0.0, description="Default comparison tolerance")
    tail_fraction: float = Field(
        default=DEFAULT_TAIL_FRACTION,
        gt=0.0,
        lt=1.0,
        description="Tail energy threshold for Schwartz membership",
    )

    @model_validator(mode="after")
    def _check_quadrature(self) -> BasisConfig:
        if self.quad_order < 2 * self.order + 2:
            raise ValueError(
                f"quad_order {self.quad_order} must be at least 2*order+2 = {2 * self.order + 2}"
            )
        return self

    @property
    def axis_size(self) -> int:
        return self.order + 1

    @property
    def size(self) -> int:
        return self.axis_size**self.dim

    @property
    def tail_degree(self) -> int:
        """Degrees strictly above this bound form the tail band."""
        return math.ceil(0.8 * self.order)

    @property
    def probe_degree(self) -> int:
        """Columns up to this degree decide Schwartz membership."""
        return self.order // 2


def default_quad_order(order: int) -> int:
    """Smallest admissible node count, but never below the default."""
    return max(DEFAULT_QUAD_ORDER, 2 * order + 2)


class CliConfig(BaseModel):
    """Settings for the command-line front end."""

    order: int = Field(default=DEFAULT_ORDER, ge=1, description="Maximum Hermite degree N")
    quad_order: int | None = Field(
        default=None,
        ge=1,
        le=MAX_QUAD_ORDER,
        description="Quadrature nodes per axis (default max(80, 2N+2))",
    )
    dim: int = Field(default=1, ge=1, description="Spatial dimension")
    tol: float = Field(default=DEFAULT_TOL, ge=0.0, description="Comparison tolerance")
    tail_fraction: float = Field(default=DEFAULT_TAIL_FRACTION, gt=0.0, lt=1.0)
    seed: int = Field(default=0, description="Seed for randomized checks")
    format: OutputFormat = Field(default="json", description="Output format")
    output_path: Path | None = Field(default=None, description="Write output here, not stdout")
    workers: int = Field(default=1, ge=1, description="Threads used by the verification suite")
    log_level: LogLevel = Field(default="warning", description="Diagnostics level on stderr")

    def basis(self) -> BasisConfig:
        """Build (and validate) the basis configuration."""
        quad = self.quad_order if self.quad_order is not None else default_quad_order(self.order)
        return BasisConfig(
            dim=self.dim,
            order=self.order,
            quad_order=quad,
            tol=self.tol,
            tail_fraction=self.tail_fraction,
        )


def _substitute_env_vars(value: str) -> str:
    """Substitute ${VAR_NAME} patterns with environment variables."""
    pattern = re.compile(r"\$\{([^}]+)\}")

    def replacer(match: re.Match[str]) -> str:
        var_name = match.group(1)
        env_value = os.environ.get(var_name)
        if env_value is None:
            raise ValueError(f"Environment variable '{var_name}' not set")
        return env_value

    return pattern.sub(replacer, value)


def _process_env_vars(obj: object) -> object:
    """Recursively process environment variable substitution in a data structure."""
    if isinstance(obj, str):
        return _substitute_env_vars(obj)
    elif isinstance(obj, dict):
        return {k: _process_env_vars(v) for k, v in obj.items()}
    elif isinstance(obj, list):
        return [_process_env_vars(item) for item in obj]
    return obj


def load_config(path: Path) -> CliConfig:
    """Load and validate configuration from a YAML file."""
    with path.open() as f:
        raw_config = yaml.safe_load(f) or {}

    if not isinstance(raw_config, dict):
        raise ValueError(f"Config file {path} must contain a mapping")

    processed_config = _process_env_vars(raw_config)

    return CliConfig.model_validate(processed_config)


# Environment variable -> CliConfig field
ENV_FIELDS = {
    "SLO_ORDER": "order",
    "SLO_QUAD": "quad_order",
    "SLO_DIM": "dim",
    "SLO_TOL": "tol",
    "SLO_TAIL_FRACTION": "tail_fraction",
    "SLO_SEED": "seed",
    "SLO_FORMAT": "format",
    "SLO_WORKERS": "workers",
    "SLO_LOG_LEVEL": "log_level",
}


def load_config_from_env(base: CliConfig | None = None) -> CliConfig:
    """Overlay SLO_* environment variables on a base configuration.

    Recognized variables:
        SLO_ORDER, SLO_QUAD, SLO_DIM, SLO_TOL, SLO_TAIL_FRACTION,
        SLO_SEED, SLO_FORMAT, SLO_WORKERS, SLO_LOG_LEVEL
    """
    data = (base or CliConfig()).model_dump()
    for env_name, field in ENV_FIELDS.items():
        value = os.environ.get(env_name)
        if value:
            data[field] = value
    return CliConfig.model_validate(data)


def load_config_auto(config_path: Path | None = None) -> tuple[CliConfig, str]:
    """Load configuration with auto-detection.

    Priority:
    1. Explicit config path (if provided via -c)
    2. Default config file (if exists)
    3. Built-in defaults

    Environment variables are applied on top of whichever source was used.

    Returns:
        Tuple of (CliConfig, source_description) for logging
    """
    if config_path:
        return load_config_from_env(load_config(config_path)), f"config file: {config_path}"

    if DEFAULT_CONFIG_PATH.exists():
        return (
            load_config_from_env(load_config(DEFAULT_CONFIG_PATH)),
            f"default config: {DEFAULT_CONFIG_PATH}",
        )

    return load_config_from_env(), "defaults and environment variables"
