"""Shared pytest fixtures for schwartz_linear tests."""

from __future__ import annotations

from collections.abc import Iterator
from pathlib import Path

import numpy as np
import pytest
import structlog

from schwartz_linear.config import ENV_FIELDS, BasisConfig
from schwartz_linear.distribution import TemperedDistribution, TestFunction
from schwartz_linear.family import SFamily
from schwartz_linear.operator import SLinearOperator
from schwartz_linear.verify import (
    random_distribution,
    random_family,
    random_operator,
    random_test_function,
)


@pytest.fixture(autouse=True)
def reset_logging() -> Iterator[None]:
    """Undo any structlog configuration a CLI test installed."""
    yield
    structlog.reset_defaults()


@pytest.fixture
def clean_env(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> Path:
    """No SLO_* variables and no slo.yaml in the working directory."""
    for name in ENV_FIELDS:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def basis() -> BasisConfig:
    """One-dimensional basis of moderate order."""
    return BasisConfig(order=16)


@pytest.fixture
def small_basis() -> BasisConfig:
    return BasisConfig(order=8)


@pytest.fixture
def default_basis() -> BasisConfig:
    return BasisConfig()


@pytest.fixture
def plane_basis() -> BasisConfig:
    """Two-dimensional tensor basis; 7 x 7 functions on a 80 x 80 grid."""
    return BasisConfig(dim=2, order=6)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def random_u(basis: BasisConfig, rng: np.random.Generator) -> TemperedDistribution:
    return random_distribution(basis, rng)


@pytest.fixture
def random_phi(basis: BasisConfig, rng: np.random.Generator) -> TestFunction:
    return random_test_function(basis, rng)


@pytest.fixture
def random_v(basis: BasisConfig, rng: np.random.Generator) -> SFamily:
    return random_family(basis, basis, rng)


@pytest.fixture
def random_op(basis: BasisConfig, rng: np.random.Generator) -> SLinearOperator:
    return random_operator(basis, basis, rng)


@pytest.fixture
def sample_config_yaml(tmp_path: Path) -> Path:
    """Create a sample YAML config file for testing."""
    config_content = """
order: 12
dim: 1
tol: 1.0e-9
seed: 7
format: csv
workers: 2
log_level: info
"""
    config_file = tmp_path / "config.yaml"
    config_file.write_text(config_content)
    return config_file
