"""Builtin objects addressed by short ids of the form kind[@param].

Distributions: dirac@x[,y..], hermite@j[,k..], gaussian, constant
Test functions: hermite@j[,k..], gaussian, zero
Families:       dirac, dirac', dirac'', dirac-deriv@k
"""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

from .config import BasisConfig
from .distribution import (
    TemperedDistribution,
    TestFunction,
    dirac_at,
    embed_function,
    evaluate,
    fit_test_function,
    hermite_function,
    zero_test_function,
)
from .errors import DomainError, UnknownIdentifierError
from .family import SFamily, dirac_derivative_family, dirac_family

DISTRIBUTION_IDS = ("dirac@x[,y..]", "hermite@j[,k..]", "gaussian", "constant")
TEST_FUNCTION_IDS = ("hermite@j[,k..]", "gaussian", "zero")
FAMILY_IDS = ("dirac", "dirac'", "dirac''", "dirac-deriv@k")


def _split(identifier: str) -> tuple[str, str | None]:
    kind, sep, param = identifier.strip().partition("@")
    return kind, (param if sep else None)


def parse_point(text: str, dim: int) -> npt.NDArray[np.float64]:
    """Comma-separated coordinates of a point in R^dim."""
    try:
        coords = [float(part) for part in text.split(",")]
    except ValueError as e:
        raise UnknownIdentifierError(text, "point") from e
    if len(coords) != dim or not all(math.isfinite(c) for c in coords):
        raise UnknownIdentifierError(text, f"point in R^{dim}")
    return np.array(coords, dtype=np.float64)


def _multi_index(identifier: str, param: str | None, basis: BasisConfig, kind: str) -> list[int]:
    if param is None:
        raise UnknownIdentifierError(identifier, kind)
    try:
        alpha = [int(part) for part in param.split(",")]
    except ValueError as e:
        raise UnknownIdentifierError(identifier, kind) from e
    if len(alpha) != basis.dim:
        raise UnknownIdentifierError(identifier, f"{kind} (needs {basis.dim} degrees)")
    if any(not 0 <= a <= basis.order for a in alpha):
        raise DomainError(f"Hermite degrees {alpha} outside [0, {basis.order}]")
    return alpha


def _gaussian(*x: float) -> complex:
    return complex(math.exp(-0.5 * sum(c * c for c in x)))


def _constant(*x: float) -> complex:
    return 1.0 + 0.0j


def parse_distribution(basis: BasisConfig, identifier: str) -> TemperedDistribution:
    kind, param = _split(identifier)
    if kind == "dirac" and param is not None:
        return dirac_at(basis, parse_point(param, basis.dim))
    if kind == "hermite":
        phi = hermite_function(basis, _multi_index(identifier, param, basis, "distribution"))
        return embed_function(basis, lambda *x: evaluate(phi, x))
    if kind == "gaussian" and param is None:
        return embed_function(basis, _gaussian)
    if kind == "constant" and param is None:
        return embed_function(basis, _constant)
    raise UnknownIdentifierError(identifier, "distribution")


def parse_test_function(basis: BasisConfig, identifier: str) -> TestFunction:
    kind, param = _split(identifier)
    if kind == "hermite":
        return hermite_function(basis, _multi_index(identifier, param, basis, "test function"))
    if kind == "gaussian" and param is None:
        return fit_test_function(basis, _gaussian)
    if kind == "zero" and param is None:
        return zero_test_function(basis)
    raise UnknownIdentifierError(identifier, "test function")


def parse_family(basis: BasisConfig, identifier: str) -> SFamily:
    """Dirac-type families on R^dim; derivatives act along the first axis."""
    kind, param = _split(identifier)
    if param is None and kind.startswith("dirac") and set(kind[len("dirac") :]) <= {"'"}:
        order = len(kind) - len("dirac")
    elif kind == "dirac-deriv" and param is not None and param.isdigit():
        order = int(param)
    else:
        raise UnknownIdentifierError(identifier, "family")
    if order == 0:
        return dirac_family(basis)
    orders = [0] * basis.dim
    orders[0] = order
    return dirac_derivative_family(basis, orders)
