"""Test functions in S_n, tempered distributions in S'_n and their pairing.

Both are stored as complex coefficient vectors over the graded multi-index
order of the basis: a TestFunction by its Hermite coefficients c_alpha, a
TemperedDistribution by its dual coefficients d_alpha = u(h_alpha). The
pairing is bilinear, without conjugation.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .config import BasisConfig
from .errors import BasisMismatchError, DomainError, InputError, NotSchwartzAtResolution
from .hermite import ComplexArray, hermite_basis


def _coefficient_vector(values: npt.ArrayLike, basis: BasisConfig, what: str) -> ComplexArray:
    array = np.array(values, dtype=np.complex128)
    if array.shape != (basis.size,):
        raise BasisMismatchError(
            f"{what} has shape {array.shape}, basis needs ({basis.size},)",
            expected=(basis.size,),
            actual=array.shape,
        )
    if not np.all(np.isfinite(array)):
        raise InputError(f"{what} contains non-finite entries")
    array.setflags(write=False)
    return array


def require_same_basis(expected: BasisConfig, actual: BasisConfig, what: str) -> None:
    if expected != actual:
        raise BasisMismatchError(
            f"{what}: basis (dim={actual.dim}, order={actual.order}) does not match "
            f"(dim={expected.dim}, order={expected.order})",
            expected=expected,
            actual=actual,
        )


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Element of S_n given by its Hermite coefficients."""

    __test__ = False

    basis: BasisConfig
    coeffs: ComplexArray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coeffs", _coefficient_vector(self.coeffs, self.basis, "Test function")
        )


@dataclass(frozen=True, eq=False)
class TemperedDistribution:
    """Element of S'_n given by its dual coefficients u(h_alpha)."""

    basis: BasisConfig
    duals: ComplexArray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "duals", _coefficient_vector(self.duals, self.basis, "Distribution")
        )


def _basis_position(basis: BasisConfig, index: int | Sequence[int]) -> int:
    alpha = (index,) if isinstance(index, int) else tuple(index)
    if len(alpha) != basis.dim:
        raise DomainError(f"Multi-index {alpha} does not have {basis.dim} entries")
    position = hermite_basis(basis).index_of.get(alpha)
    if position is None:
        raise DomainError(f"Multi-index {alpha} outside degree range [0, {basis.order}]")
    return position


def _unit(basis: BasisConfig, index: int | Sequence[int]) -> ComplexArray:
    unit = np.zeros(basis.size, dtype=np.complex128)
    unit[_basis_position(basis, index)] = 1.0
    return unit


def hermite_function(basis: BasisConfig, index: int | Sequence[int]) -> TestFunction:
    """The basis test function h_alpha."""
    return TestFunction(basis, _unit(basis, index))


def coordinate_distribution(
    basis: BasisConfig, index: int | Sequence[int]
) -> TemperedDistribution:
    """The dual coordinate functional E_alpha with E_alpha(h_beta) = delta_alpha_beta."""
    return TemperedDistribution(basis, _unit(basis, index))


def zero_test_function(basis: BasisConfig) -> TestFunction:
    return TestFunction(basis, np.zeros(basis.size))


def zero_distribution(basis: BasisConfig) -> TemperedDistribution:
    return TemperedDistribution(basis, np.zeros(basis.size))


def pair(u: TemperedDistribution, phi: TestFunction) -> complex:
    """Canonical pairing <u, phi> = sum_alpha d_alpha c_alpha."""
    require_same_basis(u.basis, phi.basis, "pair")
    return complex(u.duals @ phi.coeffs)


def evaluate(phi: TestFunction, point: npt.ArrayLike) -> complex:
    """Pointwise value of a test function."""
    values = hermite_basis(phi.basis).evaluate(point)
    return complex(values @ phi.coeffs)


def dirac_at(basis: BasisConfig, point: npt.ArrayLike) -> TemperedDistribution:
    """Dirac distribution delta_x, with duals h_alpha(x)."""
    x = np.asarray(point, dtype=np.float64).reshape(-1)
    if x.shape != (basis.dim,):
        raise BasisMismatchError(
            f"Point has {x.size} coordinates, basis dimension is {basis.dim}",
            expected=basis.dim,
            actual=x.size,
        )
    if not np.all(np.isfinite(x)):
        raise InputError(f"Dirac location {x.tolist()} is not finite")
    return TemperedDistribution(basis, hermite_basis(basis).evaluate(x))


def embed_function(basis: BasisConfig, f: Callable[..., complex]) -> TemperedDistribution:
    """Regular distribution phi -> integral f phi, by quadrature of f h_alpha."""
    coeffs, _ = hermite_basis(basis).fit_function(f)
    return TemperedDistribution(basis, coeffs)


def fit_test_function(basis: BasisConfig, f: Callable[..., complex]) -> TestFunction:
    """Fit a callable into S_n, rejecting it when its Hermite tail is not negligible."""
    coeffs, residual = hermite_basis(basis).fit_function(f)
    if residual > basis.tail_fraction:
        raise NotSchwartzAtResolution((), residual, basis.tail_fraction)
    return TestFunction(basis, coeffs)


def dist_add(u: TemperedDistribution, w: TemperedDistribution) -> TemperedDistribution:
    require_same_basis(u.basis, w.basis, "dist_add")
    return TemperedDistribution(u.basis, u.duals + w.duals)


def dist_scale(c: complex, u: TemperedDistribution) -> TemperedDistribution:
    return TemperedDistribution(u.basis, c * u.duals)


def fn_add(phi: TestFunction, psi: TestFunction) -> TestFunction:
    require_same_basis(phi.basis, psi.basis, "fn_add")
    return TestFunction(phi.basis, phi.coeffs + psi.coeffs)


def fn_scale(c: complex, phi: TestFunction) -> TestFunction:
    return TestFunction(phi.basis, c * phi.coeffs)
