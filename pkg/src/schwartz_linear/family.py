"""Schwartz families (v_p) indexed by R^k with values in S'_n.

A family is stored as the matrix of its associated operator v^ : S_n -> S_k.
Column alpha holds the Hermite coefficients in S_k of p -> v_p(h_alpha), so
that applying the family to a test function is a matrix-vector product and
superposing it against a coefficient distribution is a product with the
transpose.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import structlog

from .config import BasisConfig
from .distribution import TemperedDistribution, TestFunction, require_same_basis
from .errors import BasisMismatchError, InputError, NotSchwartzAtResolution
from .hermite import ComplexArray, hermite_basis

logger = structlog.get_logger()

Sampler = Callable[[npt.NDArray[np.float64]], TemperedDistribution]


@dataclass(frozen=True, eq=False)
class SFamily:
    """Family in S(R^k, S'_n) represented by the matrix of v^."""

    basis_index: BasisConfig
    basis_value: BasisConfig
    matrix: ComplexArray = field(repr=False)

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.complex128)
        expected = (self.basis_index.size, self.basis_value.size)
        if matrix.shape != expected:
            raise BasisMismatchError(
                f"Family matrix has shape {matrix.shape}, bases need {expected}",
                expected=expected,
                actual=matrix.shape,
            )
        if not np.all(np.isfinite(matrix)):
            raise InputError("Family matrix contains non-finite entries")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def index_dim(self) -> int:
        return self.basis_index.dim

    @property
    def value_dim(self) -> int:
        return self.basis_value.dim


def family_apply(v: SFamily, phi: TestFunction) -> TestFunction:
    """v^(phi): the test function p -> v_p(phi) on the index space."""
    require_same_basis(v.basis_value, phi.basis, "family_apply")
    return TestFunction(v.basis_index, v.matrix @ phi.coeffs)


def member(v: SFamily, point: npt.ArrayLike) -> TemperedDistribution:
    """The distribution v_p."""
    values = hermite_basis(v.basis_index).evaluate(np.asarray(point, dtype=np.float64))
    if values.ndim != 1:
        raise BasisMismatchError(
            f"Member index must be one point of R^{v.index_dim}",
            expected=v.index_dim,
            actual=np.shape(point),
        )
    return TemperedDistribution(v.basis_value, values @ v.matrix)


def dirac_family(basis: BasisConfig) -> SFamily:
    """The Dirac family (delta_x) on R^n; its associated operator is the identity."""
    return SFamily(basis, basis, np.eye(basis.size, dtype=np.complex128))


def dirac_derivative_family(basis: BasisConfig, multi_index: int | Sequence[int]) -> SFamily:
    """The family (delta_x^(i)) with delta_x^(i)(phi) = (-1)^|i| phi^(i)(x)."""
    orders = (multi_index,) if isinstance(multi_index, int) else tuple(multi_index)
    if len(orders) != basis.dim or any(k < 0 for k in orders):
        raise BasisMismatchError(
            f"Derivative multi-index {orders} invalid for dimension {basis.dim}",
            expected=basis.dim,
            actual=orders,
        )
    hb = hermite_basis(basis)
    matrix = np.eye(basis.size, dtype=np.complex128)
    for axis, count in enumerate(orders):
        for _ in range(count):
            matrix = matrix @ hb.derivative_matrix(axis)
    return SFamily(basis, basis, (-1) ** sum(orders) * matrix)


def superpose(a: TemperedDistribution, v: SFamily) -> TemperedDistribution:
    """The superposition of v with coefficient system a: a composed with v^."""
    require_same_basis(v.basis_index, a.basis, "superpose")
    return TemperedDistribution(v.basis_value, v.matrix.T @ a.duals)


def family_product(v: SFamily, w: SFamily) -> SFamily:
    """The product v.w, indexed like v and valued like w, with (v.w)^ = v^ w^."""
    require_same_basis(v.basis_value, w.basis_index, "family_product")
    return SFamily(v.basis_index, w.basis_value, v.matrix @ w.matrix)


def family_from_samples(
    basis_index: BasisConfig,
    basis_value: BasisConfig,
    sampler: Sampler,
    max_workers: int | None = None,
) -> SFamily:
    """Build a family from its members, testing that it is of class S.

    The sampler is called once per quadrature node of the index space and must
    be free of side effects. Every column p -> v_p(h_alpha) is fitted in S_k;
    membership is decided on the probe columns |alpha|_inf <= N/2, whose tail
    energy must stay below the configured fraction.

    Raises:
        NotSchwartzAtResolution: a probe column keeps too much energy in the tail
        InputError: a sample is not finite
    """
    hb_index = hermite_basis(basis_index)
    hb_value = hermite_basis(basis_value)
    nodes = list(hb_index.nodes)

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            members = list(pool.map(sampler, nodes))
    else:
        members = [sampler(node) for node in nodes]

    for distribution in members:
        require_same_basis(basis_value, distribution.basis, "family_from_samples")
    samples = np.stack([distribution.duals for distribution in members])

    coeffs, residuals = hb_index.fit_samples(samples)

    probe = hb_value.probe_mask()
    probe_residuals = np.where(probe, residuals, 0.0)
    worst = int(np.argmax(probe_residuals))
    worst_residual = float(probe_residuals[worst])
    logger.debug(
        "Fitted sampled family",
        index_dim=basis_index.dim,
        value_dim=basis_value.dim,
        nodes=len(nodes),
        max_probe_residual=worst_residual,
    )
    if worst_residual > basis_index.tail_fraction:
        column = tuple(int(a) for a in hb_value.multi_indices[worst])
        logger.warning(
            "Sampled family is not of class S at this resolution",
            column=column,
            residual=worst_residual,
            threshold=basis_index.tail_fraction,
        )
        raise NotSchwartzAtResolution(column, worst_residual, basis_index.tail_fraction)

    return SFamily(basis_index, basis_value, coeffs)
