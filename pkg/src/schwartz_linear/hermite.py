"""Orthonormal Hermite functions, Gauss-Hermite quadrature and coefficient matrices.

Every other module expresses test functions and distributions through the
coefficients of the L2-normalized Hermite functions

    h_0(x) = pi^(-1/4) exp(-x^2/2)
    h_1(x) = sqrt(2) x h_0(x)
    h_{j+1}(x) = sqrt(2/(j+1)) x h_j(x) - sqrt(j/(j+1)) h_{j-1}(x)

and their tensor products in higher dimension.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable
from functools import cached_property, lru_cache
from typing import Any, NamedTuple, TypeVar

import numpy as np
import numpy.typing as npt
import structlog

from .config import MAX_QUAD_ORDER, BasisConfig
from .errors import DomainError, InputError

logger = structlog.get_logger()

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
IntArray = npt.NDArray[np.int64]
ArrayT = TypeVar("ArrayT", bound=np.ndarray[Any, Any])


class QuadratureRule(NamedTuple):
    """Gauss-Hermite rule for the weight exp(-x^2).

    plain_weights integrate against dx: plain_weights = weights * exp(x^2).
    """

    nodes: FloatArray
    weights: FloatArray
    plain_weights: FloatArray


def _frozen(array: ArrayT) -> ArrayT:
    array.setflags(write=False)
    return array


@lru_cache(maxsize=32)
def gauss_hermite(count: int) -> QuadratureRule:
    """Return the count-node rule, exact for polynomials of degree <= 2*count-1.

    Nodes are the eigenvalues of the symmetric Jacobi matrix of the Hermite
    recurrence, polished by one Newton step on h_count. The dx-weights are
    1 / (count * h_{count-1}(x_i)^2), formed from Hermite functions so that no
    exp(x^2) factor or unscaled polynomial value appears; the exp(-x^2)
    weights follow from them and underflow to 0 at the outermost nodes of
    large rules.
    """
    if count < 1:
        raise DomainError(f"Quadrature needs at least one node, got {count}")
    if count > MAX_QUAD_ORDER:
        raise DomainError(f"Quadrature supports at most {MAX_QUAD_ORDER} nodes, got {count}")
    off_diagonal = np.sqrt(np.arange(1, count) / 2.0)
    jacobi = np.diag(off_diagonal, 1) + np.diag(off_diagonal, -1)
    nodes = np.linalg.eigvalsh(jacobi)

    values = hermite_functions(nodes, count)
    h_count, h_prev = values[:, count], values[:, count - 1]
    nodes = nodes - h_count / (math.sqrt(2.0 * count) * h_prev - nodes * h_count)
    nodes = (nodes - nodes[::-1]) / 2.0

    h_prev = hermite_functions(nodes, count - 1)[:, count - 1]
    plain = 1.0 / (count * h_prev**2)
    plain = (plain + plain[::-1]) / 2.0
    return QuadratureRule(
        nodes=_frozen(nodes),
        weights=_frozen(plain * np.exp(-(nodes**2))),
        plain_weights=_frozen(plain),
    )


def hermite_functions(x: npt.ArrayLike, order: int) -> FloatArray:
    """Evaluate h_0..h_order at every point of x.

    Returns an array of shape x.shape + (order+1,).
    """
    points = np.asarray(x, dtype=np.float64)
    values = np.empty(points.shape + (order + 1,), dtype=np.float64)
    values[..., 0] = np.pi**-0.25 * np.exp(-(points**2) / 2.0)
    if order >= 1:
        values[..., 1] = math.sqrt(2.0) * points * values[..., 0]
    for j in range(1, order):
        values[..., j + 1] = (
            math.sqrt(2.0 / (j + 1)) * points * values[..., j]
            - math.sqrt(j / (j + 1)) * values[..., j - 1]
        )
    return values


def graded_multi_indices(dim: int, order: int) -> IntArray:
    """All multi-indices in {0..order}^dim, by total degree then lexicographically."""
    indices = sorted(
        itertools.product(range(order + 1), repeat=dim),
        key=lambda alpha: (sum(alpha), alpha),
    )
    return np.array(indices, dtype=np.int64).reshape(len(indices), dim)


def _ladder_matrix(order: int, sign: float) -> FloatArray:
    """Band matrix with (Ac)_m = sqrt((m+1)/2) c_{m+1} + sign * sqrt(m/2) c_{m-1}.

    The coupling from degree order to order+1 is dropped.
    """
    upper = np.sqrt(np.arange(1, order + 1) / 2.0)
    return np.diag(upper, 1) + sign * np.diag(upper, -1)


class HermiteBasis:
    """Tensor Hermite basis, quadrature and coefficient matrices for one BasisConfig.

    Instances are immutable once built; obtain them through hermite_basis().
    """

    def __init__(self, config: BasisConfig) -> None:
        self.config = config
        self.rule = gauss_hermite(config.quad_order)
        logger.debug(
            "Built Hermite basis",
            dim=config.dim,
            order=config.order,
            quad_order=config.quad_order,
            size=config.size,
        )

    @property
    def dim(self) -> int:
        return self.config.dim

    @property
    def order(self) -> int:
        return self.config.order

    @property
    def size(self) -> int:
        return self.config.size

    @cached_property
    def multi_indices(self) -> IntArray:
        return _frozen(graded_multi_indices(self.dim, self.order))

    @cached_property
    def _lex_permutation(self) -> IntArray:
        """Position of each graded multi-index in C-order (lexicographic) layout."""
        shape = (self.config.axis_size,) * self.dim
        flat = np.ravel_multi_index(tuple(self.multi_indices.T), shape)
        return np.asarray(flat, dtype=np.int64)

    @cached_property
    def index_of(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(a) for a in alpha): i for i, alpha in enumerate(self.multi_indices)}

    @cached_property
    def max_degrees(self) -> IntArray:
        """|alpha|_inf for every basis element."""
        return _frozen(self.multi_indices.max(axis=1))

    @cached_property
    def nodes(self) -> FloatArray:
        """Tensor quadrature nodes, shape (Q^dim, dim)."""
        grids = np.meshgrid(*([self.rule.nodes] * self.dim), indexing="ij")
        return _frozen(np.stack([g.ravel() for g in grids], axis=-1))

    def _tensor_weights(self, axis_weights: FloatArray) -> FloatArray:
        grids = np.meshgrid(*([axis_weights] * self.dim), indexing="ij")
        return _frozen(np.prod(np.stack([g.ravel() for g in grids], axis=-1), axis=1))

    @cached_property
    def weights(self) -> FloatArray:
        """Tensor weights for the weight function exp(-|x|^2)."""
        return self._tensor_weights(self.rule.weights)

    @cached_property
    def plain_weights(self) -> FloatArray:
        """Tensor weights for integrals with respect to dx."""
        return self._tensor_weights(self.rule.plain_weights)

    @cached_property
    def node_values(self) -> FloatArray:
        """Basis functions at the quadrature nodes, shape (Q^dim, size)."""
        return _frozen(self.evaluate(self.nodes))

    def evaluate(self, points: npt.ArrayLike) -> FloatArray:
        """Values h_alpha(p) for an array of points of shape (P, dim) or (dim,)."""
        pts = np.asarray(points, dtype=np.float64)
        single = pts.ndim <= 1 and pts.size == self.dim
        pts = pts.reshape(-1, self.dim)
        if not np.all(np.isfinite(pts)):
            raise InputError("Evaluation point has non-finite coordinates")
        values = np.ones((pts.shape[0], self.size), dtype=np.float64)
        for axis in range(self.dim):
            axis_values = hermite_functions(pts[:, axis], self.order)
            values *= axis_values[:, self.multi_indices[:, axis]]
        return values[0] if single else values

    def eval_hermite(self, degree: int, x: float) -> float:
        """Value of the 1-D Hermite function h_degree at x."""
        if not 0 <= degree <= self.order:
            raise DomainError(f"Hermite degree {degree} outside [0, {self.order}]")
        return float(hermite_functions(x, degree)[degree])

    def _along_axis(self, matrix_1d: FloatArray, axis: int) -> FloatArray:
        eye = np.eye(self.config.axis_size)
        full = np.ones((1, 1))
        for a in range(self.dim):
            full = np.kron(full, matrix_1d if a == axis else eye)
        perm = self._lex_permutation
        return full[np.ix_(perm, perm)]

    @cached_property
    def _derivative_matrices(self) -> tuple[FloatArray, ...]:
        ladder = _ladder_matrix(self.order, -1.0)
        return tuple(_frozen(self._along_axis(ladder, axis)) for axis in range(self.dim))

    @cached_property
    def _position_matrices(self) -> tuple[FloatArray, ...]:
        ladder = _ladder_matrix(self.order, 1.0)
        return tuple(_frozen(self._along_axis(ladder, axis)) for axis in range(self.dim))

    def _check_axis(self, axis: int) -> None:
        if not 0 <= axis < self.dim:
            raise DomainError(f"Axis {axis} outside [0, {self.dim})")

    def derivative_matrix(self, axis: int = 0) -> FloatArray:
        """Coefficient action of d/dx_axis, truncated at degree N.

        (Dc)_m = sqrt((m+1)/2) c_{m+1} - sqrt(m/2) c_{m-1} along the axis.
        """
        self._check_axis(axis)
        return self._derivative_matrices[axis]

    def position_matrix(self, axis: int = 0) -> FloatArray:
        """Coefficient action of multiplication by x_axis, truncated at degree N."""
        self._check_axis(axis)
        return self._position_matrices[axis]

    def degree_mask(self, max_degree: int) -> npt.NDArray[np.bool_]:
        """Basis elements with |alpha|_inf <= max_degree."""
        return self.max_degrees <= max_degree

    def tail_mask(self) -> npt.NDArray[np.bool_]:
        return self.max_degrees > self.config.tail_degree

    def probe_mask(self) -> npt.NDArray[np.bool_]:
        return self.degree_mask(self.config.probe_degree)

    def sample(self, f: Callable[..., complex]) -> ComplexArray:
        """Evaluate a scalar callable f(x_1, ..., x_dim) at every quadrature node."""
        samples = np.array([f(*point) for point in self.nodes], dtype=np.complex128)
        if not np.all(np.isfinite(samples)):
            raise InputError("Sampled function returned a non-finite value")
        return samples

    def fit_samples(self, samples: npt.ArrayLike) -> tuple[ComplexArray, FloatArray]:
        """Project node samples onto the basis.

        samples has shape (Q^dim,) or (Q^dim, columns). Returns the coefficients
        (size,) or (size, columns) and the tail energy fraction of each column.
        """
        values = np.asarray(samples, dtype=np.complex128)
        if not np.all(np.isfinite(values)):
            raise InputError("Samples contain non-finite values")
        single = values.ndim == 1
        columns = values.reshape(values.shape[0], -1)
        coeffs = self.node_values.T @ (self.plain_weights[:, None] * columns)
        # energies of each column scaled to its largest coefficient; squares of
        # fast-growing samples would overflow otherwise
        scale = np.max(np.abs(coeffs), axis=0)
        unit = coeffs / np.where(scale > 0.0, scale, 1.0)
        energy = np.sum(np.abs(unit) ** 2, axis=0)
        tail = np.sum(np.abs(unit[self.tail_mask()]) ** 2, axis=0)
        with np.errstate(over="ignore"):
            negligible = scale**2 * energy < self.config.tol
        residuals = np.where(negligible, 0.0, tail / np.where(energy > 0.0, energy, 1.0))
        if single:
            return coeffs[:, 0], residuals
        return coeffs, residuals

    def fit_function(self, f: Callable[..., complex]) -> tuple[ComplexArray, float]:
        """Hermite coefficients of f and its tail energy fraction."""
        coeffs, residuals = self.fit_samples(self.sample(f))
        return coeffs, float(residuals[0])


@lru_cache(maxsize=16)
def hermite_basis(config: BasisConfig) -> HermiteBasis:
    """Shared basis instance for a configuration."""
    return HermiteBasis(config)
