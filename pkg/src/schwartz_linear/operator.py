"""S-linear operators S'_n -> S'_m in transpose form L = t(B).

B in L(S_m, S_n) is stored as b_matrix of shape (size_n, size_m); column beta
holds the Hermite coefficients in S_n of B(h_beta). The operator acts on dual
coefficients through b_matrix transposed: (L u)(h_beta) = u(B h_beta).
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import structlog

from .config import BasisConfig
from .distribution import TemperedDistribution, require_same_basis
from .errors import BasisMismatchError, InputError
from .family import SFamily, dirac_family, family_from_samples, member
from .hermite import ComplexArray, hermite_basis

logger = structlog.get_logger()

DistributionMap = Callable[[TemperedDistribution], TemperedDistribution]


@dataclass(frozen=True, eq=False)
class SLinearOperator:
    """Transpose t(B) of a continuous linear operator B : S_m -> S_n."""

    basis_src: BasisConfig
    basis_dst: BasisConfig
    b_matrix: ComplexArray = field(repr=False)
    # b_matrix transposed, fixed at construction; apply() goes through it.
    _dual_action: ComplexArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        b = np.array(self.b_matrix, dtype=np.complex128)
        expected = (self.basis_src.size, self.basis_dst.size)
        if b.shape != expected:
            raise BasisMismatchError(
                f"Operator matrix has shape {b.shape}, bases need {expected}",
                expected=expected,
                actual=b.shape,
            )
        if not np.all(np.isfinite(b)):
            raise InputError("Operator matrix contains non-finite entries")
        b.setflags(write=False)
        action = np.ascontiguousarray(b.T)
        action.setflags(write=False)
        object.__setattr__(self, "b_matrix", b)
        object.__setattr__(self, "_dual_action", action)

    @property
    def src_dim(self) -> int:
        return self.basis_src.dim

    @property
    def dst_dim(self) -> int:
        return self.basis_dst.dim


def transpose_of(
    b_matrix: npt.ArrayLike,
    basis_src: BasisConfig,
    basis_dst: BasisConfig | None = None,
) -> SLinearOperator:
    """The operator a -> a o B, for B given by its coefficient matrix."""
    return SLinearOperator(basis_src, basis_dst or basis_src, np.asarray(b_matrix))


def apply(op: SLinearOperator, u: TemperedDistribution) -> TemperedDistribution:
    require_same_basis(op.basis_src, u.basis, "apply")
    return TemperedDistribution(op.basis_dst, op._dual_action @ u.duals)


def image_family(op: SLinearOperator, v: SFamily) -> SFamily:
    """The family (L(v_p))_p, whose associated operator is v^ o B."""
    require_same_basis(op.basis_src, v.basis_value, "image_family")
    return SFamily(v.basis_index, op.basis_dst, v.matrix @ op.b_matrix)


def family_of_images(op: SLinearOperator, v: SFamily) -> SFamily:
    """The image family built from the operator's action alone.

    Row i of v's matrix is the superposition of v against the i-th coordinate
    coefficient system; applying L to every row gives the rows of the image.
    """
    require_same_basis(op.basis_src, v.basis_value, "family_of_images")
    rows = op._dual_action @ v.matrix.T
    return SFamily(v.basis_index, op.basis_dst, rows.T)


def pointwise_image(
    transform: DistributionMap,
    v: SFamily,
    basis_dst: BasisConfig,
    max_workers: int | None = None,
) -> SFamily:
    """Image of v under an arbitrary operator, classified by sampling.

    The operator need not be linear. The result is the family p -> transform(v_p)
    when it is of class S at the configured resolution.

    Raises:
        NotSchwartzAtResolution: the image family is not of class S
    """

    def sampler(point: npt.NDArray[np.float64]) -> TemperedDistribution:
        return transform(member(v, point))

    return family_from_samples(v.basis_index, basis_dst, sampler, max_workers=max_workers)


def generated_family(
    b_matrix: npt.ArrayLike,
    basis_index: BasisConfig,
    basis_value: BasisConfig | None = None,
) -> SFamily:
    """The family B^v generated by B : S_value -> S_index, with (B^v)^ = B."""
    return SFamily(basis_index, basis_value or basis_index, np.asarray(b_matrix))


def superposition_operator(w: SFamily) -> SLinearOperator:
    """L(a) = superposition of w against a, i.e. the transpose of w^."""
    return SLinearOperator(w.basis_index, w.basis_value, w.matrix)


def operator_from_dirac_image(op: SLinearOperator) -> ComplexArray:
    """Matrix of the family L(delta): L is recovered as its transpose."""
    return family_of_images(op, dirac_family(op.basis_src)).matrix


def compose(outer: SLinearOperator, inner: SLinearOperator) -> SLinearOperator:
    """outer after inner; the B matrices multiply in reverse order."""
    require_same_basis(inner.basis_dst, outer.basis_src, "compose")
    return SLinearOperator(inner.basis_src, outer.basis_dst, inner.b_matrix @ outer.b_matrix)


def identity_operator(basis: BasisConfig) -> SLinearOperator:
    return SLinearOperator(basis, basis, np.eye(basis.size, dtype=np.complex128))


def derivative_operator(basis: BasisConfig, axis: int = 0) -> SLinearOperator:
    """Distributional derivative u -> du/dx_axis, u'(phi) = -u(phi')."""
    return SLinearOperator(basis, basis, -hermite_basis(basis).derivative_matrix(axis))


def position_operator(basis: BasisConfig, axis: int = 0) -> SLinearOperator:
    """Multiplication by the coordinate x_axis, (x u)(phi) = u(x phi)."""
    return SLinearOperator(basis, basis, hermite_basis(basis).position_matrix(axis))


def fourier_operator(basis: BasisConfig) -> SLinearOperator:
    """Unitary Fourier transform, F phi(p) = (2 pi)^(-n/2) int phi(x) exp(-i p.x) dx.

    Hermite functions are eigenfunctions with eigenvalue (-i)^|alpha|.
    """
    degrees = hermite_basis(basis).multi_indices.sum(axis=1)
    return SLinearOperator(basis, basis, np.diag((-1j) ** degrees))


def differential_operator(
    basis: BasisConfig, coefficients: Mapping[Sequence[int] | int, complex]
) -> SLinearOperator:
    """Constant-coefficient operator sum_i c_i d^i on S'_n."""
    hb = hermite_basis(basis)
    b = np.zeros((basis.size, basis.size), dtype=np.complex128)
    for index, coefficient in coefficients.items():
        orders = (index,) if isinstance(index, int) else tuple(index)
        if len(orders) != basis.dim or any(k < 0 for k in orders):
            raise BasisMismatchError(
                f"Derivative multi-index {orders} invalid for dimension {basis.dim}",
                expected=basis.dim,
                actual=orders,
            )
        term = np.eye(basis.size, dtype=np.complex128)
        for axis, count in enumerate(orders):
            for _ in range(count):
                term = term @ hb.derivative_matrix(axis)
        b += coefficient * (-1) ** sum(orders) * term
    return SLinearOperator(basis, basis, b)


def harmonic_oscillator_operator(basis: BasisConfig) -> SLinearOperator:
    """-1/2 Laplacian + 1/2 |x|^2; h_alpha has eigenvalue |alpha| + n/2 below the band."""
    hb = hermite_basis(basis)
    b = np.zeros((basis.size, basis.size), dtype=np.complex128)
    for axis in range(basis.dim):
        d = hb.derivative_matrix(axis)
        x = hb.position_matrix(axis)
        b += -0.5 * (d @ d) + 0.5 * (x @ x)
    return SLinearOperator(basis, basis, b)
