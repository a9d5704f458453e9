"""JSON and CSV encodings of coefficient objects and verification reports.

Complex entries are written as [re, im] pairs. Decoding rebuilds the basis
from dim and order alone; quadrature and tolerances take their defaults.
"""

from __future__ import annotations

import csv
import io
from typing import Annotated, Any, Literal

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from .config import BasisConfig, default_quad_order
from .distribution import TemperedDistribution, TestFunction
from .errors import ConfigurationError, InputError
from .family import SFamily
from .hermite import ComplexArray
from .operator import SLinearOperator
from .verify import VerificationReport

Pair = tuple[float, float]
Encodable = TestFunction | TemperedDistribution | SFamily | SLinearOperator

CSV_HEADER = ("name", "anchor", "error", "tol", "passed")


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CoefficientDocument(_Document):
    kind: Literal["test_function", "distribution"]
    dim: int = Field(ge=1)
    order: int = Field(ge=1)
    coeffs: list[Pair]


class FamilyDocument(_Document):
    kind: Literal["s_family"]
    index_dim: int = Field(ge=1)
    value_dim: int = Field(ge=1)
    order: int = Field(ge=1)
    matrix: list[list[Pair]]


class OperatorDocument(_Document):
    kind: Literal["s_linear_operator"]
    src_dim: int = Field(ge=1)
    dst_dim: int = Field(ge=1)
    order: int = Field(ge=1)
    b_matrix: list[list[Pair]]


Document = Annotated[
    CoefficientDocument | FamilyDocument | OperatorDocument, Field(discriminator="kind")
]
_documents: TypeAdapter[CoefficientDocument | FamilyDocument | OperatorDocument] = TypeAdapter(
    Document
)


def format_number(value: float) -> str:
    """Scalar formatting used on every text output."""
    return f"{value:.17g}"


def _pairs(values: npt.ArrayLike) -> Any:
    array = np.asarray(values, dtype=np.complex128)
    return np.stack([array.real, array.imag], axis=-1).tolist()


def _complex(pairs: list[Pair] | list[list[Pair]]) -> ComplexArray:
    try:
        array = np.asarray(pairs, dtype=np.float64)
    except ValueError as e:
        raise InputError("Encoded matrix rows differ in length") from e
    if array.size == 0:
        raise InputError("Encoded coefficients are empty")
    return array[..., 0] + 1j * array[..., 1]


def _basis(dim: int, order: int) -> BasisConfig:
    return BasisConfig(dim=dim, order=order, quad_order=default_quad_order(order))


def _shared_order(first: BasisConfig, second: BasisConfig, what: str) -> int:
    if first.order != second.order:
        raise ConfigurationError(
            f"{what} spans orders {first.order} and {second.order}; "
            "the encoding carries a single order"
        )
    return first.order


def to_document(obj: Encodable) -> CoefficientDocument | FamilyDocument | OperatorDocument:
    if isinstance(obj, TestFunction):
        return CoefficientDocument(
            kind="test_function",
            dim=obj.basis.dim,
            order=obj.basis.order,
            coeffs=_pairs(obj.coeffs),
        )
    if isinstance(obj, TemperedDistribution):
        return CoefficientDocument(
            kind="distribution",
            dim=obj.basis.dim,
            order=obj.basis.order,
            coeffs=_pairs(obj.duals),
        )
    if isinstance(obj, SFamily):
        return FamilyDocument(
            kind="s_family",
            index_dim=obj.index_dim,
            value_dim=obj.value_dim,
            order=_shared_order(obj.basis_index, obj.basis_value, "Family"),
            matrix=_pairs(obj.matrix),
        )
    if isinstance(obj, SLinearOperator):
        return OperatorDocument(
            kind="s_linear_operator",
            src_dim=obj.src_dim,
            dst_dim=obj.dst_dim,
            order=_shared_order(obj.basis_src, obj.basis_dst, "Operator"),
            b_matrix=_pairs(obj.b_matrix),
        )
    raise TypeError(f"Cannot encode {type(obj).__name__}")


def from_document(doc: CoefficientDocument | FamilyDocument | OperatorDocument) -> Encodable:
    if isinstance(doc, CoefficientDocument):
        basis = _basis(doc.dim, doc.order)
        values = _complex(doc.coeffs)
        if doc.kind == "test_function":
            return TestFunction(basis, values)
        return TemperedDistribution(basis, values)
    if isinstance(doc, FamilyDocument):
        return SFamily(
            _basis(doc.index_dim, doc.order),
            _basis(doc.value_dim, doc.order),
            _complex(doc.matrix),
        )
    return SLinearOperator(
        _basis(doc.src_dim, doc.order),
        _basis(doc.dst_dim, doc.order),
        _complex(doc.b_matrix),
    )


def to_json(obj: Encodable) -> str:
    return to_document(obj).model_dump_json()


def from_json(text: str | bytes) -> Encodable:
    """Decode any of the four documents, dispatching on "kind".

    Raises:
        InputError: malformed document
        BasisMismatchError: coefficient counts do not fit dim and order
    """
    try:
        doc = _documents.validate_json(text)
    except ValidationError as e:
        raise InputError(f"Invalid document: {e.error_count()} validation error(s)") from e
    return from_document(doc)


def report_to_json(report: VerificationReport) -> str:
    return report.model_dump_json(indent=2)


def report_to_csv(report: VerificationReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for result in report.results:
        writer.writerow(
            [
                result.name,
                result.paper_anchor,
                format_number(result.max_abs_error),
                format_number(result.tolerance),
                "true" if result.passed else "false",
            ]
        )
    return buffer.getvalue()


class CoefficientRow(BaseModel):
    index: list[int]
    re: float
    im: float
    operator_re: float | None = None
    operator_im: float | None = None


class CoefficientListing(BaseModel):
    """Labelled coefficients printed by the expand and deriv commands."""

    id: str
    dim: int
    order: int
    derivative_order: int | None = None
    coefficients: list[CoefficientRow]
    max_abs_difference: float | None = None


def coefficient_rows(
    multi_indices: npt.NDArray[np.int64],
    values: npt.ArrayLike,
    cross_check: npt.ArrayLike | None = None,
) -> list[CoefficientRow]:
    primary = np.asarray(values, dtype=np.complex128)
    other = None if cross_check is None else np.asarray(cross_check, dtype=np.complex128)
    rows = []
    for i, alpha in enumerate(multi_indices):
        row = CoefficientRow(index=alpha.tolist(), re=primary[i].real, im=primary[i].imag)
        if other is not None:
            row.operator_re = float(other[i].real)
            row.operator_im = float(other[i].imag)
        rows.append(row)
    return rows


def listing_to_json(listing: CoefficientListing) -> str:
    return listing.model_dump_json(indent=2, exclude_none=True)


def listing_to_csv(listing: CoefficientListing) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    cross_checked = listing.max_abs_difference is not None
    header = ["index", "re", "im"]
    if cross_checked:
        header += ["operator_re", "operator_im"]
    writer.writerow(header)
    for row in listing.coefficients:
        line = [":".join(str(a) for a in row.index), format_number(row.re), format_number(row.im)]
        if row.operator_re is not None and row.operator_im is not None:
            line += [format_number(row.operator_re), format_number(row.operator_im)]
        writer.writerow(line)
    return buffer.getvalue()


class PairedValue(BaseModel):
    re: float
    im: float

    @classmethod
    def of(cls, value: complex) -> PairedValue:
        return cls(re=value.real, im=value.imag)


class FamilyEvaluation(BaseModel):
    """v_p(phi) computed through the member and through the applied family."""

    family: str
    point: list[float]
    function: str
    member_pairing: PairedValue
    applied_value: PairedValue
    difference: float


def evaluation_to_json(evaluation: FamilyEvaluation) -> str:
    return evaluation.model_dump_json(indent=2)


def evaluation_to_csv(evaluation: FamilyEvaluation) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["path", "re", "im"])
    for path, value in (
        ("member_pairing", evaluation.member_pairing),
        ("applied_value", evaluation.applied_value),
    ):
        writer.writerow([path, format_number(value.re), format_number(value.im)])
    writer.writerow(["difference", format_number(evaluation.difference), ""])
    return buffer.getvalue()
