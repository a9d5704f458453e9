"""Numerical verification of the S-linearity identities.

Each check evaluates both sides of an identity on canonical and seeded random
instances and reports the largest scaled discrepancy against a tolerance.
Tolerances come in three tiers: 0 for identities that reduce to the same
floating-point expression, 1e-12 for identities that reassociate products,
and 1e-8 (or the quadrature bound) for identities that cross quadrature or a
linear solve.
"""

from __future__ import annotations

import math
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

if sys.version_info >= (3, 11):
    from typing import Self
else:
    from typing_extensions import Self

import numpy as np
import numpy.typing as npt
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import BasisConfig
from .distribution import (
    TemperedDistribution,
    TestFunction,
    dirac_at,
    dist_add,
    dist_scale,
    embed_function,
    evaluate,
    hermite_function,
    pair,
)
from .errors import IllConditionedBasis, NotSchwartzAtResolution
from .family import (
    SFamily,
    dirac_derivative_family,
    dirac_family,
    family_from_samples,
    family_product,
    member,
    superpose,
)
from .hermite import ComplexArray, gauss_hermite, hermite_basis
from .operator import (
    SLinearOperator,
    apply,
    derivative_operator,
    fourier_operator,
    generated_family,
    harmonic_oscillator_operator,
    identity_operator,
    image_family,
    operator_from_dirac_image,
    pointwise_image,
    transpose_of,
)

logger = structlog.get_logger()

EXACT = 0.0
REASSOCIATION_TOL = 1e-12
POINTWISE_TOL = 1e-10
SOLVE_TOL = 1e-8
CONDITION_BOUND = 1e8

S_LINEARITY_TRIALS = 50
RANDOM_TRIALS = 20
POINTWISE_SAMPLES = 10
MAX_EXPONENT = 700.0

# Statement under test, per check; parametrized checks such as
# additivity[fourier] share the entry of their base name.
ANCHORS: dict[str, str] = {
    "hermite_orthonormality": "Hermite functions are orthonormal under quadrature",
    "quadrature_exactness": "Gauss-Hermite rule is exact up to degree 2Q-1",
    "s_linearity": "S-linearity: L(∫ a v) = ∫ a L(v)",
    "additivity": "S-linear operators are linear: L(b u + c w) = b L(u) + c L(w)",
    "dirac_expansion": "Dirac expansion: u = ∫ u δ",
    "derivative_formula": "Derivative as superposition: u' = ∫ u δ'",
    "transpose_lemma": "Transpose image: tB(v) = ∫ v B^∨",
    "characterization_roundtrip": "Characterization: L = t(L(δ)^)",
    "superposition_composition": "Superposition product: (∫ v w)^ = v^ ∘ w^",
    "superposition_pointwise": "Superposition product, pointwise: (∫ v w)_p = ∫ v_p w",
    "hull_duality": "Weak transpose on the hull of a basis: <u, T(h)> = <L(u), h>",
    "dirac_image_formula": "Dirac image formula: L(u) = ∫ u L(δ)",
    "pointwise_image": "Image family: L(v)_p = L(v_p) is of class S",
    "schwartz_membership": "Schwartz families: p -> v_p(φ) lies in S_k",
}


def anchor_for(name: str) -> str:
    """Statement tested by the check called name."""
    return ANCHORS[name.partition("[")[0]]


class CheckResult(BaseModel):
    """Outcome of one identity check."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    name: str
    paper_anchor: str
    max_abs_error: float = Field(ge=0.0)
    tolerance: float = Field(ge=0.0)
    passed: bool
    trials: int = Field(ge=0)
    seed: int
    detail: str | None = None

    @model_validator(mode="after")
    def _passed_matches_error(self) -> Self:
        if self.passed != (self.max_abs_error <= self.tolerance):
            raise ValueError("passed must equal max_abs_error <= tolerance")
        return self


class VerificationReport(BaseModel):
    """All check results for one basis configuration."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    config: BasisConfig
    results: list[CheckResult]
    overall: bool

    @model_validator(mode="after")
    def _overall_matches_results(self) -> Self:
        if self.overall != all(r.passed for r in self.results):
            raise ValueError("overall must be true exactly when every check passed")
        return self

    @classmethod
    def from_results(cls, config: BasisConfig, results: Sequence[CheckResult]) -> Self:
        return cls(config=config, results=list(results), overall=all(r.passed for r in results))


def _result(name: str, error: float, tolerance: float, trials: int, seed: int) -> CheckResult:
    if math.isnan(error):
        error = math.inf
    result = CheckResult(
        name=name,
        paper_anchor=anchor_for(name),
        max_abs_error=error,
        tolerance=tolerance,
        passed=error <= tolerance,
        trials=trials,
        seed=seed,
    )
    if result.passed:
        logger.info("Check passed", check=name, error=error, tolerance=tolerance, trials=trials)
    else:
        logger.warning("Check failed", check=name, error=error, tolerance=tolerance, trials=trials)
    return result


def scaled_error(lhs: npt.ArrayLike, rhs: npt.ArrayLike) -> float:
    """max |lhs - rhs| / max(1, max |lhs|, max |rhs|)."""
    a = np.asarray(lhs)
    b = np.asarray(rhs)
    if a.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) / scale


# Random instances: standard complex Gaussian entries.


def random_matrix(rng: np.random.Generator, rows: int, cols: int) -> ComplexArray:
    real = rng.standard_normal((rows, cols))
    imag = rng.standard_normal((rows, cols))
    return (real + 1j * imag) / math.sqrt(2.0)


def random_scalar(rng: np.random.Generator) -> complex:
    return complex(random_matrix(rng, 1, 1)[0, 0])


def random_distribution(basis: BasisConfig, rng: np.random.Generator) -> TemperedDistribution:
    return TemperedDistribution(basis, random_matrix(rng, basis.size, 1)[:, 0])


def random_test_function(basis: BasisConfig, rng: np.random.Generator) -> TestFunction:
    return TestFunction(basis, random_matrix(rng, basis.size, 1)[:, 0])


def random_family(
    basis_index: BasisConfig, basis_value: BasisConfig, rng: np.random.Generator
) -> SFamily:
    return SFamily(basis_index, basis_value, random_matrix(rng, basis_index.size, basis_value.size))


def random_operator(
    basis_src: BasisConfig, basis_dst: BasisConfig, rng: np.random.Generator
) -> SLinearOperator:
    return transpose_of(random_matrix(rng, basis_src.size, basis_dst.size), basis_src, basis_dst)


def perturbed_identity_family(basis: BasisConfig, rng: np.random.Generator) -> SFamily:
    """A well-conditioned family close to the Dirac family."""
    perturbation = 0.1 / math.sqrt(basis.size) * random_matrix(rng, basis.size, basis.size)
    return SFamily(basis, basis, np.eye(basis.size) + perturbation)


def sample_nodes(
    basis: BasisConfig, rng: np.random.Generator, count: int
) -> npt.NDArray[np.float64]:
    """Distinct quadrature nodes of the basis, chosen at random."""
    nodes = hermite_basis(basis).nodes
    chosen = rng.choice(len(nodes), size=min(count, len(nodes)), replace=False)
    return nodes[np.sort(chosen)]


# Identity checks.


def check_s_linearity(
    cases: Sequence[tuple[SLinearOperator, SFamily, TemperedDistribution]],
    *,
    tolerance: float = REASSOCIATION_TOL,
    seed: int = 0,
) -> CheckResult:
    """L(superpose(a, v)) = superpose(a, L(v))."""
    error = 0.0
    for op, v, a in cases:
        lhs = apply(op, superpose(a, v)).duals
        rhs = superpose(a, image_family(op, v)).duals
        error = max(error, scaled_error(lhs, rhs))
    return _result("s_linearity", error, tolerance, len(cases), seed)


def check_additivity(
    op: SLinearOperator,
    cases: Sequence[tuple[complex, TemperedDistribution, complex, TemperedDistribution]],
    *,
    label: str = "",
    tolerance: float = REASSOCIATION_TOL,
    seed: int = 0,
) -> CheckResult:
    """L(b u + c w) = b L(u) + c L(w)."""
    error = 0.0
    for b, u, c, w in cases:
        lhs = apply(op, dist_add(dist_scale(b, u), dist_scale(c, w))).duals
        rhs = dist_add(dist_scale(b, apply(op, u)), dist_scale(c, apply(op, w))).duals
        error = max(error, scaled_error(lhs, rhs))
    name = f"additivity[{label}]" if label else "additivity"
    return _result(name, error, tolerance, len(cases), seed)


def check_dirac_expansion(
    distributions: Sequence[TemperedDistribution], *, seed: int = 0
) -> CheckResult:
    """u = superpose(u, delta), bit for bit."""
    error = 0.0
    for u in distributions:
        expanded = superpose(u, dirac_family(u.basis)).duals
        error = max(error, scaled_error(expanded, u.duals))
    return _result("dirac_expansion", error, EXACT, len(distributions), seed)


def check_derivative_formula(
    distributions: Sequence[TemperedDistribution],
    *,
    axis: int = 0,
    tolerance: float = REASSOCIATION_TOL,
    seed: int = 0,
) -> CheckResult:
    """u' = superpose(u, delta'), compared below the truncation band."""
    error = 0.0
    for u in distributions:
        orders = [0] * u.basis.dim
        orders[axis] = 1
        via_family = superpose(u, dirac_derivative_family(u.basis, orders)).duals
        via_operator = apply(derivative_operator(u.basis, axis), u).duals
        resolved = hermite_basis(u.basis).degree_mask(u.basis.order - 2)
        error = max(error, scaled_error(via_family[resolved], via_operator[resolved]))
    return _result("derivative_formula", error, tolerance, len(distributions), seed)


def check_transpose_lemma(
    cases: Sequence[tuple[npt.ArrayLike, SFamily]], *, seed: int = 0
) -> CheckResult:
    """t(B)(v) = v . B^v, with B acting from S_n to S_n."""
    error = 0.0
    for b_matrix, v in cases:
        basis = v.basis_value
        lhs = image_family(transpose_of(b_matrix, basis), v).matrix
        rhs = family_product(v, generated_family(b_matrix, basis)).matrix
        error = max(error, scaled_error(lhs, rhs))
    return _result("transpose_lemma", error, EXACT, len(cases), seed)


def check_characterization_roundtrip(
    operators: Sequence[SLinearOperator], *, seed: int = 0
) -> CheckResult:
    """L = t(L(delta)^), recovered from the operator's action."""
    error = 0.0
    for op in operators:
        rebuilt = transpose_of(operator_from_dirac_image(op), op.basis_src, op.basis_dst)
        error = max(error, scaled_error(rebuilt.b_matrix, op.b_matrix))
    return _result("characterization_roundtrip", error, EXACT, len(operators), seed)


def check_superposition_composition(
    cases: Sequence[tuple[SFamily, SFamily]], *, seed: int = 0
) -> CheckResult:
    """(v . w)^ = v^ w^ as matrices."""
    error = 0.0
    for v, w in cases:
        error = max(error, scaled_error(family_product(v, w).matrix, v.matrix @ w.matrix))
    return _result("superposition_composition", error, EXACT, len(cases), seed)


def check_superposition_pointwise(
    cases: Sequence[tuple[SFamily, SFamily]],
    rng: np.random.Generator,
    *,
    samples: int = POINTWISE_SAMPLES,
    tolerance: float = POINTWISE_TOL,
    seed: int = 0,
) -> CheckResult:
    """(v . w)_p = superpose(v_p, w) at sampled quadrature nodes."""
    error = 0.0
    trials = 0
    for v, w in cases:
        product = family_product(v, w)
        for point in sample_nodes(v.basis_index, rng, samples):
            lhs = member(product, point).duals
            rhs = superpose(member(v, point), w).duals
            error = max(error, scaled_error(lhs, rhs))
            trials += 1
    return _result("superposition_pointwise", error, tolerance, trials, seed)


def hull_transpose(op: SLinearOperator, v: SFamily, h: TestFunction) -> TestFunction:
    """T(h) = v^-1(L(v)(h)), the weak transpose of L on the hull of the basis v.

    Raises:
        IllConditionedBasis: v's matrix is not numerically invertible
    """
    condition = float(np.linalg.cond(v.matrix))
    if not condition <= CONDITION_BOUND:
        raise IllConditionedBasis(condition, CONDITION_BOUND)
    image = image_family(op, v).matrix @ h.coeffs
    return TestFunction(v.basis_value, np.linalg.solve(v.matrix, image))


def check_hull_duality(
    cases: Sequence[tuple[SLinearOperator, SFamily, TestFunction]],
    rng: np.random.Generator,
    *,
    samples: int = POINTWISE_SAMPLES,
    tolerance: float = SOLVE_TOL,
    seed: int = 0,
) -> CheckResult:
    """<v_q, T(h)> = <L(v_q), h> at sampled quadrature nodes q."""
    error = 0.0
    trials = 0
    for op, v, h in cases:
        t_h = hull_transpose(op, v, h)
        for point in sample_nodes(v.basis_index, rng, samples):
            v_q = member(v, point)
            lhs = pair(v_q, t_h)
            rhs = pair(apply(op, v_q), h)
            error = max(error, scaled_error(lhs, rhs))
            trials += 1
    return _result("hull_duality", error, tolerance, trials, seed)


def check_dirac_image_formula(
    cases: Sequence[tuple[SLinearOperator, TemperedDistribution]],
    *,
    tolerance: float = REASSOCIATION_TOL,
    seed: int = 0,
) -> CheckResult:
    """L(u) = superpose(u, L(delta))."""
    error = 0.0
    for op, u in cases:
        dirac_image = image_family(op, dirac_family(op.basis_src))
        error = max(error, scaled_error(apply(op, u).duals, superpose(u, dirac_image).duals))
    return _result("dirac_image_formula", error, tolerance, len(cases), seed)


def check_pointwise_image(
    cases: Sequence[tuple[SLinearOperator, SFamily]],
    *,
    tolerance: float = SOLVE_TOL,
    seed: int = 0,
) -> CheckResult:
    """The sampled family (L(v_p))_p is of class S and equals image_family(L, v)."""
    error = 0.0
    for op, v in cases:

        def transform(u: TemperedDistribution, op: SLinearOperator = op) -> TemperedDistribution:
            return apply(op, u)

        sampled = pointwise_image(transform, v, op.basis_dst).matrix
        error = max(error, scaled_error(sampled, image_family(op, v).matrix))
    return _result("pointwise_image", error, tolerance, len(cases), seed)


def growth_sampler(basis: BasisConfig) -> Callable[[npt.NDArray[np.float64]], TemperedDistribution]:
    """p -> exp(|p|^2) delta_p, a family that is not of class S."""

    def sampler(point: npt.NDArray[np.float64]) -> TemperedDistribution:
        growth = math.exp(min(float(np.sum(point**2)), MAX_EXPONENT))
        return dist_scale(growth, dirac_at(basis, point))

    return sampler


def check_schwartz_membership(
    basis: BasisConfig, *, tolerance: float = SOLVE_TOL, seed: int = 0
) -> CheckResult:
    """The Dirac sampler is accepted as the identity; the growth sampler is rejected."""
    dirac = family_from_samples(basis, basis, lambda p: dirac_at(basis, p))
    error = scaled_error(dirac.matrix, np.eye(basis.size))
    try:
        family_from_samples(basis, basis, growth_sampler(basis))
    except NotSchwartzAtResolution:
        pass
    else:
        error = math.inf
    return _result("schwartz_membership", error, tolerance, 2, seed)


def check_hermite_orthonormality(
    basis: BasisConfig, *, tolerance: float = POINTWISE_TOL, seed: int = 0
) -> CheckResult:
    hb = hermite_basis(basis)
    gram = hb.node_values.T @ (hb.plain_weights[:, None] * hb.node_values)
    error = float(np.max(np.abs(gram - np.eye(basis.size))))
    return _result("hermite_orthonormality", error, tolerance, basis.size, seed)


def quadrature_moment_errors(count: int) -> npt.NDArray[np.float64]:
    """Relative error of the count-node rule on x^k exp(-x^2), k = 0..2*count-1.

    Even moments are compared with Gamma((k+1)/2); odd moments, which vanish,
    are scaled by the sum of absolute terms. Terms are formed in log space so
    that high degrees do not overflow.
    """

    nodes, weights, plain_weights = gauss_hermite(count)
    log_w = np.log(plain_weights) - nodes**2
    with np.errstate(divide="ignore"):
        log_x = np.log(np.abs(nodes))
    errors = np.empty(2 * count, dtype=np.float64)
    errors[0] = abs(float(np.sum(weights)) / math.sqrt(math.pi) - 1.0)
    for k in range(1, 2 * count):
        log_terms = log_w + k * log_x
        if k % 2 == 0:
            ratio = np.sum(np.exp(log_terms - math.lgamma((k + 1) / 2)))
            errors[k] = abs(float(ratio) - 1.0)
        else:
            shift = float(np.max(log_terms))
            if not math.isfinite(shift):
                errors[k] = 0.0
                continue
            magnitudes = np.exp(log_terms - shift)
            errors[k] = abs(float(np.sum(np.sign(nodes) * magnitudes))) / float(
                np.sum(magnitudes)
            )
    return errors


def check_quadrature_exactness(
    basis: BasisConfig, *, tolerance: float = POINTWISE_TOL, seed: int = 0
) -> CheckResult:
    errors = quadrature_moment_errors(basis.quad_order)
    return _result("quadrature_exactness", float(np.max(errors)), tolerance, len(errors), seed)


# Suite.


def _canonical_distributions(basis: BasisConfig) -> list[TemperedDistribution]:
    """embed(h_0), embed(h_3) and delta_0 (h_3 along the first axis)."""
    result = []
    for degree in (0, 3):
        alpha = [0] * basis.dim
        alpha[0] = min(degree, basis.order)
        phi = hermite_function(basis, alpha)
        result.append(embed_function(basis, lambda *x, phi=phi: evaluate(phi, x)))
    result.append(dirac_at(basis, np.zeros(basis.dim)))
    return result


def _canonical_operators(basis: BasisConfig) -> list[SLinearOperator]:
    return [
        identity_operator(basis),
        derivative_operator(basis),
        fourier_operator(basis),
        harmonic_oscillator_operator(basis),
    ]


SuiteEntry = tuple[str, Callable[[np.random.Generator, int], CheckResult]]


def _suite(config: BasisConfig, trials: int, s_trials: int, samples: int) -> list[SuiteEntry]:
    basis = config

    def s_linearity(rng: np.random.Generator, seed: int) -> CheckResult:
        cases = [
            (
                random_operator(basis, basis, rng),
                random_family(basis, basis, rng),
                random_distribution(basis, rng),
            )
            for _ in range(s_trials)
        ]
        return check_s_linearity(cases, seed=seed)

    def additivity(label: str) -> Callable[[np.random.Generator, int], CheckResult]:
        def run(rng: np.random.Generator, seed: int) -> CheckResult:
            ops = {
                "derivative": lambda: derivative_operator(basis),
                "fourier": lambda: fourier_operator(basis),
                "random": lambda: random_operator(basis, basis, rng),
            }
            op = ops[label]()
            cases = [
                (
                    random_scalar(rng),
                    random_distribution(basis, rng),
                    random_scalar(rng),
                    random_distribution(basis, rng),
                )
                for _ in range(trials)
            ]
            return check_additivity(op, cases, label=label, seed=seed)

        return run

    def dirac_expansion(rng: np.random.Generator, seed: int) -> CheckResult:
        cases = _canonical_distributions(basis)
        cases += [random_distribution(basis, rng) for _ in range(trials)]
        return check_dirac_expansion(cases, seed=seed)

    def derivative_formula(rng: np.random.Generator, seed: int) -> CheckResult:
        cases = _canonical_distributions(basis)
        cases += [random_distribution(basis, rng) for _ in range(trials)]
        return check_derivative_formula(cases, seed=seed)

    def transpose_lemma(rng: np.random.Generator, seed: int) -> CheckResult:
        minus_d = -hermite_basis(basis).derivative_matrix(0)
        cases: list[tuple[npt.ArrayLike, SFamily]] = [
            (np.eye(basis.size), random_family(basis, basis, rng)),
            (minus_d, dirac_family(basis)),
        ]
        cases += [
            (random_matrix(rng, basis.size, basis.size), random_family(basis, basis, rng))
            for _ in range(trials)
        ]
        return check_transpose_lemma(cases, seed=seed)

    def characterization(rng: np.random.Generator, seed: int) -> CheckResult:
        ops = _canonical_operators(basis)
        ops += [random_operator(basis, basis, rng) for _ in range(trials)]
        return check_characterization_roundtrip(ops, seed=seed)

    def composition_pairs(rng: np.random.Generator) -> list[tuple[SFamily, SFamily]]:
        pairs = [
            (random_family(basis, basis, rng), dirac_family(basis)),
            (SFamily(basis, basis, np.zeros((basis.size, basis.size))), dirac_family(basis)),
        ]
        pairs += [
            (random_family(basis, basis, rng), random_family(basis, basis, rng))
            for _ in range(trials)
        ]
        return pairs

    def composition(rng: np.random.Generator, seed: int) -> CheckResult:
        return check_superposition_composition(composition_pairs(rng), seed=seed)

    def composition_pointwise(rng: np.random.Generator, seed: int) -> CheckResult:
        return check_superposition_pointwise(
            composition_pairs(rng), rng, samples=samples, seed=seed
        )

    def hull_duality(rng: np.random.Generator, seed: int) -> CheckResult:
        derivative = derivative_operator(basis)
        cases = [
            (derivative, dirac_family(basis), random_test_function(basis, rng)),
            (
                identity_operator(basis),
                perturbed_identity_family(basis, rng),
                random_test_function(basis, rng),
            ),
            (derivative, perturbed_identity_family(basis, rng), random_test_function(basis, rng)),
        ]
        return check_hull_duality(cases, rng, samples=samples, seed=seed)

    def dirac_image(rng: np.random.Generator, seed: int) -> CheckResult:
        ops = _canonical_operators(basis) + [random_operator(basis, basis, rng)]
        per_operator = max(1, trials // 4)
        cases = [(op, random_distribution(basis, rng)) for op in ops for _ in range(per_operator)]
        return check_dirac_image_formula(cases, seed=seed)

    def pointwise(rng: np.random.Generator, seed: int) -> CheckResult:
        derivative = derivative_operator(basis)
        cases = [
            (derivative, dirac_family(basis)),
            (fourier_operator(basis), dirac_family(basis)),
            (harmonic_oscillator_operator(basis), dirac_derivative_family(basis, [0] * basis.dim)),
        ]
        return check_pointwise_image(cases, seed=seed)

    def orthonormality(rng: np.random.Generator, seed: int) -> CheckResult:
        return check_hermite_orthonormality(basis, seed=seed)

    def quadrature(rng: np.random.Generator, seed: int) -> CheckResult:
        return check_quadrature_exactness(basis, seed=seed)

    def membership(rng: np.random.Generator, seed: int) -> CheckResult:
        return check_schwartz_membership(basis, seed=seed)

    return [
        ("hermite_orthonormality", orthonormality),
        ("quadrature_exactness", quadrature),
        ("s_linearity", s_linearity),
        ("additivity[derivative]", additivity("derivative")),
        ("additivity[fourier]", additivity("fourier")),
        ("additivity[random]", additivity("random")),
        ("dirac_expansion", dirac_expansion),
        ("derivative_formula", derivative_formula),
        ("transpose_lemma", transpose_lemma),
        ("characterization_roundtrip", characterization),
        ("superposition_composition", composition),
        ("superposition_pointwise", composition_pointwise),
        ("hull_duality", hull_duality),
        ("dirac_image_formula", dirac_image),
        ("pointwise_image", pointwise),
        ("schwartz_membership", membership),
    ]


def run_suite(
    config: BasisConfig,
    seed: int = 0,
    *,
    trials: int = RANDOM_TRIALS,
    s_linearity_trials: int = S_LINEARITY_TRIALS,
    samples: int = POINTWISE_SAMPLES,
    workers: int = 1,
) -> VerificationReport:
    """Run every check; the report depends only on (config, seed, trial counts).

    Check i draws from its own generator seeded with seed + i, so the worker
    count does not change the results. A check that raises is reported as
    failed and does not stop the others.
    """
    entries = _suite(config, trials, s_linearity_trials, samples)

    def run_entry(index: int) -> CheckResult:
        name, run = entries[index]
        check_seed = seed + index
        rng = np.random.default_rng(check_seed)
        try:
            return run(rng, check_seed)
        except Exception as e:
            logger.error("Check raised", check=name, error=str(e))
            return CheckResult(
                name=name,
                paper_anchor=anchor_for(name),
                max_abs_error=math.inf,
                tolerance=0.0,
                passed=False,
                trials=0,
                seed=check_seed,
                detail=f"{type(e).__name__}: {e}",
            )

    logger.info(
        "Running verification suite",
        dim=config.dim,
        order=config.order,
        quad_order=config.quad_order,
        seed=seed,
        checks=len(entries),
        workers=workers,
    )
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_entry, range(len(entries))))
    else:
        results = [run_entry(i) for i in range(len(entries))]

    report = VerificationReport.from_results(config, results)
    logger.info(
        "Verification suite complete",
        overall=report.overall,
        failed=[r.name for r in results if not r.passed],
    )
    return report
