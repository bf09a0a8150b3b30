# thin_type.py
from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Optional, Sequence

from exact_arith import (
    AlgebraicReal, ExactArithError, FieldElement, NumberFieldElement,
    build_number_field, mat_mul,
)
from iis_core import SymmetricParams, build_special_symmetric, is_special, params_of
from rauzy_engine import InductionTrace, run_induction
from symmetry_cases import (
    CaseCounts, CaseLabel, DegenerateCase, Matrix, TransitionMatrix,
    case_counts, classify_case, normalize_params, predict_next, symmetrize,
)

PERIOD_ITERATIONS = 6

_M: Matrix = (
    (3, 1, -1, -4),
    (-1, 2, 0, 0),
    (-2, -2, 1, 4),
    (3, 2, -1, -5),
)


def matrix_M() -> TransitionMatrix:
    return TransitionMatrix(_M, "M")


@lru_cache(maxsize=1)
def thin_lambda() -> AlgebraicReal:
    """The eigenvalue of M in (0, 1), a root of t^3 - 4t + 1."""
    return build_number_field(_M)


def _null_vector(rows: list[list[NumberFieldElement]]) -> list[NumberFieldElement]:
    a = [list(r) for r in rows]
    n = len(a)
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if not a[i][col].is_zero()), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and not a[i][col].is_zero():
                k = a[i][col]
                a[i] = [x - k * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ExactArithError(f"eigenspace has dimension {len(free)}, expected 1")
    f = free[0]
    gen = rows[0][0].generator
    v = [NumberFieldElement(gen, ()) for _ in range(n)]
    v[f] = NumberFieldElement(gen, (1,))
    for i, col in enumerate(pivots):
        v[col] = -a[i][f]
    return v


def eigen_residual(m: Matrix, v: Sequence[FieldElement], lam: FieldElement) -> tuple[FieldElement, ...]:
    return tuple(sum((coef * x for coef, x in zip(row, v)), Fraction(0)) - lam * vi for row, vi in zip(m, v))


@lru_cache(maxsize=1)
def thin_eigen_params() -> SymmetricParams:
    """Positive eigenvector of M for lambda, exact in Q(lambda), scaled to a + b + c = 1."""
    alpha = thin_lambda()
    lam = NumberFieldElement.gen(alpha)
    rows = [
        [NumberFieldElement(alpha, (m_ij,)) - (lam if i == j else 0) for j, m_ij in enumerate(row)]
        for i, row in enumerate(_M)
    ]
    v = _null_vector(rows)
    total = v[0] + v[1] + v[2]
    v = [x / total for x in v]
    if not all(x > 0 for x in v):
        raise ExactArithError("eigenvector of M is not positive")
    if any(not r.is_zero() for r in eigen_residual(_M, v, lam)):
        raise ExactArithError("eigen residual is not zero")
    return SymmetricParams.of(*v)


def _lambda_for(p: SymmetricParams) -> NumberFieldElement:
    for v in p.astuple():
        if isinstance(v, NumberFieldElement):
            return NumberFieldElement.gen(v.generator)
    return NumberFieldElement.gen(thin_lambda())


# -----------------------------
# Self-similarity
# -----------------------------
@dataclass(frozen=True)
class SelfSimilarityCheck:
    holds: bool
    detail: str
    trace: InductionTrace

    def __bool__(self) -> bool:
        return self.holds


def verify_self_similarity(p: SymmetricParams, iterations: int = PERIOD_ITERATIONS) -> SelfSimilarityCheck:
    """True iff exactly `iterations` ordinary right-side iterations give lambda * p."""
    trace = run_induction(build_special_symmetric(p), "right", iterations, "hole_only")
    if trace.outcome != "step_cap" or trace.ordinary_iterations != iterations:
        return SelfSimilarityCheck(False, f"run stopped early: {trace.outcome} {trace.detail or ''}".strip(), trace)
    if not is_special(trace.final):
        return SelfSimilarityCheck(False, "final system is not special symmetric", trace)
    lam = _lambda_for(p)
    got = params_of(trace.final)
    if got != p.scaled(lam):
        return SelfSimilarityCheck(False, "final params differ from lambda * params", trace)
    return SelfSimilarityCheck(True, f"{iterations} iterations scale the system by lambda", trace)


@dataclass(frozen=True)
class RouteLeg:
    label: CaseLabel
    counts: CaseCounts
    ordinary: int
    generalized: int
    params_after: Optional[SymmetricParams]


def case_route(p: SymmetricParams, rounds: int = 2) -> list[RouteLeg]:
    """Classify, symmetrize, repeat; one leg per round."""
    legs: list[RouteLeg] = []
    cur = normalize_params(p)
    for _ in range(rounds):
        label, _hole = classify_case(cur)
        out = symmetrize(build_special_symmetric(cur), attach_matrix=False)
        legs.append(
            RouteLeg(label, case_counts(label, cur), out.trace.ordinary_iterations,
                     out.generalized_iterations_used, out.params)
        )
        if out.params is None:
            break
        cur = out.params
    return legs


@dataclass(frozen=True)
class MatrixProductCheck:
    holds: bool
    product: Matrix
    factors: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.holds


def _normal_forms(m: Matrix) -> list[Matrix]:
    out = []
    for x in (m, (m[1], m[0], m[2], m[3])):
        out.append(x)
        out.append((x[0], x[1], x[2], tuple(p + q - r for p, q, r in zip(x[0], x[1], x[3]))))
    return out


def matrix_product_matches(factors: Sequence[Matrix], target: Matrix = _M) -> tuple[bool, Matrix]:
    """Product of factors (applied first to last) against target, up to the normalization swaps."""
    product = factors[0]
    for f in factors[1:]:
        product = mat_mul(f, product)
    product = tuple(tuple(row) for row in product)
    return target in _normal_forms(product), product


def verify_matrix_product() -> MatrixProductCheck:
    p = thin_eigen_params()
    first = predict_next(p)
    if first.matrix is None or first.params is None:
        raise DegenerateCase("thin example: first leg has no selected matrix")
    second = predict_next(first.params)
    if second.matrix is None:
        raise DegenerateCase("thin example: second leg has no selected matrix")
    holds, product = matrix_product_matches((first.matrix.entries, second.matrix.entries))
    return MatrixProductCheck(holds, product, (first.matrix.provenance, second.matrix.provenance))


# -----------------------------
# Scanner
# -----------------------------
StopReason = Literal["hole", "epsilon", "cap"]


@dataclass(frozen=True)
class ThinReport:
    depth: int
    # one entry per symmetrize round, initial support first
    support_lengths: tuple[FieldElement, ...]
    hole_found: bool
    self_similar_period: Optional[int]
    scale_factor: Optional[FieldElement]
    stop_reason: StopReason
    ordinary_iterations: int = 0
    rounds: tuple[str, ...] = field(default=())
    period_rounds: Optional[int] = None

    @property
    def period_supports(self) -> tuple[FieldElement, ...]:
        """Support lengths one self-similar period apart."""
        if self.period_rounds is None:
            return ()
        return self.support_lengths[:: self.period_rounds]

    @property
    def verdict(self) -> Literal["thin", "hole", "inconclusive"]:
        if self.self_similar_period is not None:
            return "thin"
        return "hole" if self.hole_found else "inconclusive"


def thin_scan(p: SymmetricParams, max_generalized: int = 12, epsilon=Fraction(0)) -> ThinReport:
    """Symmetrize round after round, watching support lengths and exact self-similarity."""
    cur = normalize_params(p)
    initial = cur.total
    round_supports: list[FieldElement] = [initial]
    history = [(cur.scaled(1 / initial), 0, 0, initial)]
    depth = ordinary = 0
    period, scale, period_rounds = None, None, None
    hole = False
    rounds: list[str] = []
    while True:
        if round_supports[-1] <= epsilon * initial:
            reason: StopReason = "epsilon"
            break
        if depth >= max_generalized:
            reason = "cap"
            break
        label, _ = classify_case(cur)
        out = symmetrize(build_special_symmetric(cur), attach_matrix=False)
        if out.result == "hole":
            hole, reason = True, "hole"
            break
        if out.result != "symmetric" or out.params is None:
            raise DegenerateCase(f"scan stopped on a degenerate state: {out.trace.detail}")
        depth += out.generalized_iterations_used
        ordinary += out.trace.ordinary_iterations
        rounds.append(str(label))
        cur = out.params
        round_supports.append(cur.total)
        unit = cur.scaled(1 / cur.total)
        if period is None:
            for earlier, at, at_round, support in history:
                if earlier == unit:
                    period, scale = ordinary - at, cur.total / support
                    period_rounds = len(rounds) - at_round
                    break
        history.append((unit, ordinary, len(rounds), cur.total))
    return ThinReport(
        depth, tuple(round_supports), hole, period, scale, reason, ordinary, tuple(rounds), period_rounds,
    )
