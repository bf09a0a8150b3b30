# symmetry_cases.py
from __future__ import annotations
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional, Sequence

from block_route import BlockRoute, DegenerateCase, block_route
from exact_arith import FieldElement, det_int
from iis_core import (
    IISystem, SymmetricParams, build_special_symmetric, coverage_gaps, params_of,
)
from rauzy_engine import (
    DEFAULT_MAX_STEPS, InductionError, InductionTrace, group_generalized, run_induction,
)

__all__ = [
    "DegenerateCase", "NoCandidate", "AmbiguousCandidates", "HoleExpected",
    "CaseLabel", "CaseCounts", "TransitionMatrix", "Prediction", "SymmetrizeOutcome",
    "SymmetrizationCheck", "normalize_params", "normalization_swaps", "critical_chain",
    "inequality_case", "classify_case", "case_quotients", "integral_quotients", "on_case_boundary",
    "case_counts", "case_matrices", "apply_matrix",
    "select_matrix", "predict_next", "symmetrize", "verify_symmetrization",
]

GENERALIZED_BOUND = 3

Branch = Literal["a", "b", "between"]
Matrix = tuple[tuple[int, int, int, int], ...]


class NoCandidate(DegenerateCase):
    pass


class AmbiguousCandidates(DegenerateCase):
    def __init__(self, msg: str, candidates: list):
        super().__init__(msg)
        self.candidates = candidates


class HoleExpected(DegenerateCase):
    pass


# -----------------------------
# Types
# -----------------------------
@dataclass(frozen=True)
class CaseLabel:
    index: int
    branch: Optional[Branch] = None

    def __post_init__(self):
        if not 1 <= self.index <= 8:
            raise ValueError(f"case index out of range: {self.index}")
        if (self.branch is not None) != (self.index in (7, 8)):
            raise ValueError(f"branch {self.branch!r} does not fit case {self.index}")

    def __str__(self) -> str:
        return f"{self.index}{self.branch or ''}"


@dataclass(frozen=True)
class CaseCounts:
    k: Optional[int] = None
    n: Optional[int] = None
    m: Optional[int] = None
    x: Optional[int] = None
    y: Optional[int] = None

    def as_dict(self) -> dict[str, int]:
        return {key: v for key, v in vars(self).items() if v is not None}


@dataclass(frozen=True)
class TransitionMatrix:
    entries: Matrix
    provenance: str
    parameters: tuple[tuple[str, int], ...] = ()

    @property
    def determinant(self) -> int:
        return det_int(self.entries)


@dataclass(frozen=True)
class Prediction:
    verdict: Literal["symmetric", "hole"]
    label: CaseLabel
    counts: CaseCounts
    params: Optional[SymmetricParams] = None
    matrix: Optional[TransitionMatrix] = None
    route: Literal["initial-hole", "candidates", "block"] = "candidates"
    candidates: tuple[tuple[TransitionMatrix, SymmetricParams], ...] = ()
    block: Optional[BlockRoute] = None
    listed_candidate: Optional[str] = None


@dataclass(frozen=True)
class SymmetrizeOutcome:
    result: Literal["symmetric", "hole", "degenerate"]
    params: Optional[SymmetricParams]
    generalized_iterations_used: int
    matrix_used: Optional[TransitionMatrix]
    trace: InductionTrace

    @property
    def within_bound(self) -> bool:
        return self.result != "symmetric" or self.generalized_iterations_used <= GENERALIZED_BOUND


@dataclass(frozen=True)
class SymmetrizationCheck:
    params: SymmetricParams
    label: Optional[CaseLabel]
    counts: CaseCounts
    matrix: Optional[TransitionMatrix]
    predicted: str
    predicted_params: Optional[SymmetricParams]
    engine: str
    engine_params: Optional[SymmetricParams]
    agree: bool
    generalized_iterations: int
    ordinary_iterations: int
    route: str = ""
    findings: tuple[str, ...] = field(default=())


# -----------------------------
# Normalization and classification
# -----------------------------
def normalization_swaps(p: SymmetricParams) -> tuple[bool, bool]:
    a, b, c, u = p.astuple()
    if a == b:
        raise DegenerateCase("a = b: the a/b exchange is undetermined")
    big, small = (a, b) if a > b else (b, a)
    if 2 * u == big + small:
        raise DegenerateCase("u = a + b - u: the reflection is undetermined")
    return a < b, u > big + small - u


def normalize_params(p: SymmetricParams) -> SymmetricParams:
    swap_ab, reflect_u = normalization_swaps(p)
    a, b, c, u = p.astuple()
    if swap_ab:
        a, b = b, a
    if reflect_u:
        u = a + b - u
    return SymmetricParams.of(a, b, c, u)


def _critical_values(p: SymmetricParams) -> dict[str, FieldElement]:
    a, b, c, u = p.astuple()
    return {
        "u": u, "u+c": u + c, "b": b, "b+c": b + c,
        "a": a, "a+c": a + c, "a+b-u": a + b - u, "a+b+c-u": a + b + c - u,
    }


CHAINS: dict[int, tuple[str, ...]] = {
    1: ("u", "u+c", "b", "b+c", "a", "a+c", "a+b-u", "a+b+c-u"),
    2: ("u", "b", "u+c", "b+c", "a", "a+b-u", "a+c", "a+b+c-u"),
    3: ("u", "b", "a", "a+b-u", "u+c", "b+c", "a+c", "a+b+c-u"),
    # b+c is free in case 4
    4: ("b", "u", "a+b-u", "a", "u+c", "a+b+c-u", "a+c"),
    5: ("b", "u", "b+c", "u+c", "a+b-u", "a", "a+b+c-u", "a+c"),
    6: ("b", "u", "b+c", "a+b-u", "u+c", "a", "a+b+c-u", "a+c"),
    7: ("b", "b+c", "u", "u+c", "a+b-u", "a+b+c-u", "a", "a+c"),
    8: ("b", "b+c", "u", "a+b-u", "u+c", "a+b+c-u", "a", "a+c"),
}


def critical_chain(p: SymmetricParams) -> list[str]:
    vals = _critical_values(p)
    order = sorted(vals, key=lambda k: vals[k])
    for x, y in zip(order, order[1:]):
        if vals[x] == vals[y]:
            raise DegenerateCase(f"critical values tie: {x} = {y}")
    return order


def inequality_case(p: SymmetricParams) -> int:
    a, b, c, u = p.astuple()
    if u < b - c:
        return 1
    if u < b:
        return 2 if b + c < a else 3
    if a < u + c:
        return 4
    if u < b + c:
        return 5 if u + c < a + b - u else 6
    return 7 if u + c < a + b - u else 8


def _branch(p: SymmetricParams) -> Branch:
    a, b, c, _ = p.astuple()
    if a - b < b:
        return "a"
    if a - b - c > b:
        return "b"
    return "between"


def classify_case(p: SymmetricParams) -> tuple[CaseLabel, bool]:
    """Case from the order of the interior critical values; inequalities cross-check, holes fall back to them."""
    a, b, _, u = p.astuple()
    if not (a > b and u < a + b - u):
        raise DegenerateCase("classify_case needs normalized parameters")
    order = critical_chain(p)
    hole = bool(coverage_gaps(build_special_symmetric(p)))
    matches = [i for i, chain in CHAINS.items() if tuple(s for s in order if s in chain) == chain]
    fallback = inequality_case(p)
    if len(matches) == 1:
        index = matches[0]
        if index != fallback:
            raise DegenerateCase(f"order chain says case {index}, inequalities say case {fallback}")
    elif not matches and hole:
        index = fallback
    else:
        raise DegenerateCase(f"critical order {','.join(order)} matches chains {matches}")
    branch = _branch(p) if index in (7, 8) else None
    return CaseLabel(index, branch), hole


def case_quotients(label: CaseLabel, p: SymmetricParams) -> dict[str, FieldElement]:
    """The ratios whose floors give k, n, x and y."""
    a, b, c, u = p.astuple()
    if label.index in (3, 4):
        return {"k": (c + u - a) / (a + b - 2 * u)}
    if label.index in (7, 8) and label.branch == "a":
        return {"n": b / (a - b)}
    if label.index in (7, 8) and label.branch == "b":
        return {"x": u / (b + c), "y": (a - u - c) / (b + c)}
    return {}


def integral_quotients(label: CaseLabel, p: SymmetricParams) -> list[str]:
    """Names of the case ratios that are exact integers; the induction never closes up there."""
    return [name for name, q in case_quotients(label, p).items() if math.floor(q) == q]


def on_case_boundary(p: SymmetricParams) -> bool:
    q = normalize_params(p)
    label, _ = classify_case(q)
    return bool(integral_quotients(label, q))


def case_counts(label: CaseLabel, p: SymmetricParams) -> CaseCounts:
    q = {name: math.floor(v) for name, v in case_quotients(label, p).items()}
    if "k" in q:
        return CaseCounts(k=q["k"] + 1)
    if "n" in q:
        return CaseCounts(n=q["n"], m=q["n"] - 1)
    return CaseCounts(**q)


# -----------------------------
# Candidate matrices
# -----------------------------
_A_FAMILY: tuple[Matrix, ...] = (
    ((1, -1, -1, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
    ((1, -1, -1, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 0, -1, -1)),
    ((0, 1, 0, 0), (1, -1, -1, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
    ((0, 1, 0, 0), (1, -1, -1, 0), (0, 0, 1, 0), (1, 0, -1, -1)),
)


def _b_family(k: int) -> tuple[Matrix, ...]:
    r1 = (1 + k, -1 + k, -1, -2 * k)
    r3 = (-k, -k, 1, 2 * k)
    r4 = (1 + k, k, -1, -1 - 2 * k)
    eb, eu = (0, 1, 0, 0), (0, 0, 0, 1)
    return ((r1, eb, r3, eu), (r1, eb, r3, r4), (eb, r1, r3, eu), (eb, r1, r3, r4))


def _c_family_n_printed(n: int) -> tuple[Matrix, ...]:
    r1 = (1 + n, -n - 2, -2, 0)
    r2 = (-n, 1 + n, 0, 0)
    r1_no_c = (1 + n, -n - 2, 0, 0)
    r3, r4 = (0, 0, 1, 0), (0, -1, 0, 1)
    return ((r1, r2, r3, r4), (r2, r1_no_c, r3, r4))


def _c_family_n(n: int) -> tuple[Matrix, ...]:
    """The printed list with -c restored in the u' row and -2c in the exchanged a' row."""
    r1 = (1 + n, -n - 2, -2, 0)
    r2 = (-n, 1 + n, 0, 0)
    r3, r4 = (0, 0, 1, 0), (0, -1, -1, 1)
    return ((r1, r2, r3, r4), (r2, r1, r3, r4))


def _c_family_xy(x: int, y: int) -> tuple[Matrix, ...]:
    r1 = (1, -(x + y) - 1, -(x + y) - 1, 0)
    eb, ec = (0, 1, 0, 0), (0, 0, 1, 0)
    r4 = (1, -y, -y - 1, -1)
    return ((r1, eb, ec, r4), (eb, r1, ec, r4))


def _closure(base: Sequence[Matrix], family: str, parameters, suffix: str = "",
             seen: Optional[set[Matrix]] = None) -> list[TransitionMatrix]:
    """Close under the a'/b' row exchange and u' -> a' + b' - u'."""
    out: list[TransitionMatrix] = []
    seen = set() if seen is None else seen
    for i, m in enumerate(base, start=1):
        swapped = (m[1], m[0], m[2], m[3])
        for tag, x in (("", m), ("/swap", swapped)):
            mirror = (x[0], x[1], x[2], tuple(p + q - r for p, q, r in zip(x[0], x[1], x[3])))
            for tag2, y in (("", x), ("/reflect", mirror)):
                if y in seen:
                    continue
                seen.add(y)
                out.append(TransitionMatrix(y, f"{family}{i}{suffix}{tag}{tag2}", parameters))
    return out


# cases 2, 4, 6, 8 reuse the list of the previous case; case 5 repeats case 1's list
LIST_OF_CASE = {1: 1, 2: 1, 3: 3, 4: 3, 5: 1, 6: 1, 7: 7, 8: 7}


def case_matrices(label: CaseLabel, p: SymmetricParams) -> list[TransitionMatrix]:
    counts = case_counts(label, p)
    source = LIST_OF_CASE[label.index]
    if source == 1:
        return _closure(_A_FAMILY, "A", ())
    if source == 3:
        return _closure(_b_family(counts.k), "B", (("k", counts.k),))
    if label.branch == "a":
        params = (("n", counts.n),)
        seen: set[Matrix] = set()
        printed = _closure(_c_family_n_printed(counts.n), "Cn", params, seen=seen)
        return printed + _closure(_c_family_n(counts.n), "Cn", params, "-corrected", seen=seen)
    if label.branch == "b":
        return _closure(_c_family_xy(counts.x, counts.y), "Cxy", (("x", counts.x), ("y", counts.y)))
    raise HoleExpected(f"case {label.index} with 2b < a < 2b + c leads to a hole")


def apply_matrix(m: Matrix, p: SymmetricParams) -> tuple[FieldElement, ...]:
    v = p.astuple()
    return tuple(sum((coef * x for coef, x in zip(row, v)), Fraction(0)) for row in m)


def _qualifies(image) -> bool:
    a, b, c, u = image
    return all(t > 0 for t in image) and b < a and u < a + b - u


def select_matrix(cands: Sequence[TransitionMatrix], p: SymmetricParams) -> tuple[TransitionMatrix, SymmetricParams]:
    """The unique candidate whose image is positive and satisfies a' > b', a' + b' - u' > u'."""
    if not cands:
        raise NoCandidate("empty candidate list")
    ok = []
    for m in cands:
        image = apply_matrix(m.entries, p)
        if _qualifies(image):
            ok.append((m, SymmetricParams.of(*image)))
    if not ok:
        raise NoCandidate("no candidate image is positive and normalized")
    if len(ok) > 1:
        names = ", ".join(m.provenance for m, _ in ok)
        raise AmbiguousCandidates(f"{len(ok)} candidates qualify: {names}", ok)
    return ok[0]


# -----------------------------
# Routes
# -----------------------------
def _has_hole(p: SymmetricParams) -> bool:
    return bool(coverage_gaps(build_special_symmetric(p)))


def predict_next(p: SymmetricParams) -> Prediction:
    """Matrix route: classify, then candidate selection (cases 1-6) or the block route (cases 7, 8)."""
    p = normalize_params(p)
    label, hole = classify_case(p)
    counts = case_counts(label, p)
    if hole:
        return Prediction("hole", label, counts, route="initial-hole")
    if label.index in (7, 8):
        route = block_route(p)
        if route.verdict == "hole":
            return Prediction("hole", label, counts, route="block", block=route)
        matrix = TransitionMatrix(route.matrix, "block", tuple(counts.as_dict().items()))
        try:
            listed = next((m.provenance for m in case_matrices(label, p) if m.entries == route.matrix), None)
        except HoleExpected:
            listed = None
        return Prediction(
            "symmetric", label, counts, route.params, matrix,
            route="block", block=route, listed_candidate=listed,
        )
    cands = case_matrices(label, p)
    try:
        matrix, image = select_matrix(cands, p)
    except AmbiguousCandidates as e:
        return Prediction("hole", label, counts, route="candidates", candidates=tuple(e.candidates))
    except NoCandidate:
        return Prediction("hole", label, counts, route="candidates")
    if _has_hole(image):
        return Prediction("hole", label, counts, image, matrix, candidates=((matrix, image),))
    return Prediction("symmetric", label, counts, image, matrix, candidates=((matrix, image),))


def symmetrize(s: IISystem, max_steps: int = DEFAULT_MAX_STEPS, *, attach_matrix: bool = True) -> SymmetrizeOutcome:
    """Right-side induction until the first special symmetric state or a hole."""
    trace = run_induction(s, "right", max_steps, "symmetric")
    used = len(group_generalized(trace))
    if trace.outcome == "step_cap":
        raise InductionError(f"no symmetric state within {max_steps} ordinary iterations")
    if trace.outcome != "symmetric":
        return SymmetrizeOutcome(trace.outcome, None, used, None, trace)
    params = params_of(trace.final)
    matrix = None
    if attach_matrix:
        try:
            pred = predict_next(params_of(s))
            if pred.verdict == "symmetric" and pred.params == params:
                matrix = pred.matrix
        except DegenerateCase:
            matrix = None
    return SymmetrizeOutcome("symmetric", params, used, matrix, trace)


def verify_symmetrization(p: SymmetricParams, max_steps: int = DEFAULT_MAX_STEPS) -> SymmetrizationCheck:
    """Engine route against matrix route on one parameter tuple."""
    findings: list[str] = []
    try:
        q = normalize_params(p)
    except DegenerateCase as e:
        trace = run_induction(build_special_symmetric(p), "right", max_steps, "symmetric")
        engine = "degenerate" if trace.outcome == "degenerate" else trace.outcome
        return SymmetrizationCheck(
            p, None, CaseCounts(), None, "degenerate", None, engine, None,
            engine == "degenerate", len(group_generalized(trace)), trace.ordinary_iterations,
            findings=(str(e),),
        )

    outcome = symmetrize(build_special_symmetric(q), max_steps, attach_matrix=False)
    engine = outcome.result
    engine_params = outcome.params
    if outcome.generalized_iterations_used > GENERALIZED_BOUND and engine == "symmetric":
        findings.append(f"{outcome.generalized_iterations_used} generalized iterations exceed {GENERALIZED_BOUND}")

    label, counts, matrix, route = None, CaseCounts(), None, ""
    try:
        pred = predict_next(q)
        label, counts, route = pred.label, pred.counts, pred.route
        predicted, predicted_params, matrix = pred.verdict, pred.params, pred.matrix
        if len(pred.candidates) > 1:
            match = [(m, im) for m, im in pred.candidates if engine_params is not None and im == engine_params]
            findings.append(f"ambiguous selection among {len(pred.candidates)} candidates")
            if match:
                matrix, predicted_params = match[0]
                predicted = "symmetric"
        if pred.route == "block" and pred.verdict == "symmetric" and pred.listed_candidate is None:
            findings.append("no listed C-candidate reproduces the block-route matrix")
    except DegenerateCase as e:
        predicted, predicted_params = "degenerate", None
        findings.append(str(e))

    if engine == "degenerate" and label is not None and predicted != "degenerate":
        on_boundary = integral_quotients(label, q)
        if on_boundary:
            findings.append(f"integral case ratio {','.join(on_boundary)}: not generic")
            predicted, predicted_params, matrix = "degenerate", None, None

    if predicted == "hole":
        predicted_params = None
    if matrix is not None and predicted == "symmetric" and abs(matrix.determinant) != 1:
        findings.append(f"determinant {matrix.determinant} is not +-1")
    agree = predicted == engine and (engine != "symmetric" or predicted_params == engine_params)
    return SymmetrizationCheck(
        q, label, counts, matrix if predicted == "symmetric" else None,
        predicted, predicted_params, engine, engine_params, agree,
        outcome.generalized_iterations_used, outcome.trace.ordinary_iterations,
        route, tuple(findings),
    )
