# codec.py
from __future__ import annotations
import re
from fractions import Fraction
from functools import lru_cache
from typing import Any

from exact_arith import AlgebraicReal, FieldElement, IntPoly, NumberFieldElement
from iis_core import IISystem, IdentificationPair, Interval, SymmetricParams, SystemShapeError
from rauzy_engine import InductionTrace, StepRecord

SCHEMA_VERSION = "1.0"
THIN_TOKEN = "thin"

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class CodecError(ValueError):
    pass


# -----------------------------
# Values
# -----------------------------
def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise CodecError(f"not an exact rational 'p' or 'p/q': {text!r}")
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError as e:
        raise CodecError(f"zero denominator: {text!r}") from e


@lru_cache(maxsize=64)
def _generator(poly: tuple[int, ...], lo: str, hi: str) -> AlgebraicReal:
    return AlgebraicReal(IntPoly(poly), parse_rational(lo), parse_rational(hi))


def encode_value(x: FieldElement) -> Any:
    if isinstance(x, NumberFieldElement):
        g = x.generator
        return {
            "poly": list(g.minimal_poly.coeffs),
            "interval": [str(g.lo), str(g.hi)],
            "coeffs": [str(c) for c in x.coeffs],
        }
    if isinstance(x, (Fraction, int)):
        return str(Fraction(x))
    raise CodecError(f"cannot encode {type(x).__name__}")


def decode_value(obj: Any) -> FieldElement:
    if isinstance(obj, str):
        return parse_rational(obj)
    if isinstance(obj, dict):
        try:
            gen = _generator(tuple(int(c) for c in obj["poly"]), str(obj["interval"][0]), str(obj["interval"][1]))
            return NumberFieldElement(gen, [parse_rational(c) for c in obj["coeffs"]])
        except (KeyError, IndexError, TypeError, ArithmeticError) as e:
            raise CodecError(f"malformed number field element: {obj!r}") from e
    raise CodecError(f"cannot decode value {obj!r}")


# -----------------------------
# Systems, params, traces
# -----------------------------
def encode_interval(iv: Interval) -> list:
    return [encode_value(iv.lo), encode_value(iv.hi)]


def decode_interval(obj: Any) -> Interval:
    if not isinstance(obj, list) or len(obj) != 2:
        raise CodecError(f"interval must be a two-element list: {obj!r}")
    try:
        return Interval(decode_value(obj[0]), decode_value(obj[1]))
    except SystemShapeError as e:
        raise CodecError(str(e)) from e


def encode_system(s: IISystem) -> dict:
    return {
        "support": encode_interval(s.support),
        "pairs": [
            {"left": encode_interval(p.left), "right": encode_interval(p.right), "label": p.label}
            for p in s.pairs
        ],
    }


def decode_system(obj: Any) -> IISystem:
    try:
        return IISystem(
            decode_interval(obj["support"]),
            tuple(
                IdentificationPair.of(decode_interval(p["left"]), decode_interval(p["right"]), str(p["label"]))
                for p in obj["pairs"]
            ),
        )
    except (KeyError, TypeError) as e:
        raise CodecError(f"malformed system: {e}") from e
    except SystemShapeError as e:
        raise CodecError(str(e)) from e


def encode_params(p: SymmetricParams) -> list:
    return [encode_value(v) for v in p.astuple()]


def decode_params(obj: Any) -> SymmetricParams:
    if not isinstance(obj, list) or len(obj) != 4:
        raise CodecError(f"params must be a list of four values: {obj!r}")
    try:
        return SymmetricParams.of(*(decode_value(v) for v in obj))
    except SystemShapeError as e:
        raise CodecError(str(e)) from e


def encode_step(r: StepRecord) -> dict:
    return {
        "kind": r.kind,
        "side": r.side,
        "iteration": r.iteration,
        "moved_pair": r.moved_pair,
        "moved_member": r.moved_member,
        "along_pair": r.along_pair,
        "along_member": r.along_member,
        "cut_point": None if r.cut_point is None else encode_value(r.cut_point),
        "support_after": encode_interval(r.support_after),
    }


def decode_step(obj: Any) -> StepRecord:
    try:
        return StepRecord(
            kind=obj["kind"],
            side=obj["side"],
            moved_pair=obj["moved_pair"],
            along_pair=obj.get("along_pair"),
            cut_point=None if obj.get("cut_point") is None else decode_value(obj["cut_point"]),
            support_after=decode_interval(obj["support_after"]),
            moved_member=obj.get("moved_member"),
            along_member=obj.get("along_member"),
            iteration=int(obj.get("iteration", 0)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CodecError(f"malformed step: {e}") from e


def encode_trace(t: InductionTrace) -> dict:
    return {
        "initial": encode_system(t.initial),
        "steps": [encode_step(r) for r in t.steps],
        "final": encode_system(t.final),
        "outcome": t.outcome,
        "side": t.side,
        "detail": t.detail,
    }


def decode_trace(obj: Any) -> InductionTrace:
    if not isinstance(obj, dict):
        raise CodecError("trace must be a JSON object")
    try:
        return InductionTrace(
            decode_system(obj["initial"]),
            tuple(decode_step(s) for s in obj["steps"]),
            decode_system(obj["final"]),
            obj["outcome"],
            obj.get("side", "right"),
            obj.get("detail"),
        )
    except KeyError as e:
        raise CodecError(f"trace lacks field {e}") from e


def encode_matrix(m) -> list[list[int]]:
    return [[int(v) for v in row] for row in m]


# -----------------------------
# CLI parameter strings
# -----------------------------
def parse_params(text: str) -> SymmetricParams:
    """'10,4,1,2', '1/3,1/4,5/12,1/5' or the token 'thin'."""
    if text.strip().lower() == THIN_TOKEN:
        from thin_type import thin_eigen_params

        return thin_eigen_params()
    parts = [t for t in text.split(",")]
    if len(parts) != 4:
        raise CodecError(f"expected four comma-separated rationals, got {len(parts)}: {text!r}")
    values = [parse_rational(t) for t in parts]
    try:
        return SymmetricParams.of(*values)
    except SystemShapeError as e:
        raise CodecError(str(e)) from e
