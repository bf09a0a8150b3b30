from fractions import Fraction

import pytest
from jsonschema import validate

from codec import (
    CodecError, decode_params, decode_trace, decode_value, encode_params,
    encode_trace, encode_value, parse_params, parse_rational,
)
from rauzy_engine import run_induction
from taxonomy import build_schema, params_schema, trace_schema
from thin_type import thin_eigen_params


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(" -2 ") == Fraction(-2)
    for bad in ("0.5", "1/0", "a", "", "1/2/3"):
        with pytest.raises(CodecError):
            parse_rational(bad)


def test_parse_params():
    assert parse_params("10,4,1,2").astuple() == (10, 4, 1, 2)
    assert parse_params("1/3, 1/4, 5/12, 1/5").c == Fraction(5, 12)
    with pytest.raises(CodecError):
        parse_params("1,2,3")
    with pytest.raises(CodecError):
        parse_params("1,2,3,9")
    with pytest.raises(CodecError):
        parse_params("1,2,0.5,1")
    assert parse_params("THIN") == thin_eigen_params()


def test_rationals_encode_as_strings():
    assert encode_value(Fraction(7, 3)) == "7/3"
    assert encode_value(Fraction(4)) == "4"
    assert decode_value("7/3") == Fraction(7, 3)


def test_number_field_values_keep_their_generator():
    p = thin_eigen_params()
    obj = encode_params(p)
    validate(instance=obj, schema=params_schema())
    assert obj[1]["poly"] == [1, -4, 0, 1]
    assert decode_params(obj) == p


def test_decode_rejects_malformed_values():
    with pytest.raises(CodecError):
        decode_value(1.5)
    with pytest.raises(CodecError):
        decode_value({"poly": [1, -4, 0, 1]})
    with pytest.raises(CodecError):
        decode_params(["1", "2"])


def test_trace_document_validates_and_decodes(ten_four):
    t = run_induction(ten_four)
    obj = encode_trace(t)
    validate(instance=obj, schema=trace_schema())
    back = decode_trace(obj)
    assert back.final == t.final
    assert back.steps == t.steps
    assert back.outcome == "symmetric"


def test_unknown_command_has_no_schema():
    with pytest.raises(ValueError):
        build_schema("render")
