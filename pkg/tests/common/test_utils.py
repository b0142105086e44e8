"""Rational codec, seeded sampling and helpers."""

import logging
from fractions import Fraction

import pytest

from diophantine_exponents.common.exceptions import (
    DimensionMismatchError,
    DiophantineError,
    PreconditionError,
    SchemaError,
    ValidationError,
)
from diophantine_exponents.common.logger import get_logger, parse_module_levels, setup_logger
from diophantine_exponents.common.utils import (
    RationalSampler,
    chunk_ranges,
    format_rational,
    inputs_hash,
    parse_rational,
    thread_map,
)


def test_format_rational():
    assert format_rational(Fraction(4, 9)) == "4/9"
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(-3) == "-3"


@pytest.mark.parametrize("raw, value", [("7/11", Fraction(7, 11)), ("-2", Fraction(-2)), (5, Fraction(5))])
def test_parse_rational(raw, value):
    assert parse_rational(raw) == value


@pytest.mark.parametrize("raw", ["0.5", "1e3", "abc", "1/0", True, 0.5, None])
def test_parse_rational_rejects_inexact(raw):
    with pytest.raises(SchemaError):
        parse_rational(raw)


def test_sampler_is_deterministic():
    a, b = RationalSampler(seed=3), RationalSampler(seed=3)
    assert a.vectors(4, 5) == b.vectors(4, 5)
    assert a.drawn == 4
    assert all(abs(x) <= 10 for x in RationalSampler(seed=1, height=10).vector(50))


def test_spawned_streams_are_stable():
    first = [c.vector(3) for c in RationalSampler(seed=9).spawn(3)]
    second = [c.vector(3) for c in RationalSampler(seed=9).spawn(3)]
    assert first == second


def test_thread_map_preserves_order():
    assert thread_map(lambda v: v * v, range(10), threads=4) == [v * v for v in range(10)]


def test_chunk_ranges_cover_the_range():
    assert chunk_ranges(0, 9, 3) == [(0, 3), (4, 6), (7, 9)]
    assert chunk_ranges(0, 1, 8) == [(0, 0), (1, 1)]


def test_inputs_hash_ignores_key_order():
    assert inputs_hash({"a": 1, "b": [1, 2]}) == inputs_hash({"b": [1, 2], "a": 1})


def test_error_serialization():
    e = DimensionMismatchError("shapes differ", "qlinalg", expected=3, actual=2)
    assert isinstance(e, ValidationError) and isinstance(e, DiophantineError)
    assert str(e) == "[qlinalg] shapes differ"
    assert e.to_dict() == {
        "type": "DimensionMismatchError",
        "message": "shapes differ",
        "context": "qlinalg",
        "details": {"expected": "3", "actual": "2"},
    }


def test_loggers_share_the_package_root():
    assert get_logger("selftest").name == "diophantine_exponents.selftest"
    assert get_logger().name == "diophantine_exponents"
    logger = setup_logger(level="debug")
    assert logger.level == logging.DEBUG
    setup_logger(level="WARNING")
    assert len(logger.handlers) == 1


def test_module_levels_override_the_root():
    module = get_logger("empirical.enumeration")
    try:
        root = setup_logger("WARNING", parse_module_levels("empirical.enumeration=debug, selftest=INFO"))
        assert root.level == logging.WARNING
        assert module.getEffectiveLevel() == logging.DEBUG
        assert get_logger("selftest").level == logging.INFO
        assert get_logger("empirical.dani").getEffectiveLevel() == logging.WARNING
    finally:
        module.setLevel(logging.NOTSET)
        get_logger("selftest").setLevel(logging.NOTSET)


def test_module_levels_are_validated():
    assert parse_module_levels("") == {}
    with pytest.raises(PreconditionError):
        parse_module_levels("selftest")
    with pytest.raises(PreconditionError):
        parse_module_levels("selftest=LOUD")
    with pytest.raises(PreconditionError):
        setup_logger("LOUD")
