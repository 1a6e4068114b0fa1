import math
from fractions import Fraction

import pytest

from realproj import (ExponentialSum, Interval, EndKind, RSetResult, SumValidationError, TailBound,
                      Term, Tolerances, VerticalStrip, validate_sum)
from realproj.core import format_rational, parse_extended, parse_rational

LN2, LN3 = math.log(2), math.log(3)


def test_terms_sorted_ascending():
    f = validate_sum([(1, 0.0), (1, -LN2), (1, -LN3)])
    assert f.exponents == (-LN3, -LN2, 0.0)


def test_duplicate_exponent_rejected():
    with pytest.raises(SumValidationError, match="duplicate"):
        validate_sum([(1, 0.5), (2, 0.5)])


def test_zero_coefficient_rejected():
    with pytest.raises(SumValidationError):
        validate_sum([(0j, 1.0)])


def test_nonfinite_exponent_rejected():
    with pytest.raises(SumValidationError):
        validate_sum([(1, math.inf)])


def test_validate_is_idempotent():
    f = validate_sum([(1, 0.0), (2j, -LN2), (-1, 1.5)])
    assert validate_sum(f) == f


def test_coords_all_or_nothing():
    with pytest.raises(SumValidationError):
        validate_sum({"terms": [{"coeff": 1, "exponent": 0, "coords": ["0"]},
                                {"coeff": 1, "exponent": 1}]})


def test_coords_dimension_mismatch():
    with pytest.raises(SumValidationError):
        validate_sum({"terms": [{"coeff": 1, "exponent": 0, "coords": ["0"]},
                                {"coeff": 1, "exponent": 1, "coords": ["1", "0"]}]})


def test_coords_must_match_symbol_values():
    with pytest.raises(SumValidationError):
        validate_sum({"basis": [{"name": "ln2", "value": LN2}],
                      "terms": [{"coeff": 1, "exponent": -LN3, "coords": ["-1"]}]})


def test_declared_independence_contradicted():
    raw = {"basis": [{"name": "ln2", "value": LN2}], "independent": True,
           "terms": [{"coeff": 1, "exponent": -LN2, "coords": ["-1"]},
                     {"coeff": 1, "exponent": -2 * LN2, "coords": ["-2"]}]}
    with pytest.raises(SumValidationError, match="independ"):
        validate_sum(raw)


def test_zero_exponent_does_not_break_declared_independence():
    raw = {"basis": [{"name": "ln2", "value": LN2}, {"name": "ln3", "value": LN3}],
           "independent": True,
           "terms": [{"coeff": 1, "exponent": 0, "coords": ["0", "0"]},
                     {"coeff": 1, "exponent": -LN2, "coords": ["-1", "0"]},
                     {"coeff": 1, "exponent": -LN3, "coords": ["0", "-1"]}]}
    assert validate_sum(raw).independence_declared


def test_complex_coefficient_object():
    f = validate_sum({"terms": [{"coeff": {"re": 1.0, "im": -2.0}, "exponent": 1.0}]})
    assert f.terms[0].coeff == complex(1, -2)


def test_log_scale_keeps_tiny_coefficients():
    f = validate_sum({"terms": [{"coeff": 0.5, "exponent": -2500.0, "log_scale": -2500.0}]})
    assert f.log_abs[0] == pytest.approx(math.log(0.5) - 2500.0)


def test_degenerate_sums_accepted():
    assert len(validate_sum([])) == 0
    assert len(validate_sum([(1, 2.0)])) == 1


def test_strip_requires_alpha_below_beta():
    with pytest.raises(SumValidationError):
        VerticalStrip(1.0, 1.0)
    s = VerticalStrip(-math.inf, 0.0)
    assert s.contains(-1e300) and not s.contains(0.0)


def test_tail_epsilon_nonnegative():
    with pytest.raises(SumValidationError):
        TailBound(-1.0, VerticalStrip(0, 1))


def test_shift_moves_every_exponent():
    f = validate_sum([(1, 0.0), (1, -LN2)])
    g = f.shifted(0.25)
    assert g.exponents == (-LN2 + 0.25, 0.25)


def test_rational_parsing():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert format_rational(Fraction(2, 4)) == "1/2"
    with pytest.raises(SumValidationError):
        parse_rational("1/0")
    assert parse_extended("-inf") == -math.inf


def test_interval_distance():
    iv = Interval(-1.0, 2.0, EndKind.BOUNDARY, EndKind.BOUNDARY, 0, 1)
    assert iv.distance(0.0) == 0.0 and iv.distance(3.5) == 1.5


def test_tolerances_validated():
    with pytest.raises(SumValidationError):
        Tolerances(root_tol=0.0)


def test_zero_valued_symbol_rejected():
    with pytest.raises(SumValidationError, match="nonzero"):
        validate_sum({"basis": [{"name": "z", "value": 0.0}],
                      "terms": [{"coeff": 1, "exponent": 0.0, "coords": ["1"]}]})
