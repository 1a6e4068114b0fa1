import math

import pytest

from realproj import VerticalStrip, load_spec, validate_sum
from realproj.specfile import corpus_path

LN2, LN3 = math.log(2), math.log(3)


def zeta3_sum(coeffs=(1, 1, 1)):
    """``c0 + c1 2^-s + c2 3^-s`` with exact coordinates over (ln2, ln3)."""
    return validate_sum({
        "basis": [{"name": "ln2", "value": LN2}, {"name": "ln3", "value": LN3}],
        "terms": [
            {"coeff": coeffs[0], "exponent": 0.0, "coords": ["0", "0"]},
            {"coeff": coeffs[1], "exponent": -LN2, "coords": ["-1", "0"]},
            {"coeff": coeffs[2], "exponent": -LN3, "coords": ["0", "-1"]},
        ],
    })


def term_index(f, exponent):
    """0-based position of the term with this exponent (terms are sorted)."""
    return min(range(len(f)), key=lambda j: abs(f.exponents[j] - exponent))


@pytest.fixture
def zeta3():
    return zeta3_sum()


@pytest.fixture
def strip3():
    return VerticalStrip(-3.0, 3.0)


@pytest.fixture
def spec_path():
    return corpus_path


@pytest.fixture
def zeta4():
    return load_spec(corpus_path("zeta4-dependent")).sum
