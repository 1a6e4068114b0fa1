import math

import numpy as np
import pytest

from conftest import LN2, LN3, term_index
from oracles import INF_MOD_ZETA3_AT_2
from realproj import (PhaseAssignment, Rectangle, eval_aux, eval_f, inf_modulus, locate_zeros,
                      min_modulus_scan, representation_for, sample_image, torus_membership,
                      validate_sum)
from realproj.probe import eval_f_many


def test_eval_exp_minus_one():
    assert eval_f(validate_sum([(1, 1.0), (-1, 0.0)]), 0) == 0


def test_eval_three_term_at_zero(zeta3):
    assert eval_f(zeta3, 0) == 3


def test_eval_on_the_line_of_zeros():
    f = validate_sum([(1, 0.0), (1, -LN2)])
    assert abs(eval_f(f, 1j * math.pi / LN2)) < 1e-15


def test_eval_rejects_infinite_point(zeta3):
    with pytest.raises(ValueError):
        eval_f(zeta3, complex(math.inf, 0))


def test_vectorized_matches_scalar(zeta3):
    pts = np.array([0.3 + 2j, -1.2 + 17.5j, 2.0 - 4j])
    assert np.allclose(eval_f_many(zeta3, pts), [eval_f(zeta3, p) for p in pts], rtol=1e-14)


def test_scan_single_term_is_constant():
    f = validate_sum([(2.5, 0.7)])
    res = min_modulus_scan(f, 1.0, 50.0)
    assert res.min_value == pytest.approx(2.5 * math.exp(0.7), rel=1e-14)


def test_scan_never_beats_the_infimum(zeta3):
    res = min_modulus_scan(zeta3, 2.0, 1e3)
    assert res.min_value >= INF_MOD_ZETA3_AT_2 - 1e-9
    assert res.samples > 1000


def test_scan_gets_small_inside_the_set(zeta3):
    res = min_modulus_scan(zeta3, 0.0, 1e4)
    assert res.min_value <= 0.2
    assert abs(eval_f(zeta3, complex(0.0, res.argmin_t))) == pytest.approx(res.min_value, rel=1e-9)


def test_aux_zero_phases_is_value_at_real_point(zeta3, zeta4):
    for f in (zeta3, zeta4, validate_sum([(1 + 1j, 0.3), (-2, 1.1), (0.5j, -0.4)])):
        rep = representation_for(f)
        x = PhaseAssignment(tuple(0.0 for _ in range(rep.dimension)))
        assert eval_aux(f, 0.4, x, rep) == pytest.approx(eval_f(f, 0.4), abs=1e-14)


def test_aux_polygon_closes(zeta3):
    rep = representation_for(zeta3)
    # per-term phases 0 for 1 and 2^-s, pi for 3^-s
    three = term_index(zeta3, -LN3)
    x = [0.0] * rep.dimension
    x[rep.basis_indices.index(three)] = math.pi
    assert abs(eval_aux(zeta3, -1.0, PhaseAssignment(tuple(x)), rep)) < 1e-14


def test_aux_single_term_phase_pi():
    f = validate_sum([(2.0, 0.5)])
    rep = representation_for(f)
    v = eval_aux(f, 1.0, PhaseAssignment((math.pi,)), rep)
    assert v == pytest.approx(-2.0 * math.exp(0.5), abs=1e-14)


def test_aux_dimension_mismatch(zeta3):
    with pytest.raises(ValueError):
        eval_aux(zeta3, 0.0, PhaseAssignment((0.0,)))


def test_phase_assignment_range():
    with pytest.raises(ValueError):
        PhaseAssignment((7.0,))
    assert PhaseAssignment.wrap((-math.pi / 2,)).x[0] == pytest.approx(1.5 * math.pi)


def test_torus_member_at_left_endpoint(zeta3):
    res = torus_membership(zeta3, -1.0)
    assert res.member and res.residual <= 1e-10 and not res.heuristic


def test_torus_non_member(zeta3):
    res = torus_membership(zeta3, 2.0)
    assert not res.member
    assert res.residual == pytest.approx(INF_MOD_ZETA3_AT_2, abs=1e-9)


def test_torus_dependent_sum_at_a_zero(zeta4):
    zeros = locate_zeros(zeta4, Rectangle(-2.0, 2.0, 0.0, 30.0))
    assert len(zeros) > 0
    for z in zeros.zeros[:5]:
        res = torus_membership(zeta4, z.location.real)
        assert res.heuristic
        assert res.member and res.residual <= 1e-6


def test_torus_search_converges_to_closed_form():
    rng = np.random.default_rng(3)
    for k in (3, 4, 5):
        coeffs = np.exp(rng.uniform(-1, 1, k))
        f = validate_sum([(float(c), float(l)) for c, l in zip(coeffs, np.sort(rng.uniform(-2, 2, k)))],
                         independent=True)
        for sigma in (-0.5, 0.0, 0.7):
            res = torus_membership(f, sigma)
            assert res.search_residual >= inf_modulus(f, sigma) - 1e-12
            assert res.search_residual - inf_modulus(f, sigma) <= 1e-3


def test_sample_image_bounded_by_total(zeta3):
    vals = sample_image(zeta3, 0.5, n=500)
    total = 1 + 2 ** -0.5 + 3 ** -0.5
    assert vals.shape == (500,) and np.all(np.abs(vals) <= total + 1e-12)
