import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ultraweight.constructions import example36
from ultraweight.regularize import (
    assoc_function,
    b_o_regularization,
    bc_from_assoc,
    cartan_check,
    contact_ratio_diagnostic,
    contact_ratio_lower_bound,
    lc_minorant,
)
from ultraweight.scenarios import hull_oracle
from ultraweight.seq_core import InputError, WeightSeq, check_condition, check_relation, make_gevrey, transform

log_values = arrays(np.float64, st.integers(4, 40), elements=st.floats(-10, 10))


@given(log_values)
def test_weak_hull_matches_chord_oracle(y):
    M = WeightSeq(y)
    h = lc_minorant(M, "weak")
    np.testing.assert_allclose(h.hull_log(), hull_oracle(M.log_kfact()), atol=1e-9)


@given(log_values)
def test_regularization_is_an_idempotent_wlc_minorant(y):
    M = WeightSeq(y)
    h = lc_minorant(M, "weak")
    reg = h.regularized
    assert np.all(reg.logM <= M.logM + 1e-9)
    assert check_condition(reg, "wlc").holds
    again = lc_minorant(reg, "weak").regularized
    np.testing.assert_allclose(again.logM, reg.logM, atol=1e-12)


@given(log_values)
def test_strong_hull_is_log_convex(y):
    h = lc_minorant(WeightSeq(y), "strong")
    assert check_condition(h.regularized, "lc").holds


def test_vertices_agree_with_input_exactly():
    M = example36(4, 200).M
    h = lc_minorant(M, "weak")
    assert np.array_equal(h.regularized.logM[h.vertices], M.logM[h.vertices])
    assert set(h.extreme.tolist()) <= set(h.vertices.tolist())


def test_log_convex_input_is_fixed():
    G = make_gevrey(1.5, 80)
    h = lc_minorant(G, "weak")
    np.testing.assert_array_equal(h.regularized.logM, G.logM)


def test_dual_formula_reproduces_the_hull():
    M = example36(4, 200).M
    h = lc_minorant(M, "weak")
    d = np.diff(h.hull_log())
    log_t = np.linspace(d.min() - 1, d.max() + 1, 400)
    dual = bc_from_assoc(M, log_t)
    ks = np.arange(1, 150)
    np.testing.assert_allclose(dual[ks], h.regularized.logM[ks], atol=1e-8)


def test_assoc_function_of_constant_sequence_is_exponential_partial_sum():
    M = WeightSeq(np.zeros(40))
    t = np.array([0.5, 2.0, 5.0])
    sample = assoc_function(M, "T", t)
    expected = [max(k * math.log(x) - math.lgamma(k + 1) for k in range(41)) for x in t]
    np.testing.assert_allclose(sample.values, expected, atol=1e-12)
    s_sample = assoc_function(M, "S", t)
    assert s_sample.argmax[0] == 0 and s_sample.argmax[1] <= 2


def test_assoc_function_rejects_unsorted_grid():
    with pytest.raises(InputError):
        assoc_function(make_gevrey(1, 10), "T", [2.0, 1.0])


def test_b_o_regularization_is_equivalent_for_gevrey():
    # the supremum for index k sits at t = k^2, so the grid must reach 40^2
    G = make_gevrey(1, 40)
    bo = b_o_regularization(G, 2000.0)
    assert check_relation(bo, G, "lesssim").holds
    assert check_relation(G, bo, "lesssim").holds


def test_contact_ratio_bound_is_continuous_at_one():
    assert contact_ratio_lower_bound(1.0) == pytest.approx(contact_ratio_lower_bound(1.0 + 1e-9), abs=1e-6)
    diag = contact_ratio_diagnostic(lc_minorant(example36(4, 400).M, "weak"))
    assert np.all(diag.ratios >= 1)


def test_cartan_bound_from_gevrey_derivative_bounds():
    G = make_gevrey(1, 30)
    at_bound = G.log_kfact()
    assert cartan_check(G, at_bound, 1.0).holds
    too_big = at_bound + np.arange(31) + 2.0
    v = cartan_check(G, too_big, 1.0)
    assert not v.holds and v.counterexample["k"] == 0


def test_cartan_rejects_decaying_bounds():
    with pytest.raises(InputError):
        cartan_check(transform(make_gevrey(0, 10), "scale", 0.1), np.zeros(5), 1.0)
