import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultraweight.seq_core import (
    InputError,
    WeightSeq,
    carleman_sums,
    check_condition,
    check_relation,
    from_mu,
    make_gevrey,
    mu_of,
    safe_exp,
    tail_trend,
    transform,
)

gevrey_s = st.floats(0.0, 3.0)


def test_gevrey_values_are_factorial_powers():
    G = make_gevrey(2.0, 10)
    assert math.exp(G.logM[5]) == pytest.approx(math.factorial(5) ** 2)
    assert G.logM[0] == 0.0


def test_from_mu_round_trips_through_mu_of():
    logmu = np.log(np.arange(1, 21, dtype=float)) * 1.5
    M = from_mu(logmu)
    np.testing.assert_allclose(mu_of(M), logmu, atol=1e-12)


def test_weight_seq_rejects_bad_input():
    with pytest.raises(InputError):
        WeightSeq(np.array([0.0]))
    with pytest.raises(InputError):
        WeightSeq(np.array([0.0, np.inf, 1.0]))
    with pytest.raises(InputError):
        make_gevrey(-1, 10)


def test_safe_exp_saturates():
    assert safe_exp(800.0) == math.inf
    assert safe_exp(1.0) == pytest.approx(math.e)


@given(gevrey_s)
def test_gevrey_sequences_satisfy_lc_mg_dc(s):
    G = make_gevrey(s, 120)
    assert check_condition(G, "lc").holds
    assert check_condition(G, "wlc").holds
    assert check_condition(G, "mg").holds
    assert check_condition(G, "dc").holds


def test_quadratic_log_growth_keeps_dc_but_breaks_mg():
    k = np.arange(121, dtype=float)
    M = WeightSeq(k**2 / 10.0, "exp(k^2/10)")
    assert check_condition(M, "lc").holds
    assert check_condition(M, "dc").holds
    assert not check_condition(M, "mg").holds


def test_cubic_log_growth_breaks_dc():
    k = np.arange(121, dtype=float)
    v = check_condition(WeightSeq(k**3 / 100.0, "exp(k^3/100)"), "dc")
    assert not v.holds
    assert v.counterexample["index"] >= 60


def test_wlc_counterexample_names_the_index():
    logmu = np.zeros(30)
    logmu[10] = 5.0
    v = check_condition(from_mu(logmu), "wlc")
    assert not v.holds
    assert v.counterexample["k"] == 11


@given(st.floats(0.0, 2.0), st.floats(0.1, 1.5))
def test_gevrey_order_relations(s, gap):
    small, big = make_gevrey(s, 200), make_gevrey(s + gap, 200)
    assert check_relation(small, big, "lesssim").holds
    assert check_relation(small, big, "triangleleft").holds
    assert not check_relation(big, small, "lesssim").holds


@given(st.floats(0.0, 2.0), st.floats(0.2, 5.0))
def test_scaling_is_equivalent(s, rho):
    G = make_gevrey(s, 150)
    assert check_relation(G, transform(G, "scale", rho), "approx").holds


def test_lesssim_witness_bounds_every_index():
    M, N = make_gevrey(1, 100), make_gevrey(1.5, 100)
    v = check_relation(M, N, "lesssim")
    k = np.arange(101)
    assert np.all(M.logM <= v.witness["logC"] + k * v.witness["logRho"] + N.logM + 1e-9)


def test_tail_trend_separates_log_growth_from_convergence():
    k = np.arange(1, 513, dtype=float)
    assert tail_trend(np.log(k), k) == "up"
    assert tail_trend(3.0 + 1.0 / k, k) == "flat"
    assert tail_trend(-np.log(k), k) == "down"


def test_transforms():
    G = make_gevrey(1, 20)
    assert transform(G, "shift_plus_one").kmax == 19
    np.testing.assert_allclose(transform(G, "sqrt").logM, 0.5 * G.logM)
    H = make_gevrey(3, 20)
    np.testing.assert_allclose(transform(G, "geo_mean", H).logM, make_gevrey(2, 20).logM)
    np.testing.assert_allclose(transform(G, "pointwise_max", H).logM, H.logM)
    with pytest.raises(InputError):
        transform(G, "scale", -1)


def test_scaled_gevrey_keeps_its_spec():
    spec = transform(make_gevrey(1, 20), "scale", 2.0).spec()
    assert spec["kind"] == "scaled" and spec["base"]["kind"] == "gevrey"


def test_carleman_certificates():
    _, v0 = carleman_sums(make_gevrey(0, 200))
    _, v1 = carleman_sums(make_gevrey(1, 200))
    assert v0.status == "certified" and v0.conclusion == "divergent"
    assert v1.conclusion == "convergent"
    partial, v = carleman_sums(WeightSeq(np.zeros(64), "flat", "custom"))
    assert v.status == "inconclusive"
    assert np.all(np.diff(partial) > 0)
