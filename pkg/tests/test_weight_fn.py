import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultraweight.seq_core import InputError, check_condition, check_relation, make_gevrey
from ultraweight.weight_fn import (
    check_omega_condition,
    check_subadditive,
    compare_weights,
    gevrey_root,
    inequality_suite,
    linear_cutoff,
    omega_rho_check,
    omega_sequence,
    phi_star,
    power_log,
    sampled,
    young_conjugate,
)


def linear_conjugate(t):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(t > 1, t * np.log(np.maximum(t, 1)) - t + 1, 0.0)


def test_linear_conjugate_closed_form():
    t = np.concatenate([np.linspace(0, 1, 11), np.geomspace(1.01, 1e4, 300)])
    got = phi_star(linear_cutoff(), t)
    big = t > 1
    np.testing.assert_allclose(got[big], linear_conjugate(t[big]), rtol=1e-12)
    assert np.all(got[~big] == 0)


@given(st.lists(st.floats(0, 500), min_size=1, max_size=20))
def test_phi_star_is_order_independent(ts):
    w = gevrey_root(1.0)
    arr = np.array(ts)
    np.testing.assert_allclose(phi_star(w, arr), phi_star(w, np.sort(arr))[np.argsort(np.argsort(arr))])


@given(st.floats(0.0, 3.0))
def test_conjugate_is_convex_and_nondecreasing(s):
    t = np.linspace(0, 40, 81)
    tab = young_conjugate(gevrey_root(s), t)
    assert np.all(np.diff(tab.phistar) >= -1e-9)
    assert np.all(np.diff(tab.phistar, 2) >= -1e-7)


def test_fenchel_young_inequality():
    w = gevrey_root(1.0)
    t = np.linspace(0, 30, 31)
    u = np.linspace(0, 10, 41)
    ps = phi_star(w, t)
    assert np.all(ps[:, None] + w.phi(u)[None, :] >= t[:, None] * u[None, :] - 1e-9)


def test_omega_sequences_are_weakly_log_convex():
    for w in (linear_cutoff(), gevrey_root(1.0), power_log(2.0)):
        assert check_condition(omega_sequence(w, 1.0, 120), "wlc").holds


def test_linear_cutoff_sequence_is_gevrey_like():
    Om = omega_sequence(linear_cutoff(), 1.0, 200)
    assert check_relation(Om, make_gevrey(0, 200), "approx").holds


@pytest.mark.parametrize("w, holds, fails", [
    (linear_cutoff(), ("w1", "w3", "w4", "w6", "w7"), ("w5", "w8")),
    (gevrey_root(1.0), ("w1", "w2", "w3", "w4", "w5", "w6", "w7"), ("w8",)),
    (power_log(2.0), ("w1", "w2", "w3", "w8"), ("w6",)),
])
def test_omega_conditions_for_builtins(w, holds, fails):
    for c in holds:
        assert check_omega_condition(w, c).holds, c
    for c in fails:
        assert not check_omega_condition(w, c).holds, c


def test_w7_witness_is_minimal():
    assert check_omega_condition(gevrey_root(1.0), "w7").witness["C"] == 1
    assert check_omega_condition(linear_cutoff(), "w7").witness["C"] == 2


def test_subadditivity_fails_for_weights_vanishing_on_the_unit_interval():
    # ω(2) <= 2 ω(1) = 0 is impossible once ω(2) > 0
    v = check_subadditive(gevrey_root(1.0))
    assert not v.holds
    s, t = v.counterexample["s"], v.counterexample["t"]
    w = gevrey_root(1.0)
    assert w.omega(s + t) > w.omega(s) + w.omega(t)


@pytest.mark.parametrize("which", ["eq5_2", "eq5_6", "eq5_10", "eq5_13"])
def test_inequality_suite_holds_for_linear_cutoff(which):
    assert inequality_suite(linear_cutoff(), which, {"rho": 1.0, "kmax": 60}).holds


def test_scale_equivalence_tracks_w6():
    v = inequality_suite(power_log(2.0), "eq5_11", {"rho": 1.0, "tau": 2.0, "kmax": 120})
    assert v.witness["consistent"]
    assert not v.holds
    v = inequality_suite(gevrey_root(1.0), "eq5_11", {"rho": 1.0, "tau": 2.0, "kmax": 120})
    assert v.holds and v.witness["consistent"]


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_omega_rho_sandwich(rho):
    res = omega_rho_check(gevrey_root(1.0), rho)
    assert res.verdict.holds
    assert res.verdict.witness["maxUpperGap"] <= 1e-9


def test_compare_gevrey_roots():
    # compare_weights(w, v, rel) asks whether v = O(w) or v = o(w)
    assert compare_weights(gevrey_root(1.0), gevrey_root(2.0), "triangleleft").holds
    assert compare_weights(gevrey_root(1.0), gevrey_root(2.0), "lesssim").holds
    assert not compare_weights(gevrey_root(2.0), gevrey_root(1.0), "lesssim").holds


def test_sampled_weight_round_trips_a_builtin():
    t = np.geomspace(1, 1e6, 400)
    w = sampled(np.concatenate([[0.0], t]), np.concatenate([[0.0], t - 1]))
    t_eval = np.geomspace(2, 1e5, 30)
    np.testing.assert_allclose(w.omega(t_eval), linear_cutoff().omega(t_eval), rtol=1e-9)


def test_invalid_weights_are_rejected():
    with pytest.raises(InputError):
        power_log(1.0)
    with pytest.raises(InputError):
        sampled([0, 1, 2, 3], [0, 0, 2, 2.5])
    with pytest.raises(InputError):
        sampled([0, 1, 2, 3], [0, 1, 2, 3])
    with pytest.raises(InputError):
        omega_sequence(linear_cutoff(), 0.0, 10)
