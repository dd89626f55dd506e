import math

import numpy as np
import pytest

from ultraweight.constructions import (
    characteristic_fn,
    example36,
    exp_sum_derivatives,
    exp_sum_envelope,
    interpolate,
    log_gevrey_L,
)
from ultraweight.fdb import check_fdb_property
from ultraweight.seq_core import InputError, carleman_sums, check_condition, check_relation, make_gevrey, mu_of


def test_example36_index_recursion():
    res = example36(4, 400)
    assert res.k_indices[:4] == (3, 6, 12, 24)
    assert res.ratio_steps()[:3] == [2, 2, 2]
    assert example36(4, 400, logbase=10).k_indices[:3] == (3, 3, 3)


def test_example36_mu_pattern():
    res = example36(4, 30)
    lr = math.log(4)
    assert res.logmu[0] == res.logmu[1] == 0.0
    assert res.logmu[2] == pytest.approx(3 * lr)
    assert res.logmu[3] == pytest.approx(2 * lr)
    assert res.logmu[5] == pytest.approx(6 * lr)
    np.testing.assert_allclose(mu_of(res.M), res.logmu, atol=1e-9)


def test_example36_is_fdb_but_not_log_convex():
    M = example36(4, 300).M
    assert not check_condition(M, "wlc").holds
    assert check_fdb_property(M).holds
    assert check_condition(M, "dc").holds


def test_example36_rejects_small_r():
    with pytest.raises(InputError):
        example36(3.9, 100)


def test_log_gevrey_L_sits_between_gevrey_classes_and_is_non_quasianalytic():
    L = log_gevrey_L(400)
    assert check_relation(make_gevrey(0, 400), L, "triangleleft").holds
    assert check_relation(L, make_gevrey(1, 400), "triangleleft").holds
    _, v = carleman_sums(L)
    assert v.conclusion == "convergent"


def test_characteristic_fn_derivatives_are_bounded():
    res = characteristic_fn(make_gevrey(1, 80), jmax=20)
    assert np.all(res.log_h >= res.log_jfact_m - 1e-9)
    assert res.norm_C < math.inf
    assert res.phase[:4] == (0, 1, 2, 3)


def test_characteristic_fn_needs_wlc():
    with pytest.raises(InputError):
        characteristic_fn(example36(4, 120).M, jmax=10)


def test_interpolation_between_gevrey_classes():
    L, M = make_gevrey(0, 200), make_gevrey(2, 200)
    N1, N2 = interpolate(L, M)
    assert check_relation(L, N1, "lesssim").holds
    assert check_relation(N1, N2, "triangleleft").holds
    assert check_relation(N2, M, "triangleleft").holds
    with pytest.raises(InputError):
        interpolate(M, L)


def test_exp_sum_derivatives_and_envelope():
    logd = exp_sum_derivatives([1.0, 2.0], [1.0, 3.0], 6)
    assert math.exp(logd[2]) == pytest.approx(1 + 2 * 9)
    env = exp_sum_envelope([1.0], [2.0], 1.0, 10)
    assert math.exp(env.log_kfact()[3]) == pytest.approx(8 * math.exp(2))
