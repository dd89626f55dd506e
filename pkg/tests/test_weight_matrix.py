import numpy as np
import pytest

from ultraweight.seq_core import InputError, make_gevrey
from ultraweight.weight_fn import linear_cutoff
from ultraweight.weight_matrix import (
    check_matrix_condition,
    check_matrix_relation,
    explicit_matrix,
    gevrey_matrix,
    matrix_from_omega,
    roots_almost_increasing_matrix,
)

K = 120


@pytest.fixture(scope="module")
def G():
    return gevrey_matrix([0.5, 1.0, 2.0], K)


@pytest.fixture(scope="module")
def W():
    return matrix_from_omega(linear_cutoff(), (0.5, 1.0, 2.0, 4.0), K)


@pytest.mark.parametrize("cond", ["dc", "mg", "alg", "FdB", "BR", "L"])
@pytest.mark.parametrize("flavor", ["roumieu", "beurling"])
def test_gevrey_matrix_conditions(G, cond, flavor):
    assert check_matrix_condition(G, cond, flavor).holds


def test_gevrey_matrix_root_conditions(G):
    for cond in ("H", "Cw_beurling", "Cw_roumieu"):
        assert check_matrix_condition(G, cond).holds


@pytest.mark.parametrize("cond", ["dc", "mg", "alg", "FdB"])
def test_omega_matrix_conditions(W, cond):
    assert check_matrix_condition(W, cond, "roumieu").holds
    assert check_matrix_condition(W, cond, "beurling").holds


def test_linear_cutoff_matrix_lacks_strict_inclusions(W):
    assert not check_matrix_condition(W, "BR", "roumieu").holds


def test_singleton_without_generator_falls_back_to_itself():
    X = explicit_matrix([1.0], [make_gevrey(1, K)])
    v = check_matrix_condition(X, "FdB", "roumieu")
    assert v.holds
    assert v.witness["assignments"][0]["mu"] == 1.0


def test_relations_between_gevrey_matrices(G):
    bigger = gevrey_matrix([2.5, 3.0], K)
    assert check_matrix_relation(G, bigger, "triangleleft_roumieu").holds
    assert check_matrix_relation(G, bigger, "lesssim_roumieu").holds
    assert not check_matrix_relation(bigger, G, "lesssim_roumieu").holds
    same = check_matrix_relation(G, G, "lesssim_beurling")
    assert [r["mu"] for r in same.witness["assignments"]] == [0.5, 1.0, 2.0]


def test_roots_almost_increasing(G):
    assert roots_almost_increasing_matrix(G).holds
    assert roots_almost_increasing_matrix(G, "beurling", regularize=True).holds


def test_matrix_validation():
    with pytest.raises(InputError):
        explicit_matrix([1.0, 0.5], [make_gevrey(1, 20), make_gevrey(2, 20)])
    with pytest.raises(InputError):
        explicit_matrix([1.0, 2.0], [make_gevrey(2, 20), make_gevrey(1, 20)])
    with pytest.raises(InputError):
        check_matrix_condition(gevrey_matrix([1.0], 20), "nope")


def test_member_generation(G):
    np.testing.assert_allclose(G.member(1.5).logM, make_gevrey(1.5, K).logM)
    X = explicit_matrix([1.0], [make_gevrey(1, 20)])
    with pytest.raises(InputError):
        X.member(2.0)
