import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ultraweight.constructions import example36
from ultraweight.fdb import (
    BoundCertificate,
    TruncatedSeries,
    check_fdb_property,
    check_lemma22,
    fdb_closure,
    fdb_closure_oracle,
    fdb_table,
    integer_partitions,
    minimal_certificate,
    series_compose,
    series_compose_oracle,
    verify_prop31_bound,
)
from ultraweight.seq_core import InputError, WeightSeq, make_gevrey

small_logm = arrays(np.float64, st.integers(3, 14), elements=st.floats(-5, 5))
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def test_partition_counts():
    assert [sum(1 for _ in integer_partitions(n)) for n in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


@given(small_logm)
def test_closure_matches_partition_oracle(logm):
    M = WeightSeq(logm)
    K = M.kmax
    np.testing.assert_allclose(fdb_closure(M).logM, fdb_closure_oracle(M, K).logM, atol=1e-12)


@given(small_logm)
def test_reported_partition_attains_the_closure(logm):
    M = WeightSeq(logm)
    table = fdb_table(M)
    for k in range(1, M.kmax + 1):
        j, parts = table.partition(k)
        assert sum(parts) == k and len(parts) == j
        assert logm[j] + sum(logm[a] for a in parts) == pytest.approx(table.closure.logM[k], abs=1e-12)


@given(small_logm)
def test_closure_dominates_the_sequence(logm):
    # the one-part partition gives M_1 M_k
    M = WeightSeq(logm)
    closure = fdb_closure(M)
    assert np.all(closure.logM[1:] >= logm[1] + logm[1:] - 1e-12)


def test_gevrey_closure_is_attained_by_the_trivial_partition():
    for s in (1.0, 2.0):
        G = make_gevrey(s, 40)
        np.testing.assert_allclose(fdb_closure(G).logM, G.logM, atol=1e-9)
        assert check_fdb_property(G).witness["C"] == pytest.approx(1.0)


def test_sufficient_conditions_agree_with_closure_for_gevrey_and_example():
    assert check_lemma22(make_gevrey(1, 60)).consistent
    rep = check_lemma22(example36(4, 200).M)
    assert rep.consistent
    assert not rep.log_convex.holds
    assert rep.fdb.holds


def test_oracle_is_capped():
    with pytest.raises(InputError):
        fdb_closure_oracle(make_gevrey(1, 60), 60)


@given(st.lists(rationals, min_size=7, max_size=7), st.lists(rationals, min_size=7, max_size=7))
def test_horner_composition_matches_faa_di_bruno_sum(fc, gc):
    f = TruncatedSeries(tuple(fc))
    g = TruncatedSeries(tuple(gc))
    assert series_compose(f, g).coeffs == series_compose_oracle(f, g).coeffs


def test_exp_of_exp_minus_one_gives_bell_numbers():
    K = 10
    g = TruncatedSeries.from_values([0] + [Fraction(1, math.factorial(k)) for k in range(1, K + 1)])
    h = series_compose(TruncatedSeries.exp(K), g)
    bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]
    assert [c * math.factorial(k) for k, c in enumerate(h.coeffs)] == bell


def test_composition_bound_for_exp_and_polynomial():
    K = 12
    G = make_gevrey(0, K)
    f = TruncatedSeries.exp(K)
    g = TruncatedSeries.from_values([0, 1, 1], K)
    cf, cg = minimal_certificate(f, G), minimal_certificate(g, G)
    assert verify_prop31_bound(f, cf, g, cg).holds


def test_bad_certificate_is_rejected():
    K = 6
    G = make_gevrey(0, K)
    f = TruncatedSeries.exp(K)
    g = TruncatedSeries.from_values([0, 5], K)
    with pytest.raises(InputError):
        verify_prop31_bound(f, minimal_certificate(f, G), g, BoundCertificate(1.0, 1.0, G))


def test_order_mismatch_is_an_input_error():
    with pytest.raises(InputError):
        series_compose(TruncatedSeries.exp(4), TruncatedSeries.exp(5))
