from fractions import Fraction as F

import pytest
from hypothesis import given

from lcmodel import hassett, lc, picard
from lcmodel.combinat import FCurve, WeightDatum

from conftest import weight_data


def test_definition_direct():
    n = 6
    X = picard.canonical_K(n) + F(1, 2) * picard.total_boundary(n)
    v = lc.is_log_canonical(X)
    assert v.is_log_canonical and v.witness_checked
    assert all(0 <= c <= 1 for c in v.coefficients)


@pytest.mark.parametrize("beta", [F(0), F(1, 3), F(1)])
@pytest.mark.parametrize("n", [5, 6, 7])
def test_controls(n, beta):
    v = lc.is_log_canonical(picard.canonical_K(n) + beta * picard.total_boundary(n))
    assert v.is_log_canonical and v.witness_checked


def test_everything_passes_at_n5():
    # K + D/2 is numerically trivial on M_0,5, so the box K + [0, D] surrounds 0
    assert picard.eq(picard.canonical_K(5) + F(1, 2) * picard.total_boundary(5), picard.MznClass.zero(5))
    assert lc.is_log_canonical(-picard.total_boundary(5)).is_log_canonical


def test_not_log_canonical():
    v = lc.is_log_canonical(-picard.total_boundary(8))
    assert not v.is_log_canonical and v.lp_status == "infeasible"


def test_bounded_lp_value():
    v = lc.is_log_canonical(picard.canonical_K(8) + F(1, 2) * picard.total_boundary(8))
    assert v.is_log_canonical and v.lp_status == "bounded" and v.lp_value == F(11, 4)
    assert v.r == v.lp_value and v.witness_checked


def test_light_points_fail_at_n9():
    A = WeightDatum([1, 1] + [F(1, 100)] * 7)
    assert not lc.is_log_canonical(hassett.pullpush_delta(A)).is_log_canonical
    A = WeightDatum([1, 1] + [F(1, 100)] * 6)
    assert lc.is_log_canonical(hassett.pullpush_delta(A)).is_log_canonical


def test_contracted_fcurves(a_con):
    assert lc.contracted_fcurves(WeightDatum([1] * 6)) == []
    got = set(lc.contracted_fcurves(a_con))
    assert FCurve.from_blocks([[1], [2], [3], [4, 5]], 5) not in got
    assert FCurve.from_blocks([[1], [2], [3, 4], [5]], 5) not in got


def test_simpson_chambers():
    ch = lc.simpson_chamber(6, F(3, 5))
    assert ch.kind == "epsilon" and ch.k == 1 and ch.epsilon_interval == (F(1, 3), F(1, 2))
    ch = lc.simpson_chamber(6, F(1, 2))
    assert ch.kind == "git" and ch.beta_interval == (F(2, 5), F(1, 2))
    assert lc.alpha_to_beta(F(1, 3)) == F(1, 2)
    assert lc.simpson_chamber(6, F(1, 3), "alpha").kind == "git"
    assert lc.simpson_chamber(6, 1).kind == "above-listed-chambers"
    with pytest.raises(ValueError):
        lc.simpson_chamber(6, F(1, 5))


@pytest.mark.parametrize("n", range(5, 13))
def test_simpson_chambers_tile(n):
    # every beta above 2/(n-1) lands in exactly one chamber and the intervals abut
    m = n // 2
    edges = [F(2, n - 1), F(2, m + 1)] + [F(2, m - k + 1) for k in range(1, m - 1)]
    assert edges == sorted(edges)
    for lo, hi in zip(edges, edges[1:]):
        assert lc.simpson_chamber(n, hi).beta_interval == (lo, hi)
        assert lc.simpson_chamber(n, (lo + hi) / 2).beta_interval == (lo, hi)


def test_chamber_walls():
    half = WeightDatum([F(1, 2)] * 5)
    assert sorted(I.members for I in lc.chamber_walls(half)) == [
        (i, j) for i in range(1, 6) for j in range(i + 1, 6)
    ]
    assert lc.chamber_walls(WeightDatum([1] * 5)) == []
    assert [I.members for I in lc.chamber_walls(WeightDatum([1, 1, 1, F(1, 4), F(3, 4)]))] == [(4, 5)]


def test_analyze_trivial():
    an = lc.analyze(WeightDatum([1] * 5))
    assert an.difference.is_zero_vector()
    assert picard.eq(an.pullpush, picard.delta(an.A))
    assert an.fnef.is_fnef and an.fnef.min_value > 0
    assert an.log_canonical.is_log_canonical
    assert an.caveat is None


def test_analyze_contracted(a_con):
    an = lc.analyze(a_con)
    assert an.difference == picard.MznClass.boundary({3, 4, 5}, 5, F(1, 4))
    zeros = {F_ for F_ in picard.context(5).fcurves() if picard.pair_fcurve(an.pullpush, F_) == 0}
    assert zeros == set(lc.contracted_fcurves(a_con)) == set(an.fnef.zero_set)
    assert an.zero_set_agrees


def test_caveat_for_large_n():
    A = WeightDatum([1, 1] + [F(1, 4)] * 6)
    an = lc.analyze(A, check_log_canonical=False)
    assert an.caveat == lc.CONJECTURE_CAVEAT


@given(weight_data(5, 7))
def test_pullpush_is_fnef(A):
    an = lc.analyze(A, check_log_canonical=False)
    assert an.fnef.is_fnef
    assert an.difference_nonnegative and an.difference_on_contracted


@given(weight_data(5, 6))
def test_pullpush_log_canonical_small_n(A):
    v = lc.is_log_canonical(hassett.pullpush_delta(A))
    assert v.is_log_canonical and v.witness_checked
