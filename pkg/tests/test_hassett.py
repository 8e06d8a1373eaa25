from fractions import Fraction as F

import pytest
from hypothesis import given

from lcmodel import hassett, picard
from lcmodel.combinat import WeightDatum
from lcmodel.hassett import BoundaryKind, HassettClass, HassettError, classify_boundary, hassett_eq
from lcmodel.picard import MznClass, eq

from conftest import weight_data


def test_classify(a_con):
    assert classify_boundary(a_con, {4, 5}) is BoundaryKind.SECTIONAL
    assert classify_boundary(a_con, {1, 2}) is BoundaryKind.CONTRACTED
    assert classify_boundary(a_con, {3, 4, 5}) is BoundaryKind.CONTRACTED
    ones = WeightDatum([1] * 6)
    assert all(classify_boundary(ones, I) is BoundaryKind.NODAL for I in [(1, 2), (1, 2, 3), (2, 6)])


def test_pushforward_generators(a_sec, a_con):
    assert hassett.pushforward(a_con, MznClass.boundary({3, 4, 5}, 5)).is_zero()
    got = hassett.pushforward(a_sec, MznClass.boundary({4, 5}, 5))
    assert got == HassettClass.boundary(a_sec, (4, 5))
    assert got.sec_coeffs and not got.nodal_coeffs


def test_push_psi(a_sec):
    assert hassett.push_psi(a_sec, 4) == HassettClass.psi(a_sec, 4) + HassettClass.boundary(a_sec, (4, 5))
    assert hassett.push_psi(a_sec, 1) == HassettClass.psi(a_sec, 1)
    ones = WeightDatum([1] * 5)
    assert all(hassett.push_psi(ones, i) == HassettClass.psi(ones, i) for i in range(1, 6))


def test_contracted_boundary_has_no_class(a_con):
    with pytest.raises(HassettError):
        HassettClass.boundary(a_con, (3, 4, 5))


def test_pushed_delta_worked_example(a_sec):
    want = hassett.hsum(a_sec, [
        hassett.d_nod(a_sec, -2),
        *(HassettClass.psi(a_sec, i, 2) for i in (1, 2, 3)),
        *(HassettClass.psi(a_sec, i, F(5, 4)) for i in (4, 5)),
        HassettClass.boundary(a_sec, (4, 5), F(1, 2)),
    ])
    assert hassett_eq(a_sec, hassett.pushed_delta(a_sec), want)


def test_trivial_weights():
    A = WeightDatum([1] * 6)
    assert eq(hassett.pullpush_delta(A), picard.delta(A))
    assert hassett.difference_delta(A).is_zero_vector()


def test_difference_examples(a_sec, a_con):
    assert hassett.difference_delta(a_con) == MznClass.boundary({3, 4, 5}, 5, F(1, 4))
    assert hassett.difference_delta(a_sec).is_zero_vector()
    assert eq(hassett.pullpush_delta(a_sec), picard.delta(a_sec))


def test_canonical_class_routes(a_sec, a_con):
    for A in (a_sec, a_con, WeightDatum([1, F(1, 2), F(1, 3), F(1, 3), F(1, 3), F(1, 2)])):
        K = hassett.canonical_K_hassett(A)
        assert hassett_eq(A, K, hassett.pushforward(A, picard.canonical_K(A.n)))
        assert hassett_eq(A, K, hassett.canonical_K_hassett_kappa_form(A))
        assert hassett_eq(A, K, hassett.push_K_from_hassett_formula(A))


def test_identity_examples(a_sec):
    assert hassett.verify_collapse_identity(a_sec, (4, 5)).passed
    assert hassett.verify_collapse_identity(WeightDatum([1] * 5), None).passed
    assert hassett.maximal_collapses(WeightDatum([1] * 5)) == []
    assert hassett.verify_boundary_splitting(WeightDatum([1] * 6), (1, 2, 3)).passed
    assert hassett.verify_boundary_splitting(a_sec, (1, 2)).passed


def test_restriction_sign(a_sec):
    for I in hassett.nodal_labels(a_sec):
        assert hassett.check_self_restriction_sign(a_sec, I, -1)
        assert not hassett.check_self_restriction_sign(a_sec, I, +1)


@given(weight_data(5, 7))
def test_push_of_pullback_is_identity(A):
    gens = [HassettClass.psi(A, i) for i in range(1, A.n + 1)]
    cen = hassett.census(A)
    from lcmodel.combinat import from_mask
    gens += [HassettClass.boundary(A, from_mask(m)) for m in cen.nodal + cen.sectional]
    for g in gens:
        assert hassett_eq(A, hassett.pushforward(A, hassett.pullback(A, g)), g)


@given(weight_data(5, 7))
def test_delta_routes(A):
    assert hassett_eq(A, hassett.pushforward(A, picard.delta(A)), hassett.pushed_delta(A))
    assert eq(hassett.pullback(A, hassett.pushed_delta(A)), hassett.pullpush_delta(A))
    diff = hassett.difference_delta(A)
    assert eq(picard.delta(A) - hassett.pullpush_delta(A), diff)
    assert all(c >= 0 for c in diff.coeffs)


@given(weight_data(5, 6))
def test_collapse_identity_random(A):
    for J in hassett.maximal_collapses(A):
        rep = hassett.verify_collapse_identity(A, J)
        assert rep.passed, rep


def test_hassett_class_guards(a_sec):
    other = WeightDatum([1] * 5)
    with pytest.raises(HassettError):
        HassettClass.psi(a_sec, 1) + HassettClass.psi(other, 1)
    with pytest.raises(HassettError):
        HassettClass.psi(a_sec, 6)
    assert HassettClass.coincident(a_sec, 1, 4).is_zero()
    assert not HassettClass.coincident(a_sec, 4, 5).is_zero()
