import pytest

from hkrlab.cotangent import (CotangentComplex, NotCompleteIntersection, cotangent, derived_hkr_check,
                              kaehler_consistency, regular_sequence_check, sym_shift_dims)
from hkrlab.derham import DeRhamAlgebra
from hkrlab.graded_algebra import GradedAlgebra
from hkrlab.hochschild import hkr_check

from conftest import ALGEBRAS, make


def test_regular_sequence_examples():
    assert regular_sequence_check(make("Q[x,y]/(x^2,y^2)"), 6)
    assert regular_sequence_check(make("Q[x]"), 6)
    assert regular_sequence_check(make("Q[x,y]/(y^2-x^3)"), 10)
    bad = GradedAlgebra.from_strings([("x", 1), ("y", 1)], ["x^2", "x*y"])
    assert not regular_sequence_check(bad, 4)
    with pytest.raises(NotCompleteIntersection):
        cotangent(bad, W=4)
    assert cotangent(bad, W=4, override=True).override


def test_dual_numbers_complex():
    L = cotangent(make("Q[x]/(x^2)"))
    assert L.relation_weights == [2]
    # e in weight 2 maps to 2x dx
    d = L.differential_matrix(2)
    assert d.to_dense() == [[2]]
    assert [L.h0_dim(w) for w in range(5)] == [0, 1, 0, 0, 0]
    assert [L.h1_dim(w) for w in range(5)] == [0, 0, 0, 1, 0]


def test_smooth_complex_has_no_h1():
    L = cotangent(make("Q[x]"))
    assert L.r == 0
    assert all(L.h1_dim(w) == 0 for w in range(6))
    assert [L.h0_dim(w) for w in range(4)] == [0, 1, 1, 1]


def test_sym_zero_is_the_algebra():
    for name in ALGEBRAS:
        A = make(name)
        L = cotangent(A)
        for w in range(6):
            assert sym_shift_dims(L, 0, 0, w) == A.dim(w)
            assert all(sym_shift_dims(L, 0, n, w) == 0 for n in range(1, 4))


@pytest.mark.parametrize("name", ["Q[x]", "Q[x,y]"])
def test_smooth_sym_is_forms(name):
    A = make(name)
    L, D = cotangent(A), DeRhamAlgebra(A)
    for p in range(3):
        for n in range(4):
            for w in range(5):
                assert sym_shift_dims(L, p, n, w) == (D.dim(p, w) if n == p else 0)


def test_dual_numbers_sym_one():
    A = make("Q[x]/(x^2)")
    L = cotangent(A)
    for w in range(6):
        assert sym_shift_dims(L, 1, 1, w) == DeRhamAlgebra(A).dim(1, w)
        assert sym_shift_dims(L, 1, 2, w) == L.h1_dim(w)


@pytest.mark.parametrize("name", list(ALGEBRAS))
def test_h0_is_kaehler(name):
    assert all(h0 == om for _, h0, om in kaehler_consistency(make(name), 6))


def test_derived_hkr_examples():
    rep = derived_hkr_check(make("Q[x]/(x^2)"), 3, 5)
    assert rep.ok and "complete intersection" in rep.scope
    assert derived_hkr_check(make("Q[x,y]/(x^2,y^2)"), 2, 3).ok


@pytest.mark.parametrize("name", ["Q[x]", "Q[x,y]"])
def test_derived_agrees_with_hkr_for_smooth(name):
    A = make(name)
    d = derived_hkr_check(A, 2, 4)
    h = hkr_check(A, 2, 4)
    for dr, hr in zip(d.rows, h.rows):
        assert (dr.n, dr.w) == (hr.n, hr.w)
        assert dr.sym_total == hr.omega_dim == dr.hh_dim


def test_generator_permutation_invariance():
    A = GradedAlgebra.from_strings([("x", 2), ("y", 3)], ["y^2 - x^3"])
    B = GradedAlgebra.from_strings([("y", 3), ("x", 2)], ["y^2 - x^3"])
    LA, LB = CotangentComplex(A), CotangentComplex(B)
    for p in range(3):
        for n in range(4):
            for w in range(9):
                assert LA.sym_shift_dim(p, n, w) == LB.sym_shift_dim(p, n, w)
