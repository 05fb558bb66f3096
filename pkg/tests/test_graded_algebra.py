from fractions import Fraction
from itertools import product
import random

import pytest
from hypothesis import given, settings, strategies as st

from hkrlab.graded_algebra import GradedAlgebra, InvalidPresentation, NotHomogeneous, Presentation
from hkrlab.poly import Poly

from conftest import make


def P(A, src):
    from hkrlab.parsing import parse_poly, to_poly
    names = A.presentation.names
    return to_poly(parse_poly(src, names), names)


def test_weight_basis_examples():
    assert make("Q[x]").weight_basis(3) == [(3,)]
    assert make("Q[x]/(x^3)").weight_basis(3) == []
    assert make("Q[x,y]/(y^2-x^3)").weight_basis(6) == [(3, 0)]


def test_connected():
    for name in ("Q[x]", "Q[x,y]/(x^2,y^2)", "Q[x,y]/(y^2-x^3)"):
        A = make(name)
        assert A.weight_basis(0) == [(0,) * A.nvars]


def test_normal_form_examples():
    A = make("Q[x]/(x^2)")
    assert A.normal_form(P(A, "x^2")) == (2, {})
    B = make("Q[x]")
    assert B.normal_form(P(B, "3*x - x")) == (1, {0: Fraction(2)})
    C = make("Q[x,y]/(y^2-x^3)")
    w, v = C.normal_form(P(C, "y^2"))
    assert w == 6 and C.lift(w, v) == P(C, "x^3")
    assert C.normal_form(Poly.constant(2, 1)) == (0, {0: Fraction(1)})


def test_normal_form_rejects_mixed_weights():
    A = make("Q[x]")
    with pytest.raises(NotHomogeneous):
        A.normal_form(P(A, "x*(x + 1)"))


def test_multiply_examples():
    A = make("Q[x]/(x^2)")
    x = A.normal_form(P(A, "x"))[1]
    assert A.multiply(1, x, 1, x) == {}
    assert A.multiply(0, A.one(), 1, x) == x
    B = make("Q[x,y]")
    s = B.normal_form(P(B, "x + y"))[1]
    d = B.normal_form(P(B, "x - y"))[1]
    assert B.multiply(1, s, 1, d) == B.normal_form(P(B, "x^2 - y^2"))[1]


def test_hilbert_series_examples():
    assert make("Q[x,y]").hilbert_series(3) == [1, 2, 3, 4]
    assert make("Q[x]/(x^3)").hilbert_series(4) == [1, 1, 1, 0, 0]
    assert make("Q[x,y]/(x^2,y^2)").hilbert_series(3) == [1, 2, 1, 0]


def count_monomials(weights, w):
    # brute force over bounded exponent boxes
    ranges = [range(w // wi + 1) for wi in weights]
    return sum(1 for e in product(*ranges) if sum(a * b for a, b in zip(e, weights)) == w)


@pytest.mark.parametrize("weights", [(1,), (1, 1), (1, 2), (2, 3), (1, 1, 2), (3, 2, 1)])
def test_polynomial_hilbert_series_counts_monomials(weights):
    A = GradedAlgebra.polynomial([f"x{i}" for i in range(len(weights))], list(weights))
    assert A.hilbert_series(9) == [count_monomials(weights, w) for w in range(10)]


def test_dim_is_monomials_minus_ideal_rank():
    A = make("Q[x,y]/(x^2,y^2)")
    for w in range(6):
        assert A.dim(w) == count_monomials((1, 1), w) - A.ideal_rank(w)


def test_lift_then_normal_form_is_identity():
    for name in ("Q[x,y]/(y^2-x^3)", "Q[x,y]/(x^2,y^2)", "Q[x]/(x^3)"):
        A = make(name)
        for w in range(8):
            for k in range(A.dim(w)):
                assert A.normal_form(A.lift(w, {k: Fraction(1)}), weight=w) == (w, {k: Fraction(1)})


def test_presentation_validation():
    with pytest.raises(InvalidPresentation):
        Presentation((("x", 1), ("x", 2)))
    with pytest.raises(InvalidPresentation):
        Presentation((("x", 0),))
    with pytest.raises(NotHomogeneous):
        Presentation((("x", 1),), (Poly(1, {(1,): 1, (2,): 1}),))


random_presentations = st.sampled_from([
    ([("x", 1), ("y", 1)], ["x^2 - x*y", "y^3"]),
    ([("x", 1), ("y", 2)], ["x^4 - y^2", "x^2*y"]),
    ([("a", 1), ("b", 1), ("c", 1)], ["a*b - c^2", "a^2 + b^2 + c^2"]),
    ([("x", 2), ("y", 3)], ["y^2 - x^3"]),
    ([("x", 1), ("y", 1)], ["x*y"]),
])


@settings(max_examples=30, deadline=None, derandomize=True)
@given(random_presentations, st.integers(0, 10 ** 6))
def test_multiplication_laws(pres, seed):
    gens, rels = pres
    A = GradedAlgebra.from_strings(gens, rels)
    rng = random.Random(seed)

    def rand_elem(w):
        return {k: Fraction(rng.randint(-3, 3)) for k in range(A.dim(w)) if rng.random() < 0.7}

    for _ in range(5):
        u, v, t = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 2)
        a, b, c = rand_elem(u), rand_elem(v), rand_elem(t)
        a = {k: x for k, x in a.items() if x}
        b = {k: x for k, x in b.items() if x}
        c = {k: x for k, x in c.items() if x}
        assert A.multiply(u, a, v, b) == A.multiply(v, b, u, a)
        assert A.multiply(u + v, A.multiply(u, a, v, b), t, c) == A.multiply(u, a, v + t, A.multiply(v, b, t, c))
        assert A.multiply(0, A.one(), u, a) == a
    # the span of A_v * A_w never exceeds dim A_v * dim A_w (nor dim A_{v+w})
    from hkrlab.exact_linear import RatMatrix, rank
    for v in range(3):
        for w in range(3):
            prods = [A.basis_product(v, i, w, j) for i in range(A.dim(v)) for j in range(A.dim(w))]
            r = rank(RatMatrix.from_columns(A.dim(v + w), prods))
            assert r <= min(A.dim(v) * A.dim(w), A.dim(v + w))
