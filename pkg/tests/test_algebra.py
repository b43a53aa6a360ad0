from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotband.algebra import (
    Cyclo12,
    GoldenValue,
    LaurentPoly,
    classify_cyclo,
    classify_golden,
    determinant,
    eval_cyclo12,
    eval_golden,
    eval_t_i,
    eval_t_minus_one,
    matmul,
    smith_normal_form,
    symmetric_signature,
)

polys = st.dictionaries(st.integers(-8, 8), st.integers(-20, 20), max_size=6).map(LaurentPoly)
small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)
square = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


# -- Laurent polynomials ------------------------------------------------------


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly()


@given(polys, st.integers(-5, 5))
def test_divide_exact_inverts_multiplication(a, k):
    b = LaurentPoly({k: 1, k + 1: -2, k + 3: 1})
    assert (a * b).divide_exact(b) == a


def test_divide_exact_rejects_remainder():
    with pytest.raises(ValueError):
        LaurentPoly({0: 1, 1: 1}).divide_exact(LaurentPoly({0: 2}))


@given(polys)
def test_invert_variable_is_involution(a):
    assert a.invert_variable().invert_variable() == a


def test_negative_power_keeps_integers():
    p = LaurentPoly({2: -1}) ** -3
    assert p == LaurentPoly({-6: -1})
    assert all(isinstance(c, int) for _, c in p.items())


def test_render_half_integer_exponents():
    v = LaurentPoly({-8: -1, -6: 1, -2: 1}, var="q")
    assert v.render("t", exponent_scale=Fraction(1, 2)) == "-t^(-4) + t^(-3) + t^(-1)"
    assert LaurentPoly({1: 1}).render("t", exponent_scale=Fraction(1, 2)) == "t^(1/2)"
    assert LaurentPoly().render("z") == "0"


# -- quotient rings -------------------------------------------------------------


def test_cyclo12_relations():
    x = Cyclo12.gen()
    assert x ** 12 == Cyclo12.from_int(1)
    assert x ** 6 == Cyclo12.from_int(-1)
    w = Cyclo12.omega()
    assert w * w - w + Cyclo12.from_int(1) == Cyclo12.from_int(0)
    assert Cyclo12.i() * Cyclo12.i() == Cyclo12.from_int(-1)
    assert Cyclo12.sqrt3() * Cyclo12.sqrt3() == Cyclo12.from_int(3)
    assert x * x.inverse() == Cyclo12.from_int(1)


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_cyclo12_norm_multiplicative(a, b):
    u, v = Cyclo12(a), Cyclo12(b)
    uv = u * v
    assert uv * uv.conjugate() == (u * u.conjugate()) * (v * v.conjugate())
    assert uv.conjugate() == u.conjugate() * v.conjugate()


def test_cyclo_render_and_classify():
    i_sqrt3 = Cyclo12.i() * Cyclo12.sqrt3()
    assert (-i_sqrt3).render() == "-i*sqrt3"
    assert Cyclo12.from_int(3).render() == "3"
    assert Cyclo12.from_int(-1).render() == "-1"
    assert classify_cyclo(i_sqrt3, 1).delta == 1
    assert classify_cyclo(Cyclo12.from_int(3), 1).delta == 2
    assert classify_cyclo(Cyclo12.from_int(2), 1) is None


def test_golden_value():
    s = GoldenValue.sqrt5()
    assert s * s == GoldenValue.from_int(5)
    assert classify_golden(-(s * s)) == (-1, 2)
    assert classify_golden(GoldenValue.from_int(2)) is None
    assert (-(s * s)).render() == "-sqrt5^2"


def test_special_evaluations_of_trefoil():
    # left-handed trefoil in q = t^(1/2): -t^-4 + t^-3 + t^-1
    v = LaurentPoly({-8: -1, -6: 1, -2: 1})
    assert eval_t_minus_one(v) == (-3, 0)
    assert eval_t_i(v) == (-1, 0)
    assert eval_cyclo12(v) == -(Cyclo12.i() * Cyclo12.sqrt3())
    q = LaurentPoly({0: -3, 1: 2, 2: 2}, var="z")
    assert eval_golden(q) == GoldenValue.from_int(-1)


# -- integer matrices ------------------------------------------------------------


def _unimodular(m):
    return abs(determinant([list(r) for r in m])) == 1


@settings(max_examples=150)
@given(small_matrices)
def test_smith_normal_form(m):
    res = smith_normal_form(m)
    d = matmul(matmul([list(r) for r in res.left], m), [list(r) for r in res.right])
    for i, row in enumerate(d):
        for j, v in enumerate(row):
            assert v == (res.factors[i] if i == j else 0)
    assert _unimodular(res.left) and _unimodular(res.right)
    nz = [f for f in res.factors if f]
    assert all(f > 0 for f in nz)
    assert all(b % a == 0 for a, b in zip(res.factors, res.factors[1:]) if a)
    # zeros come last
    assert res.factors[len(nz):] == tuple(0 for _ in res.factors[len(nz):])


@settings(max_examples=150)
@given(square)
def test_determinant_matches_snf(m):
    res = smith_normal_form(m)
    prod = 1
    for f in res.factors:
        prod *= f
    assert abs(determinant(m)) == prod


def test_snf_known_examples():
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).factors == (2, 6, 12)
    assert smith_normal_form([[3]]).nontrivial() == [3]
    assert smith_normal_form([[1, 0], [0, 0]]).nontrivial() == [0]


@given(square)
def test_signature_bounds(m):
    sym = [[m[i][j] + m[j][i] for j in range(len(m))] for i in range(len(m))]
    s = symmetric_signature(sym)
    assert abs(s) <= len(m)
    assert symmetric_signature([[-x for x in r] for r in sym]) == -s


def test_signature_examples():
    assert symmetric_signature([[2, 1], [1, 2]]) == 2
    assert symmetric_signature([[0, 1], [1, 0]]) == 0
    assert symmetric_signature([[-3]]) == -1
    with pytest.raises(ValueError):
        symmetric_signature([[0, 1], [2, 0]])
