import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle as O
from jkit.errors import DegreeError, StructuralError
from jkit.exterior import (
    E1Section,
    ExtForm,
    ExtMultivector,
    Form,
    Multivector,
    contract,
    e1_basis,
    evaluate,
    ext_eval,
    ext_pairing,
    ext_partial_eval,
    ext_vector,
    ext_covector,
    interior,
    pair,
    sharp,
    sharp1,
    wedge,
)
from strategies import chart, ext_pairs, forms, multivectors

CH = chart(4)
XS = O.symbols(4)
d = lambda *i: Multivector.basis(CH, *i)
dx = lambda *i: Form.basis(CH, *i)
x = [CH.var(i) for i in range(4)]


def test_basis_sign_and_printing():
    assert d(1, 0) == -d(0, 1)
    assert not d(2, 2)
    assert str(d(0, 1) * x[3] + d(2, 3) * 2) == "(x3)*d0^d1 + 2*d2^d3"
    assert str(-(dx(1, 3))) == "-dx1^dx3"
    assert str(Form.zero(CH, 2)) == "0"


def test_mixed_kinds_rejected():
    with pytest.raises(StructuralError):
        wedge(d(1), dx(3))
    with pytest.raises(StructuralError):
        d(1) + dx(1)


def test_degree_mismatch_rejected():
    with pytest.raises(DegreeError):
        d(0) + d(0, 1)


def test_first_slot_contraction():
    # (i_X w)(Y) = w(X, Y)
    assert interior(d(0), dx(0, 1)) == dx(1)
    assert interior(d(1), dx(0, 1)) == -dx(0)
    assert contract(dx(0), d(0, 1)) == d(1)
    assert evaluate(dx(0, 1), d(0), d(1)) == 1
    assert evaluate(dx(0, 1), d(1), d(0)) == -1


def test_sharp_convention():
    lam = d(0, 1)
    # <beta, Lambda^# alpha> = Lambda(alpha, beta)
    assert sharp1(lam, dx(0)) == d(1)
    assert sharp1(lam, dx(1)) == -d(0)
    # exterior power: d1 ^ (-d0)
    assert sharp(lam, dx(0, 1)) == d(0, 1)


@given(multivectors(CH, 1), forms(CH, 2))
def test_interior_matches_oracle(v, w):
    # dense component oracle
    got = O.tensor_to_dict(interior(v, w), XS)
    want = O.interior(O.tensor_to_dict(v, XS), O.tensor_to_dict(w, XS), 2, 4)
    assert O.same(got, want)


@given(multivectors(CH, 2), forms(CH, 1))
def test_sharp1_matches_oracle(lam, a):
    got = O.tensor_to_dict(sharp1(lam, a), XS)
    assert O.same(got, O.sharp1(O.tensor_to_dict(lam, XS), O.tensor_to_dict(a, XS), 4))


@given(multivectors(CH, 2), forms(CH, 1), forms(CH, 1))
def test_sharp_is_exterior_power(lam, a, b):
    assert sharp(lam, wedge(a, b)) == wedge(sharp1(lam, a), sharp1(lam, b))


@given(multivectors(CH, 1), multivectors(CH, 2), forms(CH, 3))
def test_evaluate_matches_oracle(v, p, w):
    vs = [v, Multivector.basis(CH, 2), Multivector.basis(CH, 3)]
    got = O.coeff_to_sympy(evaluate(w, *vs), XS)
    want = O.evaluate(O.tensor_to_dict(w, XS), [O.tensor_to_dict(u, XS) for u in vs], 4)
    assert got == want


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_wedge_graded_commutative(p, q, data):
    a = data.draw(forms(CH, p))
    b = data.draw(forms(CH, q))
    assert wedge(a, b) == wedge(b, a) * (-1) ** (p * q)


@given(forms(CH, 1), forms(CH, 2), forms(CH, 1))
def test_wedge_associative_and_oracle(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    got = O.tensor_to_dict(wedge(a, b), XS)
    assert O.same(got, O.wedge(O.tensor_to_dict(a, XS), O.tensor_to_dict(b, XS)))


@given(multivectors(CH, 1), forms(CH, 1), forms(CH, 2))
def test_interior_is_antiderivation(v, a, b):
    assert interior(v, wedge(a, b)) == wedge(interior(v, a), b) - wedge(a, interior(v, b))


def test_pair_determinant_convention():
    assert pair(dx(0, 1), d(0, 1)) == 1
    assert pair(dx(0, 1), d(1, 0)) == -1


@given(ext_pairs(CH, ExtForm, 2), ext_pairs(CH, ExtMultivector, 2))
def test_aug_round_trip(w, p):
    assert ExtForm.from_aug(w.aug()) == w
    assert ExtMultivector.from_aug(p.aug()) == p


def test_ext_pairing_and_evaluation():
    v = ext_vector(d(0) * x[1], 2)
    a = ext_covector(dx(0), 3)
    # alpha(X) + g f
    assert ext_pairing(a, v) == x[1] + 6
    eta, xi = dx(0, 1), dx(2)
    w = ExtForm(eta, xi)
    v1, v2 = ext_vector(d(0), 1), ext_vector(d(1) + d(2), 0)
    # eta(X1, X2) + f1 xi(X2) - f2 xi(X1)
    assert ext_eval(w, v1, v2) == 2
    assert ext_partial_eval(w, v1) == ExtForm(dx(1) + dx(2), Form.scalar(CH, 0))


def test_e1_basis_and_printing():
    b = e1_basis(CH)
    assert len(b) == 2 * (CH.dim + 1)
    assert str(b[0]) == "section(pair(d0, 0), pair(0, 0))"
    assert str(E1Section.zero(CH)) == "section(pair(0, 0), pair(0, 0))"
