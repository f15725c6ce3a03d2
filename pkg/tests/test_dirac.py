import pytest
from hypothesis import given

from jkit.calculus import d_01, de_rham, differential, schouten
from jkit.dirac import (
    LIFT_VARIANTS,
    CourantSection,
    CourantShift,
    GaugeElement,
    GraphBivector,
    GraphFlat,
    GraphSharp,
    GraphTwoForm,
    HomogPoisson,
    Tlcs,
    TwistData,
    check_closure,
    check_courant_jacobi_axioms,
    check_gauge_proposition,
    check_lift,
    courant_bracket,
    courant_dirac_closure,
    courant_pairing,
    d_theta,
    e1_bracket,
    gauge_section,
    gauged_twist,
    pairing,
    twisted_bracket,
)
from jkit.errors import DegreeError, UsageError
from jkit.exterior import E1Section, Form, Multivector, e1_basis
from jkit.fixtures import example3, homogeneous_plane, lie_poisson_so3, negative, tlcs_r4
from jkit.jacobi import poissonize, tlcs_to_twisted_jacobi
from strategies import chart, forms, multivectors, polys

CH = chart(3)
x = [CH.var(i) for i in range(3)]
MULTS = x


def sec(X=None, f=0, a=None, g=0, ch=CH):
    X = Multivector.zero(ch, 1) if X is None else X
    a = Form.zero(ch, 1) if a is None else a
    return E1Section.make(X, f, a, g)


def test_pairings():
    e1 = sec(Multivector.basis(CH, 0), 1, Form.basis(CH, 1), 2)
    e2 = sec(Multivector.basis(CH, 1), 3, Form.basis(CH, 0) * x[2], 0)
    # (e1, e2)_+ = 1/2 (alpha1(X2) + g1 f2 + alpha2(X1) + g2 f1)
    assert pairing(e1, e2) == (1 + 6 + x[2]) / 2
    assert pairing(e1, e2, "minus") == (1 + 6 - x[2]) / 2
    with pytest.raises(UsageError):
        pairing(e1, e2, "other")


def test_bracket_on_vector_parts():
    X, Y = Multivector.basis(CH, 0) * x[1], Multivector.basis(CH, 1) * x[0]
    b = e1_bracket(sec(X), sec(Y))
    assert b == sec(schouten(X, Y))


def test_d_theta():
    f = x[0] * x[1]
    assert d_theta(CH, f) == sec(a=differential(CH, f), g=f)


@given(multivectors(CH, 1), polys(CH), forms(CH, 1), polys(CH), multivectors(CH, 1), polys(CH), forms(CH, 1), polys(CH))
def test_bracket_is_skew(X1, f1, a1, g1, X2, f2, a2, g2):
    e1, e2 = sec(X1, f1, a1, g1), sec(X2, f2, a2, g2)
    tw = TwistData.exact(Form.basis(CH, 0, 1) * x[2])
    assert twisted_bracket(e1, e2, tw) == -twisted_bracket(e2, e1, tw)


def test_courant_jacobi_axioms_closed_twist():
    tw = TwistData.exact(Form.basis(CH, 0, 1) * x[2])
    r = check_courant_jacobi_axioms(tw, e1_basis(CH), [CH.one()] + x)
    assert r.passed, r.summary()


def test_courant_jacobi_axiom_i_defect_for_open_twist():
    tw = TwistData(Form.zero(CH, 3), Form.basis(CH, 0, 1) * x[2])
    r = check_courant_jacobi_axioms(tw, e1_basis(CH), [CH.one()] + x)
    assert not r.residual("axiom_i").zero
    assert r.residual("axiom_i_defect").zero
    for label in ("skew", "axiom_ii", "axiom_iii", "axiom_iv"):
        assert r.residual(label).zero


def test_axioms_need_test_data():
    with pytest.raises(UsageError):
        check_courant_jacobi_axioms(TwistData.zero(CH), [], [CH.one()])


def test_twist_degrees():
    with pytest.raises(DegreeError):
        TwistData(Form.zero(CH, 2), Form.zero(CH, 2))


# -- sub-bundles ----------------------------------------------------------------------

def test_graph_sharp_generators_are_members():
    s = example3()
    L = GraphSharp(s.lam, s.e)
    assert len(L.generators()) == s.chart.dim + 1
    assert all(L.contains(g) for g in L.generators())
    assert not L.contains(sec(Multivector.basis(s.chart, 0), ch=s.chart))


def test_graph_sharp_closure_example3_and_negative():
    s, n = example3(), negative()
    assert check_closure(GraphSharp(s.lam, s.e), TwistData.exact(s.omega)).passed
    r = check_closure(GraphSharp(n.lam, n.e), TwistData.exact(n.omega))
    assert not r.passed
    assert r.residual("isotropy").zero and r.residual("rank").zero


def test_graph_sharp_restricted_jacobi():
    s = example3()
    r = check_closure(GraphSharp(s.lam, s.e), TwistData.exact(s.omega), jacobi=True)
    assert r.residual("restricted_jacobi").zero


def test_graph_flat():
    gam = Form.basis(CH, 0) * x[1] * x[2]
    om = Form.basis(CH, 1, 2) * x[0]
    good = GraphFlat(de_rham(gam) - om, gam)
    assert check_closure(good, TwistData.exact(om), MULTS).passed
    bad = GraphFlat(de_rham(gam) - om + Form.basis(CH, 0, 1) * x[2], gam)
    assert not check_closure(bad, TwistData.exact(om), MULTS).passed


def test_courant_shift():
    om = Form.basis(CH, 0, 1) * x[2]
    so3 = GraphBivector(lie_poisson_so3().lam)
    assert courant_dirac_closure(so3).passed
    assert check_closure(CourantShift(so3, om), TwistData.exact(om), MULTS).passed
    closed = GraphTwoForm(de_rham(Form.basis(CH, 0) * x[1] * x[2]))
    assert check_closure(CourantShift(closed, om), TwistData.exact(om), MULTS).passed
    open_form = GraphTwoForm(om)
    assert not courant_dirac_closure(open_form).passed
    assert not check_closure(CourantShift(open_form, om), TwistData.exact(om), MULTS).passed


def test_tlcs_bundle_is_graph_of_converted_structure():
    t = tlcs_r4()
    j = tlcs_to_twisted_jacobi(t)
    b = Tlcs(t.theta, t.lee, t.omega)
    assert all(GraphSharp(j.lam, j.e).contains(g) for g in b.generators())
    assert check_closure(b, TwistData.exact(t.omega)).passed


def test_homog_bundle_of_poissonization():
    p = poissonize(example3())
    lf = p.chart
    r = check_closure(HomogPoisson(p.lam, p.z, p.omega), TwistData.exact(p.omega),
                      fn_multipliers=[lf.var(0), lf.var(5)])
    assert r.passed, r.summary()


def test_homog_bundle_needs_z_to_kill_omega():
    # The plane fixture satisfies all homogeneity conditions, but i_Z omega != 0 and closure fails.
    h = homogeneous_plane()
    r = check_closure(HomogPoisson(h.lam, h.z, h.omega), TwistData.exact(h.omega))
    assert r.residual("isotropy").zero and r.residual("generator_membership").zero
    assert not r.residual("closure").zero
    assert r.residual("closure").value == [0, 1]


# -- gauge transformations ----------------------------------------------------------

def test_gauge_by_omega_untwists_example3():
    s = example3()
    g = GaugeElement(s.omega, Form.zero(s.chart, 1))
    tw = TwistData.exact(s.omega)
    assert gauged_twist(tw, g) == TwistData.zero(s.chart)
    r = check_gauge_proposition(GraphSharp(s.lam, s.e), g, tw)
    assert r.passed, r.summary()


def test_gauge_with_closed_element():
    s = example3()
    ch = s.chart
    gam = Form.basis(ch, 0) * ch.var(2) + Form.basis(ch, 4) * ch.var(1)
    g = GaugeElement(de_rham(gam), gam)
    assert not d_01(g.ext)
    r = check_gauge_proposition(GraphSharp(s.lam, s.e), g, TwistData.exact(s.omega))
    assert r.passed, r.summary()


def test_gauge_section_formula():
    eta, gamma = Form.basis(CH, 0, 1), Form.basis(CH, 2)
    e = sec(Multivector.basis(CH, 0), 1)
    # e + (i_X eta + f gamma, -i_X gamma)
    assert gauge_section(e, GaugeElement(eta, gamma)) == sec(Multivector.basis(CH, 0), 1, Form.basis(CH, 1) + gamma, 0)
    with pytest.raises(DegreeError):
        GaugeElement(gamma, gamma)


# -- lifts to M x R ------------------------------------------------------------------

def test_courant_bracket_basics():
    lf = CH.lifted()
    X = Multivector.basis(lf, 0) * lf.var(1)
    s1 = CourantSection(X, Form.zero(lf, 1))
    s2 = CourantSection(Multivector.zero(lf, 1), Form.basis(lf, 0))
    assert courant_pairing(s1, s2) == lf.var(1) / 2
    # L_X dx0 + d(-x1/2) = dx1 - dx1/2
    assert courant_bracket(s1, s2) == CourantSection(Multivector.zero(lf, 1), Form.basis(lf, 1) / 2)
    assert not courant_bracket(s1, s1)


@pytest.mark.parametrize("variant", LIFT_VARIANTS)
def test_lifts(variant):
    s, n = example3(), negative()
    assert check_lift(GraphSharp(s.lam, s.e), TwistData.exact(s.omega), variant).passed
    assert not check_lift(GraphSharp(n.lam, n.e), TwistData.exact(n.omega), variant).passed


def test_lift_variant_name_checked():
    s = example3()
    with pytest.raises(UsageError):
        check_lift(GraphSharp(s.lam, s.e), TwistData.exact(s.omega), "sideways")
