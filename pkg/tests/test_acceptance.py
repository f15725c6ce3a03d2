"""The twelve acceptance criteria, each exact (tolerance zero).

Every test records its outcome; the summary hook in conftest prints one
PASS/FAIL line per criterion at the end of the run.
"""

import json
import random
import subprocess
import sys
from importlib import resources
from itertools import combinations

import jsonschema
import pytest

from acceptance_log import criterion
from jkit.algebroid import (
    CotangentAlgebroid,
    QuasiJacobiData,
    check_cotangent_algebroid,
    check_differentials,
    check_double_courant_jacobi,
    check_quasi_jacobi,
    d_star_omega,
)
from jkit.calculus import d_01, de_rham, lie_derivative, schouten, sharp_tensor_one
from jkit.chart import Chart
from jkit.coeff import Polynomial
from jkit.dirac import (
    LIFT_VARIANTS,
    GaugeElement,
    GraphSharp,
    TwistData,
    check_closure,
    check_gauge_proposition,
    check_lift,
    d_theta,
    gauge_section,
    gauged_twist,
    pairing_plus,
    twisted_bracket,
)
from jkit.exterior import (
    ExtForm,
    ExtMultivector,
    Form,
    Multivector,
    e1_basis,
    ext_basis_vectors,
    ext_eval,
    ext_pairing,
    sharp,
    wedge,
)
from jkit.fixtures import contact_r3, example3, lie_poisson_so3, negative, twisted_poisson_r3
from jkit.jacobi import TwistedJacobiStructure, check_homogeneous_twisted_poisson, check_twisted_jacobi, poissonize


def categories(report) -> set[str]:
    return {r.label.split(" [", 1)[0] for r in report.residuals}


def coords(n: int) -> Chart:
    return Chart.coords(*[f"x{i}" for i in range(n)])


# -- seeded random inputs -------------------------------------------------------

def rpoly(rng, ch, max_degree=1):
    n = len(ch.names)
    terms = {}
    for _ in range(rng.randint(1, 3)):
        e = [0] * n
        if max_degree and rng.random() < 0.6:
            e[rng.randrange(n)] = 1
        terms[tuple(e)] = rng.choice([-2, -1, 1, 2, 3])
    return ch.coerce(Polynomial(ch.names, terms))


def rconst(rng, ch):
    return ch.const(rng.choice([-2, -1, 1, 2, 3]))


def rtensor(rng, ch, cls, k, density=0.5, coeff=rpoly):
    out = cls.zero(ch, k)
    for key in combinations(range(ch.dim), k):
        if rng.random() < density:
            out = out + cls.basis(ch, *key) * coeff(rng, ch)
    return out


def rnonzero(rng, ch, cls, k):
    t = rtensor(rng, ch, cls, k)
    while not t:
        t = rtensor(rng, ch, cls, k)
    return t


def random_structure(rng, n):
    ch = coords(n)
    return TwistedJacobiStructure(rnonzero(rng, ch, Multivector, 2), rnonzero(rng, ch, Multivector, 1),
                                  rnonzero(rng, ch, Form, 2))


def permute(s: TwistedJacobiStructure, p) -> TwistedJacobiStructure:
    """Relabel axis ``i`` as ``p[i]``, coefficients included."""
    ch = s.chart

    def coeff(c):
        terms = {}
        for exps, v in c.sorted_terms():
            e = [0] * len(exps)
            for i, k in enumerate(exps):
                e[p[i]] = k
            terms[tuple(e)] = v
        return ch.coerce(Polynomial(ch.names, terms))

    def move(t):
        out = type(t).zero(ch, t.degree)
        for key, c in t.terms.items():
            out = out + type(t).basis(ch, *[p[i] for i in key]) * coeff(c)
        return out
    return TwistedJacobiStructure(move(s.lam), move(s.e), move(s.omega))


def rescale(s: TwistedJacobiStructure, c: int) -> TwistedJacobiStructure:
    """``(c L, c E, omega / c)`` is twisted Jacobi whenever ``(L, E, omega)`` is."""
    return TwistedJacobiStructure(s.lam * c, s.e * c, s.omega / c)


VALID = [example3, contact_r3, lie_poisson_so3, twisted_poisson_r3]


def family(rng, kind, n):
    ch = coords(n)
    zero2 = Form.zero(ch, 2)
    if kind == "random":
        return random_structure(rng, n)
    if kind == "constant_twisted_poisson":
        return TwistedJacobiStructure(rtensor(rng, ch, Multivector, 2, 0.7, rconst), Multivector.zero(ch, 1),
                                      rtensor(rng, ch, Form, 2, 0.7, rconst))
    if kind == "trivector_only":
        # constant (L, E): [E, L] = 0 but E^L rarely vanishes
        return TwistedJacobiStructure(rtensor(rng, ch, Multivector, 2, 0.7, rconst),
                                      rtensor(rng, ch, Multivector, 1, 0.7, rconst), zero2)
    if kind == "bivector_only":
        # L = c di^dj, E = (a xi + b) di: E^L = 0, [L, L] = 0, [E, L] = -a L
        i, j = sorted(rng.sample(range(n), 2))
        a, b = rng.choice([-2, -1, 1, 2]), rng.choice([-1, 0, 1])
        e = Multivector.basis(ch, i) * (ch.var(i) * a + b)
        return TwistedJacobiStructure(Multivector.basis(ch, i, j) * rng.choice([1, 2, -3]), e, zero2)
    if kind == "valid_relabelled":
        s = rng.choice([f for f in VALID if f().chart.dim == n] or [contact_r3])()
        p = list(range(s.chart.dim))
        rng.shuffle(p)
        return rescale(permute(s, p), rng.choice([-2, -1, 2, 3]))
    raise ValueError(kind)


# -- 1 --------------------------------------------------------------------------

@criterion(1, "reference structure values and check_twisted_jacobi")
def test_c01_example3():
    s = example3()
    ch = s.chart
    d = lambda *i: Multivector.basis(ch, *i)
    assert schouten(s.lam, s.lam) + wedge(s.e, s.lam) * 2 == d(0, 1, 3) * 2
    assert not schouten(s.e, s.lam)
    assert sharp(s.lam, s.omega) == d(1, 3)
    assert not sharp_tensor_one(s.lam, s.omega, s.e)
    r = check_twisted_jacobi(s)
    assert r.passed, r.summary()
    assert categories(r) == {"trivector", "bivector", "extended", "route_agreement"}


# -- 2 --------------------------------------------------------------------------

@criterion(2, "extended residual vanishes iff trivector and bivector residuals vanish")
def test_c02_component_equivalence():
    rng = random.Random(20210302)
    kinds = ["random", "constant_twisted_poisson", "trivector_only", "bivector_only", "valid_relabelled"]
    seen = set()
    count = 0
    for trial in range(60):
        n = 3 + trial % 3
        s = family(rng, kinds[trial % len(kinds)], n)
        r = check_twisted_jacobi(s)
        ext = r.residual("extended").zero
        tri, bi = r.residual("trivector").zero, r.residual("bivector").zero
        assert ext == (tri and bi), (trial, r.summary())
        assert r.residual("route_agreement").zero
        seen.add((tri, bi))
        count += 1
    assert count >= 50
    # both directions exercised, and each component can fail on its own
    assert seen == {(True, True), (False, True), (True, False), (False, False)}


# -- 3 --------------------------------------------------------------------------

@criterion(3, "d01(phi, omega) = 0 iff phi = d omega on a degree-(3,2) basis, dim 4")
def test_c03_closed_lemma():
    ch = coords(4)
    mons = [ch.one()] + ch.variables()
    basis = [ExtForm(Form.basis(ch, *I) * c, Form.zero(ch, 2)) for I in combinations(range(4), 3) for c in mons]
    basis += [ExtForm(Form.zero(ch, 3), Form.basis(ch, *J) * c) for J in combinations(range(4), 2) for c in mons]
    assert len(basis) == 50
    candidates = basis + [a + b for a, b in combinations(basis, 2)] + [a - b for a, b in combinations(basis, 2)]
    closed = 0
    for w in candidates:
        lhs = not d_01(w)
        rhs = w.first == de_rham(w.second)
        assert lhs == rhs, str(w)
        closed += lhs
    assert 0 < closed < len(candidates)


# -- 4 --------------------------------------------------------------------------

@criterion(4, "Poissonization of the reference structure and homogeneity on random inputs")
def test_c04_poissonization():
    r = check_homogeneous_twisted_poisson(poissonize(example3()))
    assert r.passed, r.summary()
    assert categories(r) == {"twisted_poisson", "homogeneous_bivector", "homogeneous_form"}
    rng = random.Random(4)
    for trial in range(20):
        h = poissonize(random_structure(rng, 3 + trial % 2))
        dt = Multivector.basis(h.chart, h.chart.tvar)
        assert h.lam and h.omega
        assert schouten(dt, h.lam) == -h.lam
        assert lie_derivative(dt, h.omega) == h.omega


# -- 5 --------------------------------------------------------------------------

@criterion(5, "closure of graph (L,E)^# matches check_twisted_jacobi")
def test_c05_graph_closure():
    rng = random.Random(5)
    cases = [example3(), negative()]
    for trial in range(24):
        kind = ["valid_relabelled", "random", "trivector_only", "bivector_only", "valid_relabelled",
                "constant_twisted_poisson"][trial % 6]
        s = family(rng, kind, 3 + trial % 2)
        if trial % 4 == 0:
            # perturb a valid fixture: usually breaks it
            s = TwistedJacobiStructure(s.lam + Multivector.basis(s.chart, 0, 1) * s.chart.var(2), s.e, s.omega)
        cases.append(s)
    outcomes = []
    for s in cases:
        tj = check_twisted_jacobi(s).passed
        cl = check_closure(GraphSharp(s.lam, s.e), TwistData.exact(s.omega)).passed
        assert tj == cl, str(s.lam)
        outcomes.append(tj)
    assert outcomes[:2] == [True, False]
    assert outcomes.count(True) >= 5 and outcomes.count(False) >= 5


# -- 6 --------------------------------------------------------------------------

@criterion(6, "Jacobiator defect of an open twist equals -d01(0, omega) on all coordinate triples")
def test_c06_axiom_i_defect():
    ch = coords(3)
    omega = Form.basis(ch, 0, 1) * ch.var(2) + Form.basis(ch, 1, 2) * ch.var(0)
    assert de_rham(omega)
    tw = TwistData(Form.zero(ch, 3), omega)
    four = -d_01(tw.ext)
    br = lambda a, b: twisted_bracket(a, b, tw)
    secs = e1_basis(ch)
    probes = ext_basis_vectors(ch)
    nonzero = 0
    for e1, e2, e3 in combinations(secs, 3):
        b12, b23, b31 = br(e1, e2), br(e2, e3), br(e3, e1)
        jac = br(b12, e3) + br(b23, e1) + br(b31, e2)
        t = (pairing_plus(b12, e3) + pairing_plus(b23, e1) + pairing_plus(b31, e2)) / 3
        defect = jac - d_theta(ch, t)
        assert not defect.vec
        for p in probes:
            assert ext_pairing(defect.cov, p) == ext_eval(four, e1.vec, e2.vec, e3.vec, p)
        nonzero += bool(defect.cov)
    assert nonzero > 0


# -- 7 --------------------------------------------------------------------------

def _group_law(L, g1, g2):
    for e in L.generators():
        once = gauge_section(e, g2)
        assert once.vec == e.vec
        assert gauge_section(once, g1) == gauge_section(e, g1 + g2)


@criterion(7, "gauge suite on the reference structure: g = (omega, 0) and ten d01-closed g")
def test_c07_gauge():
    s = example3()
    ch = s.chart
    L = GraphSharp(s.lam, s.e)
    tw = TwistData.exact(s.omega)
    g0 = GaugeElement(s.omega, Form.zero(ch, 1))
    assert gauged_twist(tw, g0) == TwistData.zero(ch)
    r = check_gauge_proposition(L, g0, tw)
    assert r.passed, r.summary()
    assert {"anchor", "group_law", "intertwining"} <= categories(r)
    rng = random.Random(7)
    prev = g0
    for _ in range(10):
        gamma = rtensor(rng, ch, Form, 1, 0.6)
        if not gamma:
            gamma = Form.basis(ch, 0) * ch.var(1)
        g = GaugeElement(de_rham(gamma), gamma)
        assert not d_01(g.ext)
        assert gauged_twist(tw, g) == tw
        r = check_gauge_proposition(L, g, tw)
        assert r.passed, r.summary()
        _group_law(L, g, prev)
        prev = g


# -- 8 --------------------------------------------------------------------------

@criterion(8, "cotangent algebroid of the reference structure, cocycle and two-route differentials")
def test_c08_algebroid():
    s = example3()
    ch = s.chart
    ca = CotangentAlgebroid(s)
    r = check_cotangent_algebroid(ca)
    assert r.passed, r.summary()
    assert {"jacobi", "jacobi_scaled"} <= categories(r)
    w = ExtMultivector(-s.e, Multivector.zero(ch, 0))
    assert d_star_omega(ca, w) == ExtMultivector.zero(ch, 2)
    r = check_differentials(QuasiJacobiData(s))
    assert r.passed, r.summary()
    assert "route_bracket" in categories(r)


# -- 9 --------------------------------------------------------------------------

@criterion(9, "quasi-Jacobi conditions 1-6 for the reference structure")
def test_c09_quasi_jacobi():
    r = check_quasi_jacobi(QuasiJacobiData(example3()))
    assert r.passed, r.summary()
    assert {"c1_leibniz", "c2_anchor", "c3_jacobiator", "c4_cocycle", "c5_closed",
            "c6_functions", "c6_section_function", "c6_sections"} <= categories(r)


# -- 10 -------------------------------------------------------------------------

@criterion(10, "double of the reference structure and the omega = 0 contact case are Courant-Jacobi")
def test_c10_double():
    for s in (example3(), contact_r3()):
        r = check_double_courant_jacobi(QuasiJacobiData(s))
        assert r.passed, r.summary()
        assert {"axiom_i", "axiom_ii", "axiom_iii", "axiom_iv"} <= categories(r)


# -- 11 -------------------------------------------------------------------------

@criterion(11, "both M x R lifts close for the reference structure and fail for the negative fixture")
def test_c11_lifts():
    for variant in LIFT_VARIANTS:
        s, n = example3(), negative()
        r = check_lift(GraphSharp(s.lam, s.e), TwistData.exact(s.omega), variant)
        assert r.passed, r.summary()
        assert not check_lift(GraphSharp(n.lam, n.e), TwistData.exact(n.omega), variant).passed


# -- 12 -------------------------------------------------------------------------

def _jkit(*args):
    return subprocess.run([sys.executable, "-m", "jkit.cli", *map(str, args)], capture_output=True, text=True)


@criterion(12, "CLI exit codes, schema-valid JSON, byte-identical output")
def test_c12_cli():
    data = resources.files("jkit") / "data"
    with resources.as_file(data / "example3.jk") as good, resources.as_file(data / "negative.jk") as bad:
        assert _jkit("check", good).returncode == 0
        assert _jkit("check", bad).returncode == 1
        schema = json.loads((data / "report.schema.json").read_text())
        for path, code in ((good, 0), (bad, 1)):
            runs = [_jkit("check", "--json", path), _jkit("check", "--json", path),
                    _jkit("check", "--json", "--parallel", path)]
            assert [p.returncode for p in runs] == [code] * 3
            jsonschema.validate(json.loads(runs[0].stdout), schema)
            assert runs[0].stdout == runs[1].stdout == runs[2].stdout


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
