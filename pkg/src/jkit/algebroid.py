"""The cotangent Jacobi algebroid of a twisted Jacobi structure and its quasi-Jacobi double.

``A = TM x R`` carries the bracket ``[.,.]'``, the anchor ``pi`` and the cocycle
``phi = (0,1)``; ``A* = T*M x R`` carries ``{.,.}^omega``, the anchor
``pi o (Lambda,E)^#`` and the cocycle ``W = (-E, 0)``; the twist is ``(d omega, omega)``.

Both differentials are built from the brackets by the Cartan formula over the
constant basis of the extended chart.  Closed-form expressions are kept next to
them as independent routes for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Optional, Sequence

from .calculus import (
    apply_vector,
    d_01,
    de_rham,
    differential,
    ext_schouten,
    ext_schouten_mod,
    ext_sharp,
    ext_sharp_tensor_one,
    lie_derivative,
    schouten,
    unit_covector,
)
from .chart import Chart
from .coeff import Coeff
from .dirac import CourantJacobiData, E1Section, courant_jacobi_axioms, pairing
from .errors import UnsupportedInputError
from .exterior import (
    ExtForm,
    ExtMultivector,
    Form,
    Multivector,
    contract,
    e1_basis,
    ext_contract,
    ext_covector,
    ext_eval,
    ext_interior,
    ext_pairing,
    ext_partial_eval,
    ext_scalar_part,
    ext_wedge,
    interior,
    sharp1,
    wedge,
)
from .jacobi import TwistedJacobiStructure, jacobi_bracket
from .report import Collector, VerificationReport


def _lam(lam: Multivector, a: Form, b: Form) -> Coeff:
    """``Lambda(a, b) = <b, Lambda^# a>``."""
    return interior(sharp1(lam, a), b).scalar_value()


def _cartan(basis_count: int, ext: Chart, out_cls, act, table, value, degree: int):
    """Cartan formula on constant basis sections of the extended chart.

    ``act(i, h)`` is the anchor of basis section ``i`` applied to ``h``;
    ``table(i, j)`` is the bracket of two basis sections as an augmented tensor;
    ``value(key)`` evaluates the argument on basis sections ``key``;
    the argument itself is needed for bracket terms, passed as ``value.tensor``.
    """
    terms = {}
    src = value.tensor
    for key in combinations(range(basis_count), degree + 1):
        acc = ext.zero()
        for pos, i in enumerate(key):
            rest = key[:pos] + key[pos + 1:]
            v = value(rest)
            if v:
                d = act(i, v)
                if d:
                    acc = acc + d if pos % 2 == 0 else acc - d
        for (pi, i), (pj, j) in combinations(enumerate(key), 2):
            b = table(i, j)
            if not b.terms:
                continue
            rest = tuple(k for k in key if k != i and k != j)
            c = evaluate_first(src, b, rest)
            if c:
                acc = acc + c if (pi + pj) % 2 == 0 else acc - c
        if acc:
            terms[key] = acc
    return out_cls._raw(ext, degree + 1, terms)


def evaluate_first(t, first, rest) -> Coeff:
    """``t(first, b_rest...)`` with ``rest`` a key of basis sections."""
    if t.degree == 0:
        return t.chart.zero()
    r = contract(first, t) if isinstance(t, Multivector) else interior(first, t)
    return r.coeff(*rest) if rest else r.scalar_value()


class _Value:
    def __init__(self, tensor):
        self.tensor = tensor

    def __call__(self, key):
        if self.tensor.degree == 0:
            return self.tensor.scalar_value()
        return self.tensor.coeff(*key)


# -- the Lie algebroid (T*M x R, {.,.}^omega, pi o (Lambda,E)^#) -----------

@dataclass
class CotangentAlgebroid:
    structure: TwistedJacobiStructure
    _table: dict = field(default_factory=dict, repr=False)

    @property
    def chart(self) -> Chart:
        return self.structure.chart

    @property
    def pi(self) -> ExtMultivector:
        return self.structure.pi

    @property
    def cocycle(self) -> ExtMultivector:
        """``W = (-E, 0)``."""
        ch = self.chart
        return ExtMultivector(-self.structure.e, Multivector.zero(ch, 0))

    def sharp(self, a: ExtForm) -> ExtMultivector:
        return ext_sharp(self.pi, a) if a.degree else ExtMultivector(Multivector.scalar(self.chart, a.scalar_value()))

    def anchor(self, a: ExtForm) -> Multivector:
        """``pi o (Lambda, E)^#``."""
        return self.sharp(a).first

    def base_bracket(self, a1: ExtForm, a2: ExtForm) -> ExtForm:
        """The bracket of a Jacobi pair on ``T*M x R``, written out verbatim."""
        s = self.structure
        ch = self.chart
        lam, e = s.lam, s.e
        al, f = a1.first, ext_scalar_part(a1)
        be, g = a2.first, ext_scalar_part(a2)
        lab = _lam(lam, al, be)
        gamma = (lie_derivative(sharp1(lam, al), be) - lie_derivative(sharp1(lam, be), al)
                 - differential(ch, lab) + lie_derivative(e, be) * f - lie_derivative(e, al) * g
                 - interior(e, wedge(al, be)))
        r = (-lab + _lam(lam, al, differential(ch, g)) - _lam(lam, be, differential(ch, f))
             + f * apply_vector(e, g) - g * apply_vector(e, f))
        return ext_covector(gamma, r)

    def bracket(self, a1: ExtForm, a2: ExtForm) -> ExtForm:
        """``{a1, a2}^omega``: the base bracket plus ``(d omega, omega)(#a1, #a2, .)``."""
        return self.base_bracket(a1, a2) + ext_partial_eval(self.structure.twist, self.sharp(a1), self.sharp(a2))

    # basis machinery on the extended chart (axis 0 is the unit section)

    def _basis(self, i: int) -> ExtForm:
        ext = self.chart.extended()
        return ExtForm.from_aug(Form.basis(ext, i))

    def _bracket_table(self, i: int, j: int):
        key = (i, j)
        b = self._table.get(key)
        if b is None:
            b = self._table[key] = self.bracket(self._basis(i), self._basis(j)).aug()
        return b

    def _act(self, i: int, h) -> Coeff:
        return apply_vector(self.anchor(self._basis(i)), h)

    def d_star(self, S) -> ExtMultivector:
        """The differential ``d_*^omega`` of ``{.,.}^omega`` on ``Gamma(wedge(TM x R))`` (Cartan route)."""
        ch = self.chart
        if not isinstance(S, ExtMultivector):
            S = ExtMultivector(Multivector.scalar(ch, S))
        ext = ch.extended()
        out = _cartan(ext.dim, ext, Multivector, self._act, self._bracket_table, _Value(S.aug()), S.degree)
        return ExtMultivector.from_aug(out)

    def d_star_w(self, S) -> ExtMultivector:
        """``(d_*^omega)^W S = d_*^omega S + W ^ S``."""
        ch = self.chart
        if not isinstance(S, ExtMultivector):
            S = ExtMultivector(Multivector.scalar(ch, S))
        return self.d_star(S) + ext_wedge(self.cocycle, S)

    def apply_anchor_w(self, a: ExtForm, h) -> Coeff:
        """``a_*^W(a) h = anchor(a) h + <a, W> h``."""
        ch = self.chart
        h = ch.coerce(h)
        return apply_vector(self.anchor(a), h) + ext_pairing(a, self.cocycle) * h

    def lie_w(self, a: ExtForm, P: ExtMultivector) -> ExtMultivector:
        """``L^W_{*a} P = i_a d_*^W P + d_*^W i_a P``."""
        out = ext_contract(a, self.d_star_w(P))
        if P.degree:
            out = out + self.d_star_w(ext_contract(a, P))
        return out


def cotangent_bracket(ca: CotangentAlgebroid, a1: ExtForm, a2: ExtForm) -> ExtForm:
    return ca.bracket(a1, a2)


def d_star_omega(ca: CotangentAlgebroid, arg) -> ExtMultivector:
    return ca.d_star(arg)


def d_star_omega_cocycle(ca: CotangentAlgebroid, arg) -> ExtMultivector:
    return ca.d_star_w(arg)


# closed-form routes used as oracles

def d_star_closed(s: TwistedJacobiStructure, arg) -> ExtMultivector:
    """Closed forms of ``d_*^omega``: ``-(L,E)^#(df, 0)`` on functions,
    ``d_*(P,Q) + ((L,E)^# x 1)(d omega, omega)(X,f)`` on sections, with

        d_*(P, Q) = ([L,P] + k E^P + L^Q, -[L,Q] + (1-k) E^Q + [E,P]).
    """
    ch = s.chart
    if not isinstance(arg, ExtMultivector):
        f = ch.coerce(arg)
        return -s.sharp(ext_covector(differential(ch, f), 0))
    if arg.degree != 1:
        raise UnsupportedInputError("closed form available for degree <= 1")
    lam, e = s.lam, s.e
    P, Q = arg.first, arg.second
    k = 1
    base = ExtMultivector(
        schouten(lam, P) + wedge(e, P) * k + wedge(lam, Q),
        -schouten(lam, Q) + wedge(e, Q) * (1 - k) + schouten(e, P),
    )
    return base + ext_sharp_tensor_one(s.pi, s.twist, arg)


def d_star_w_closed(s: TwistedJacobiStructure, arg) -> ExtMultivector:
    """``-(L,E)^#(df, f)`` on functions; ``[(L,E),(X,f)]^(0,1) + ((L,E)^# x 1)(d omega, omega)(X,f)``."""
    ch = s.chart
    if not isinstance(arg, ExtMultivector):
        f = ch.coerce(arg)
        return -s.sharp(d_01(f, ch))
    if arg.degree != 1:
        raise UnsupportedInputError("closed form available for degree <= 1")
    return ext_schouten_mod(s.pi, arg) + ext_sharp_tensor_one(s.pi, s.twist, arg)


# -- the quasi-Jacobi bialgebroid ------------------------------------------

@dataclass
class QuasiJacobiData:
    structure: TwistedJacobiStructure
    _ca: Optional[CotangentAlgebroid] = field(default=None, repr=False)
    _table: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self._ca is None:
            self._ca = CotangentAlgebroid(self.structure)

    @property
    def chart(self) -> Chart:
        return self.structure.chart

    @property
    def ca(self) -> CotangentAlgebroid:
        return self._ca

    @property
    def pi(self) -> ExtMultivector:
        return self.structure.pi

    @property
    def varphi(self) -> ExtForm:
        """The twisting 3-section ``(d omega, omega)``."""
        return self.structure.twist

    @property
    def phi(self) -> ExtForm:
        return unit_covector(self.chart)

    @property
    def w(self) -> ExtMultivector:
        return self.ca.cocycle

    # A-side: [.,.]' and the quasi-differential d'

    def bracket_prime(self, v1: ExtMultivector, v2: ExtMultivector) -> ExtMultivector:
        """``[v1, v2]' = [v1, v2] - (L,E)^#((d omega, omega)(v1, v2, .))``."""
        return ext_schouten(v1, v2) - ext_sharp(self.pi, ext_partial_eval(self.varphi, v1, v2))

    def _vbasis(self, i: int) -> ExtMultivector:
        ext = self.chart.extended()
        return ExtMultivector.from_aug(Multivector.basis(ext, i))

    def _prime_table(self, i: int, j: int):
        key = (i, j)
        b = self._table.get(key)
        if b is None:
            b = self._table[key] = self.bracket_prime(self._vbasis(i), self._vbasis(j)).aug()
        return b

    def _act(self, i: int, h) -> Coeff:
        return apply_vector(self._vbasis(i).first, h)

    def d_prime(self, w) -> ExtForm:
        """``d'`` from ``([.,.]', pi)`` by the Cartan formula."""
        ch = self.chart
        if not isinstance(w, ExtForm):
            w = ExtForm(Form.scalar(ch, w))
        ext = ch.extended()
        out = _cartan(ext.dim, ext, Form, self._act, self._prime_table, _Value(w.aug()), w.degree)
        return ExtForm.from_aug(out)

    def d_prime_phi(self, w) -> ExtForm:
        """``d'^(0,1) w = d' w + (0,1) ^ w``."""
        ch = self.chart
        if not isinstance(w, ExtForm):
            w = ExtForm(Form.scalar(ch, w))
        return self.d_prime(w) + ext_wedge(self.phi, w)

    def d_prime_closed(self, w) -> ExtForm:
        """``(df, 0)`` on functions and ``d(a, f) - (d omega, omega)((L,E)^#(a,f), ., .)`` on 1-sections."""
        ch = self.chart
        if not isinstance(w, ExtForm):
            return ExtForm(differential(ch, ch.coerce(w)), Form.zero(ch, 0))
        if w.degree != 1:
            raise UnsupportedInputError("closed form available for degree <= 1")
        d = ExtForm(de_rham(w.first), -de_rham(w.second))
        return d - ext_interior(self.ca.sharp(w), self.varphi)

    def lie_phi(self, v: ExtMultivector, a: ExtForm) -> ExtForm:
        """``L^phi_v a = i_v d'^phi a + d'^phi i_v a``."""
        out = ext_interior(v, self.d_prime_phi(a))
        if a.degree:
            out = out + self.d_prime_phi(ext_interior(v, a))
        return out

    def correction(self, C: ExtMultivector, v: ExtMultivector) -> ExtMultivector:
        """``(a, b) -> varphi(#a, C^# b, v) + varphi(C^# a, #b, v)`` for an extended bivector ``C``."""
        ch = self.chart
        ext = ch.extended()
        terms = {}
        basis = [ExtForm.from_aug(Form.basis(ext, i)) for i in range(ext.dim)]
        sh = [self.ca.sharp(b) for b in basis]
        csh = [ext_sharp(C, b) for b in basis]
        for i, j in combinations(range(ext.dim), 2):
            c = ext_eval(self.varphi, sh[i], csh[j], v) + ext_eval(self.varphi, csh[i], sh[j], v)
            if c:
                terms[(i, j)] = c
        return ExtMultivector.from_aug(Multivector._raw(ext, 2, terms))

    def graded_bracket(self, P: ExtMultivector, Q: ExtMultivector) -> ExtMultivector:
        """``[P, Q]'^(0,1)`` for the degree pairs the axioms need."""
        p, q = P.degree, Q.degree
        if p == 0 or q == 0:
            return ext_schouten_mod(P, Q)
        if p == 1 and q == 1:
            return self.bracket_prime(P, Q)
        if p == 2 and q == 1:
            return ext_schouten_mod(P, Q) - self.correction(P, Q)
        if p == 1 and q == 2:
            return -self.graded_bracket(Q, P)
        raise UnsupportedInputError(f"[.,.]'^(0,1) is implemented up to degrees (2,1), got ({p},{q})")

    def d_star_w_bracket(self, v: ExtMultivector) -> ExtMultivector:
        """``[(L,E), v]'^(0,1) - ((L,E)^# x 1)(d omega, omega)(v)``."""
        return self.graded_bracket(self.pi, v) - ext_sharp_tensor_one(self.pi, self.varphi, v)

    # the double A + A*

    def rho_theta(self, e: E1Section) -> ExtMultivector:
        """``a^phi + a_*^W``: ``(X + Lambda^# a + g E, f - a(E))``."""
        return e.vec + self.ca.sharp(e.cov)

    def d_theta(self, h) -> E1Section:
        """``(d_*^W + d^phi) h``."""
        ch = self.chart
        h = ch.coerce(h)
        return E1Section(self.ca.d_star_w(h), d_01(h, ch))

    def double_bracket(self, e1: E1Section, e2: E1Section) -> E1Section:
        ch = self.chart
        ca = self.ca
        m = pairing(e1, e2, "minus")
        vec = (self.bracket_prime(e1.vec, e2.vec) + ca.lie_w(e1.cov, e2.vec) - ca.lie_w(e2.cov, e1.vec)
               - ca.d_star_w(m))
        cov = (ca.bracket(e1.cov, e2.cov) + self.lie_phi(e1.vec, e2.cov) - self.lie_phi(e2.vec, e1.cov)
               + d_01(m, ch) + ext_partial_eval(self.varphi, e1.vec, e2.vec))
        return E1Section(vec, cov)


def double_bracket(qj: QuasiJacobiData, e1: E1Section, e2: E1Section) -> E1Section:
    return qj.double_bracket(e1, e2)


def bracket_88_1(qj: QuasiJacobiData, f, g) -> Coeff:
    """``{f, g} = <d^phi f, d_*^W g>``."""
    ch = qj.chart
    return ext_pairing(d_01(ch.coerce(f), ch), qj.ca.d_star_w(g))


def compare_with_jacobi_bracket(qj: QuasiJacobiData, f, g) -> VerificationReport:
    """Both function brackets and their difference; only the difference is a residual."""
    col = Collector("pairing-bracket")
    a = bracket_88_1(qj, f, g)
    b = jacobi_bracket(qj.structure, f, g)
    col.add("difference", a - b, f"{a} vs {b}")
    return col.report()


def _functions(ch: Chart, test_functions) -> list:
    if test_functions is None:
        return [ch.one()] + ch.variables()
    return [ch.coerce(f) for f in test_functions]


def check_cotangent_algebroid(ca: CotangentAlgebroid, test_functions=None) -> VerificationReport:
    """Jacobi identity of ``{.,.}^omega``, the anchor Leibniz rule, ``d_* d_* = 0`` and the cocycle ``W``."""
    ch = ca.chart
    fns = _functions(ch, test_functions)
    ext = ch.extended()
    basis = [ca._basis(i) for i in range(ext.dim)]
    scaled = [b * h for h in ch.variables() for b in basis]
    col = Collector("cotangent-algebroid")
    br = ca.bracket
    for a1, a2, a3 in combinations(basis, 3):
        col.add("jacobi", br(br(a1, a2), a3) + br(br(a2, a3), a1) + br(br(a3, a1), a2), f"{a1}, {a2}, {a3}")
    for a1 in scaled:
        for a2, a3 in combinations(basis, 2):
            col.add("jacobi_scaled", br(br(a1, a2), a3) + br(br(a2, a3), a1) + br(br(a3, a1), a2),
                    f"{a1}, {a2}, {a3}")
    for a1, a2 in product(basis, repeat=2):
        for h in fns:
            lhs = br(a1, a2 * h)
            rhs = br(a1, a2) * h + a2 * apply_vector(ca.anchor(a1), h)
            col.add("leibniz", lhs - rhs, f"{a1}, {h}*{a2}")
    col.add("cocycle", ca.d_star(ca.cocycle))
    for f in fns:
        col.add("dd_functions", ca.d_star(ca.d_star(f)), str(f))
    for v in [ExtMultivector.from_aug(Multivector.basis(ext, i)) * h for i in range(ext.dim) for h in fns]:
        col.add("dd_sections", ca.d_star(ca.d_star(v)), str(v))
    return col.report()


def check_differentials(qj: QuasiJacobiData, test_functions=None) -> VerificationReport:
    """Cartan-route operators against their closed forms, and d_*^W against its bracket form."""
    ch = qj.chart
    s = qj.structure
    fns = _functions(ch, test_functions)
    ext = ch.extended()
    vecs = [ExtMultivector.from_aug(Multivector.basis(ext, i)) * h for i in range(ext.dim) for h in fns]
    covs = [ExtForm.from_aug(Form.basis(ext, i)) * h for i in range(ext.dim) for h in fns]
    ca = qj.ca
    col = Collector("differentials")
    for f in fns:
        col.add("d_star_function", ca.d_star(f) - d_star_closed(s, f), str(f))
        col.add("d_star_w_function", ca.d_star_w(f) - d_star_w_closed(s, f), str(f))
        col.add("d_prime_function", qj.d_prime(f) - qj.d_prime_closed(f), str(f))
    for v in vecs:
        col.add("d_star_section", ca.d_star(v) - d_star_closed(s, v), str(v))
        col.add("d_star_w_section", ca.d_star_w(v) - d_star_w_closed(s, v), str(v))
        col.add("route_bracket", ca.d_star_w(v) - qj.d_star_w_bracket(v), str(v))
    for a in covs:
        col.add("d_prime_section", qj.d_prime(a) - qj.d_prime_closed(a), str(a))
    return col.report()


def check_quasi_jacobi(qj: QuasiJacobiData, test_functions=None) -> VerificationReport:
    """Conditions 1-6 of a quasi-Jacobi bialgebroid for the canonical data."""
    ch = qj.chart
    fns = _functions(ch, test_functions)
    ext = ch.extended()
    ca = qj.ca
    vb = [qj._vbasis(i) for i in range(ext.dim)]
    vphi = qj.varphi
    col = Collector("quasi-jacobi")
    # A* must be a Lie algebroid with 1-cocycle W
    cb = [ca._basis(i) for i in range(ext.dim)]
    br = ca.bracket
    for (i, a1), (j, a2), (k, a3) in combinations(enumerate(cb), 3):
        col.add("a_star_jacobi", br(br(a1, a2), a3) + br(br(a2, a3), a1) + br(br(a3, a1), a2), f"b{i}, b{j}, b{k}")
    col.add("a_star_cocycle", ca.d_star(ca.cocycle))
    # 1) Leibniz rule of [.,.]'
    for (i, X), (j, Y) in product(enumerate(vb), repeat=2):
        for h in fns:
            lhs = qj.bracket_prime(X, Y * h)
            rhs = qj.bracket_prime(X, Y) * h + Y * apply_vector(X.first, h)
            col.add("c1_leibniz", lhs - rhs, f"v{i}, {h}*v{j}")
    # 2) anchor defect
    pairs = [(X, Y, f"v{i}, v{j}") for (i, X), (j, Y) in combinations(enumerate(vb), 2)]
    pairs += [(X * h, Y, f"{h}*v{i}, v{j}") for h in ch.variables()
              for (i, X), (j, Y) in product(enumerate(vb), repeat=2)]
    for X, Y, label in pairs:
        lhs = qj.bracket_prime(X, Y).first
        rhs = schouten(X.first, Y.first) - ca.anchor(ext_partial_eval(vphi, X, Y))
        col.add("c2_anchor", lhs - rhs, label)
    # 3) Jacobiator of [.,.]'
    br = qj.bracket_prime
    for (i, X), (j, Y), (k, Z) in combinations(enumerate(vb), 3):
        lhs = br(br(X, Y), Z) + br(br(Y, Z), X) + br(br(Z, X), Y)
        rhs = -ca.d_star_w(ext_eval(vphi, X, Y, Z))
        for A, B, C in ((X, Y, Z), (Y, Z, X), (Z, X, Y)):
            rhs = rhs - ext_contract(ext_partial_eval(vphi, A, B), ca.d_star_w(C))
        col.add("c3_jacobiator", lhs - rhs, f"v{i}, v{j}, v{k}")
    # 4) d' phi = varphi(W, ., .)
    col.add("c4_cocycle", qj.d_prime(qj.phi) - ext_interior(qj.w, vphi))
    # 5) d'^phi varphi = 0
    col.add("c5_closed", qj.d_prime_phi(vphi))
    # 6) d_*^W is a derivation of [.,.]'^(0,1)
    dw = ca.d_star_w
    gb = qj.graded_bracket
    fvals = [ExtMultivector(Multivector.scalar(ch, f)) for f in fns]
    for f, g in product(fvals, repeat=2):
        res = gb(dw(f), g) - gb(f, dw(g))
        col.add("c6_functions", res, f"{f}, {g}")
    svals = vb + [v * h for v in vb for h in ch.variables()]
    for X in svals:
        for g in fvals:
            res = dw(gb(X, g)) - (gb(dw(X), g) + gb(X, dw(g)))
            col.add("c6_section_function", res, f"{X}, {g}")
    for (i, X), (j, Y) in combinations(enumerate(vb), 2):
        res = dw(gb(X, Y)) - (gb(dw(X), Y) + gb(X, dw(Y)))
        col.add("c6_sections", res, f"v{i}, v{j}")
    for h in ch.variables():
        for (i, X), (j, Y) in product(enumerate(vb), repeat=2):
            res = dw(gb(X * h, Y)) - (gb(dw(X * h), Y) + gb(X * h, dw(Y)))
            col.add("c6_sections_scaled", res, f"{h}*v{i}, v{j}")
    return col.report()


def double_data(qj: QuasiJacobiData) -> CourantJacobiData:
    return CourantJacobiData("double", qj.chart, qj.double_bracket, anchor=qj.rho_theta, dtheta=qj.d_theta)


def check_double_courant_jacobi(qj: QuasiJacobiData, test_sections: Optional[Sequence[E1Section]] = None,
                                test_functions=None) -> VerificationReport:
    ch = qj.chart
    secs = e1_basis(ch) if test_sections is None else list(test_sections)
    return courant_jacobi_axioms(double_data(qj), secs, _functions(ch, test_functions))


def derived_identities(qj: QuasiJacobiData, test_functions=None) -> VerificationReport:
    """Pointwise consequences of the bialgebroid axioms on the canonical data."""
    ch = qj.chart
    ca = qj.ca
    col = Collector("derived-identities")
    col.add("phi_w", ext_pairing(qj.phi, qj.w))
    col.add("anchor_sum", qj.w.first + ca.anchor(qj.phi))
    for f in _functions(ch, test_functions):
        # (a o d_*^W + a_* o d^phi) f = 0
        col.add("anchor_differentials", ca.d_star_w(f).first + ca.anchor(d_01(f, ch)), str(f))
        col.add("skew_pairing_bracket", bracket_88_1(qj, f, f), str(f))
    fns = _functions(ch, test_functions)
    for f, g in combinations(fns, 2):
        dw = ca.d_star_w
        col.add("bracket_homomorphism", qj.bracket_prime(dw(f), dw(g)) - dw(bracket_88_1(qj, g, f)), f"{f}, {g}")
    return col.report()
