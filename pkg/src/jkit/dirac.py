"""The Courant-Jacobi algebroid ``E1(M) = (TM x R) + (T*M x R)`` and its Dirac-Jacobi sub-bundles.

The distinguished cosection is ``theta = (0,1) + (0,0)`` throughout, so
``rho^theta(e) = (X, f)`` acts on functions by ``h -> X(h) + f h`` and
``D^theta h = (0,0) + (dh, h)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from typing import Callable, Optional, Sequence

from .calculus import apply_vector, d_01, de_rham, ext_schouten, lie_derivative, lie_mod, schouten, sharp_pair
from .chart import Chart
from .coeff import Coeff
from .errors import DegreeError, StructuralError, UsageError
from .exterior import (
    E1Section,
    ExtForm,
    ExtMultivector,
    Form,
    Multivector,
    ext_basis_covectors,
    ext_basis_vectors,
    ext_interior,
    ext_pairing,
    ext_partial_eval,
    ext_scalar_part,
    interior,
    sharp1,
)
from .report import Collector, VerificationReport

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


@dataclass(frozen=True)
class TwistData:
    """The twisting 3-section ``(phi, omega)``."""

    phi: Form
    omega: Form

    def __post_init__(self):
        if self.phi.degree != 3 or self.omega.degree != 2:
            raise DegreeError("a twist is a (3-form, 2-form) pair")

    @classmethod
    def exact(cls, omega: Form) -> "TwistData":
        """``(d omega, omega)``, the closed twist of a 2-form."""
        return cls(de_rham(omega), omega)

    @classmethod
    def zero(cls, ch: Chart) -> "TwistData":
        return cls(Form.zero(ch, 3), Form.zero(ch, 2))

    @classmethod
    def from_ext(cls, w: ExtForm) -> "TwistData":
        return cls(w.first, w.second)

    @property
    def chart(self) -> Chart:
        return self.omega.chart

    @property
    def ext(self) -> ExtForm:
        return ExtForm(self.phi, self.omega)

    @property
    def closed(self) -> bool:
        return self.phi == de_rham(self.omega)


# -- bilinear forms, anchor, brackets ---------------------------------------

def pairing(e1: E1Section, e2: E1Section, sign: str = "plus") -> Coeff:
    """``(e1, e2)_+`` or ``(e1, e2)_-``."""
    a = ext_pairing(e1.cov, e2.vec)
    b = ext_pairing(e2.cov, e1.vec)
    if sign == "plus":
        return (a + b) * HALF
    if sign == "minus":
        return (a - b) * HALF
    raise UsageError(f"pairing sign must be 'plus' or 'minus', not {sign!r}")


def pairing_plus(e1: E1Section, e2: E1Section) -> Coeff:
    return pairing(e1, e2, "plus")


def anchor_theta(e: E1Section) -> ExtMultivector:
    """``rho^theta(e) = (X, f)``."""
    return e.vec


def act(v: ExtMultivector, h) -> Coeff:
    """``(X, f)`` as the first-order operator ``h -> X(h) + f h``."""
    ch = v.chart
    h = ch.coerce(h)
    return apply_vector(v.first, h) + ext_scalar_part(v) * h


def d_theta(ch: Chart, h) -> E1Section:
    """``D^theta h = (0,0) + (dh, h)``."""
    return E1Section(ExtMultivector.zero(ch, 1), d_01(ch.coerce(h), ch))


def e1_bracket(e1: E1Section, e2: E1Section) -> E1Section:
    """The untwisted bracket of ``E1(M)``."""
    ch = e1.chart
    vec = ext_schouten(e1.vec, e2.vec)
    cov = lie_mod(e1.vec, e2.cov) - lie_mod(e2.vec, e1.cov) + d_01(pairing(e1, e2, "minus"), ch)
    return E1Section(vec, cov)


def twisted_bracket(e1: E1Section, e2: E1Section, tw: Optional[TwistData] = None) -> E1Section:
    """``[e1, e2]_(phi, omega) = [[e1, e2]] + (phi, omega)((X1,f1), (X2,f2), .)``."""
    out = e1_bracket(e1, e2)
    if tw is None:
        return out
    extra = ext_partial_eval(tw.ext, e1.vec, e2.vec)
    return E1Section(out.vec, out.cov + extra)


# -- Courant-Jacobi axioms ----------------------------------------------------

@dataclass
class CourantJacobiData:
    """Everything the axiom checker needs; the pairing is always ``(.,.)_+``."""

    name: str
    chart: Chart
    bracket: Callable[[E1Section, E1Section], E1Section]
    anchor: Callable[[E1Section], ExtMultivector] = anchor_theta
    dtheta: Optional[Callable[[Coeff], E1Section]] = None
    defect: Optional[Callable[[E1Section, E1Section, E1Section], E1Section]] = None

    def D(self, h) -> E1Section:
        if self.dtheta is not None:
            return self.dtheta(h)
        return d_theta(self.chart, h)


def _jacobiator(br, e1, e2, e3):
    b12, b23, b31 = br(e1, e2), br(e2, e3), br(e3, e1)
    J = br(b12, e3) + br(b23, e1) + br(b31, e2)
    T = (pairing_plus(b12, e3) + pairing_plus(b23, e1) + pairing_plus(b31, e2)) * THIRD
    return J, T


def courant_jacobi_axioms(data: CourantJacobiData, sections: Sequence[E1Section],
                          functions: Sequence) -> VerificationReport:
    """Axioms i-iv plus the theta compatibility condition, sampled on the given families."""
    if not sections or not functions:
        raise UsageError("axiom check needs non-empty section and function families")
    br = data.bracket
    col = Collector(data.name)
    n = len(sections)
    for i, j in combinations(range(n), 2):
        e1, e2 = sections[i], sections[j]
        b = br(e1, e2)
        col.add("skew", b + br(e2, e1), f"e{i}, e{j}")
        col.add("axiom_ii", data.anchor(b) - ext_schouten(data.anchor(e1), data.anchor(e2)), f"e{i}, e{j}")
        r1, r2 = data.anchor(e1), data.anchor(e2)
        col.add("theta_compat",
                ext_scalar_part(data.anchor(b)) - (apply_vector(r1.first, ext_scalar_part(r2))
                                                   - apply_vector(r2.first, ext_scalar_part(r1))),
                f"e{i}, e{j}")
    for i, j, k in combinations(range(n), 3):
        e1, e2, e3 = sections[i], sections[j], sections[k]
        J, T = _jacobiator(br, e1, e2, e3)
        res = J - data.D(T)
        col.add("axiom_i", res, f"e{i}, e{j}, e{k}")
        if data.defect is not None:
            col.add("axiom_i_defect", res - data.defect(e1, e2, e3), f"e{i}, e{j}, e{k}")
    for k in range(n):
        e = sections[k]
        for i, j in combinations_with_replacement(range(n), 2):
            e1, e2 = sections[i], sections[j]
            lhs = act(data.anchor(e), pairing_plus(e1, e2))
            rhs = (pairing_plus(br(e, e1) + data.D(pairing_plus(e, e1)), e2)
                   + pairing_plus(e1, br(e, e2) + data.D(pairing_plus(e, e2))))
            col.add("axiom_iii", lhs - rhs, f"e{k}; e{i}, e{j}")
    for f, g in combinations_with_replacement(list(functions), 2):
        col.add("axiom_iv", pairing_plus(data.D(f), data.D(g)), f"{f}, {g}")
    for idx, e in enumerate(sections):
        for f in functions:
            col.add("dtheta_dual", pairing_plus(data.D(f), e) - act(data.anchor(e), f) * HALF, f"e{idx}, {f}")
    return col.report()


def axiom_i_defect(tw: TwistData) -> Callable:
    """``-(d^(0,1)(phi, omega))((X1,f1), (X2,f2), (X3,f3), .)`` as a section."""
    dw = d_01(tw.ext)
    ch = tw.chart

    def fn(e1, e2, e3):
        return E1Section(ExtMultivector.zero(ch, 1), -ext_partial_eval(dw, e1.vec, e2.vec, e3.vec))
    return fn


def check_courant_jacobi_axioms(tw: TwistData, test_sections: Sequence[E1Section],
                                test_functions: Sequence) -> VerificationReport:
    ch = tw.chart
    data = CourantJacobiData(
        "courant-jacobi", ch, lambda a, b: twisted_bracket(a, b, tw), defect=axiom_i_defect(tw))
    return courant_jacobi_axioms(data, list(test_sections), [ch.coerce(f) for f in test_functions])


# -- sub-bundle families --------------------------------------------------

class SubBundleSpec:
    """A parametrized sub-bundle of ``E1(M)`` with a symbolic membership test."""

    kind = "subbundle"

    @property
    def chart(self) -> Chart:
        raise NotImplementedError

    def generators(self) -> list[E1Section]:
        raise NotImplementedError

    def membership_defect(self, e: E1Section) -> list:
        """Residuals that vanish identically iff ``e`` is a section of the sub-bundle."""
        raise NotImplementedError

    def contains(self, e: E1Section) -> bool:
        return all(not r for r in self.membership_defect(e))

    def recast(self, ch: Chart) -> "SubBundleSpec":
        """The same sub-bundle with parameters moved to a chart with a larger ring."""
        raise NotImplementedError


def membership(spec: SubBundleSpec, e: E1Section) -> bool:
    return spec.contains(e)


def generators(spec: SubBundleSpec) -> list[E1Section]:
    return spec.generators()


@dataclass(frozen=True)
class GraphSharp(SubBundleSpec):
    """``graph (Lambda, E)^# = {(Lambda,E)^#(a, g) + (a, g)}``."""

    lam: Multivector
    e: Multivector
    kind = "graph_sharp"

    @property
    def chart(self):
        return self.lam.chart

    def sharp(self, w: ExtForm) -> ExtMultivector:
        return sharp_pair(self.lam, self.e, w)

    def generators(self):
        return [E1Section(self.sharp(b), b) for b in ext_basis_covectors(self.chart)]

    def membership_defect(self, e):
        return [e.vec - self.sharp(e.cov)]

    def recast(self, ch):
        return GraphSharp(self.lam.with_chart(ch), self.e.with_chart(ch))


def flat(eta: Form, gamma: Form, v: ExtMultivector) -> ExtForm:
    """``(eta, gamma)^flat(X, f) = (i_X eta + f gamma, -i_X gamma)``."""
    return ext_interior(v, ExtForm(eta, gamma))


@dataclass(frozen=True)
class GraphFlat(SubBundleSpec):
    eta: Form
    gamma: Form
    kind = "graph_flat"

    @property
    def chart(self):
        return self.eta.chart

    def generators(self):
        return [E1Section(v, flat(self.eta, self.gamma, v)) for v in ext_basis_vectors(self.chart)]

    def membership_defect(self, e):
        return [e.cov - flat(self.eta, self.gamma, e.vec)]

    def recast(self, ch):
        return GraphFlat(self.eta.with_chart(ch), self.gamma.with_chart(ch))


# classical Dirac structures on TM + T*M, given as graphs

@dataclass(frozen=True)
class GraphBivector:
    pi: Multivector

    def generators(self) -> list[tuple[Multivector, Form]]:
        ch = self.pi.chart
        return [(sharp1(self.pi, Form.basis(ch, i)), Form.basis(ch, i)) for i in range(ch.dim)]

    def defect(self, x: Multivector, a: Form):
        return x - sharp1(self.pi, a)

    def recast(self, ch):
        return GraphBivector(self.pi.with_chart(ch))


@dataclass(frozen=True)
class GraphTwoForm:
    sigma: Form

    def generators(self) -> list[tuple[Multivector, Form]]:
        ch = self.sigma.chart
        return [(Multivector.basis(ch, i), interior(Multivector.basis(ch, i), self.sigma)) for i in range(ch.dim)]

    def defect(self, x: Multivector, a: Form):
        return a - interior(x, self.sigma)

    def recast(self, ch):
        return GraphTwoForm(self.sigma.with_chart(ch))


CourantDiracSpec = (GraphBivector, GraphTwoForm)


def courant_dirac_closure(base, phi3: Optional[Form] = None) -> VerificationReport:
    """Isotropy and Courant closure of a classical graph Dirac structure."""
    gens = [CourantSection(x, a) for x, a in base.generators()]
    col = Collector("courant-dirac")
    ch = gens[0].vec.chart
    for i, j in combinations_with_replacement(range(len(gens)), 2):
        col.add("isotropy", courant_pairing(gens[i], gens[j]), f"g{i}, g{j}")
    mults = [ch.one()] + ch.variables()
    for i, j in product(range(len(gens)), repeat=2):
        for h in mults:
            b = courant_bracket(gens[i] * h, gens[j], phi3)
            col.add("closure", base.defect(b.vec, b.form), f"{h}*g{i}, g{j}")
    return col.report()


@dataclass(frozen=True)
class CourantShift(SubBundleSpec):
    """``L_omega = {(X, 0) + (a - i_X omega, f) | X + a in L}``."""

    base: object
    omega: Form
    kind = "courant_shift"

    @property
    def chart(self):
        return self.omega.chart

    def generators(self):
        ch = self.chart
        out = []
        for x, a in self.base.generators():
            out.append(E1Section.make(x, 0, a - interior(x, self.omega), 0))
        out.append(E1Section.make(Multivector.zero(ch, 1), 0, Form.zero(ch, 1), 1))
        return out

    def membership_defect(self, e):
        x = e.vec.first
        a = e.cov.first + interior(x, self.omega)
        return [ext_scalar_part(e.vec), self.base.defect(x, a)]

    def recast(self, ch):
        return CourantShift(self.base.recast(ch), self.omega.with_chart(ch))


@dataclass(frozen=True)
class Tlcs(SubBundleSpec):
    """``{(X, i_X lee) + (i_X Theta - f lee, f)}``."""

    theta: Form
    lee: Form
    omega: Form
    kind = "tlcs_bundle"

    @property
    def chart(self):
        return self.theta.chart

    def section(self, v: ExtMultivector) -> E1Section:
        x, f = v.first, ext_scalar_part(v)
        return E1Section.make(x, interior(x, self.lee).scalar_value(), interior(x, self.theta) - self.lee * f, f)

    def generators(self):
        return [self.section(v) for v in ext_basis_vectors(self.chart)]

    def membership_defect(self, e):
        x = e.vec.first
        g = ext_scalar_part(e.cov)
        return [ext_scalar_part(e.vec) - interior(x, self.lee).scalar_value(),
                e.cov.first - (interior(x, self.theta) - self.lee * g)]

    def recast(self, ch):
        return Tlcs(self.theta.with_chart(ch), self.lee.with_chart(ch), self.omega.with_chart(ch))


@dataclass(frozen=True)
class HomogPoisson(SubBundleSpec):
    """``{(Lambda^#(a) - f Z, f) + (a, i_Z a)}``."""

    lam: Multivector
    z: Multivector
    omega: Form
    kind = "homog_bundle"

    @property
    def chart(self):
        return self.lam.chart

    def section(self, w: ExtForm) -> E1Section:
        a, f = w.first, ext_scalar_part(w)
        return E1Section.make(sharp1(self.lam, a) - self.z * f, f, a, interior(self.z, a).scalar_value())

    def generators(self):
        return [self.section(w) for w in ext_basis_covectors(self.chart)]

    def membership_defect(self, e):
        a, f = e.cov.first, ext_scalar_part(e.vec)
        return [e.vec.first - (sharp1(self.lam, a) - self.z * f),
                ext_scalar_part(e.cov) - interior(self.z, a).scalar_value()]

    def recast(self, ch):
        return HomogPoisson(self.lam.with_chart(ch), self.z.with_chart(ch), self.omega.with_chart(ch))


def default_multipliers(ch: Chart, max_degree: int = 1) -> list:
    """All monomials in the chart variables of total degree ``1..max_degree``."""
    vs = ch.variables()
    out = []
    for d in range(1, max_degree + 1):
        for combo in combinations_with_replacement(vs, d):
            m = ch.one()
            for v in combo:
                m = m * v
            out.append(m)
    return out


def check_closure(spec: SubBundleSpec, tw: TwistData, fn_multipliers: Optional[Sequence] = None,
                  jacobi: bool = False, name: str = "closure") -> VerificationReport:
    """Maximal isotropy of the generators and closure of their (rescaled) brackets."""
    ch = spec.chart
    mults = default_multipliers(ch) if fn_multipliers is None else [ch.coerce(h) for h in fn_multipliers]
    gens = spec.generators()
    col = Collector(name)
    col.add("rank", ch.const(len(gens) - (ch.dim + 1)))
    for i, j in combinations_with_replacement(range(len(gens)), 2):
        col.add("isotropy", pairing_plus(gens[i], gens[j]), f"g{i}, g{j}")
    for i, g in enumerate(gens):
        col.add("generator_membership", spec.membership_defect(g), f"g{i}")
    for i, j in combinations(range(len(gens)), 2):
        col.add("closure", spec.membership_defect(twisted_bracket(gens[i], gens[j], tw)), f"g{i}, g{j}")
    for h in mults:
        for i, j in product(range(len(gens)), repeat=2):
            b = twisted_bracket(gens[i] * h, gens[j], tw)
            col.add("closure_scaled", spec.membership_defect(b), f"{h}*g{i}, g{j}")
    if jacobi:
        br = lambda a, b: twisted_bracket(a, b, tw)
        for i, j, k in combinations(range(len(gens)), 3):
            J, _ = _jacobiator(br, gens[i], gens[j], gens[k])
            col.add("restricted_jacobi", J, f"g{i}, g{j}, g{k}")
    return col.report()


# -- gauge transformations ---------------------------------------------------

@dataclass(frozen=True)
class GaugeElement:
    eta: Form
    gamma: Form

    def __post_init__(self):
        if self.eta.degree != 2 or self.gamma.degree != 1:
            raise DegreeError("a gauge element is a (2-form, 1-form) pair")

    @property
    def ext(self) -> ExtForm:
        return ExtForm(self.eta, self.gamma)

    def __add__(self, other: "GaugeElement") -> "GaugeElement":
        return GaugeElement(self.eta + other.eta, self.gamma + other.gamma)

    def __neg__(self) -> "GaugeElement":
        return GaugeElement(-self.eta, -self.gamma)


@dataclass(frozen=True)
class Gauged(SubBundleSpec):
    """The image ``tau_g(L)``."""

    base: SubBundleSpec
    g: GaugeElement
    kind = "gauge"

    @property
    def chart(self):
        return self.base.chart

    def generators(self):
        return [gauge_section(e, self.g) for e in self.base.generators()]

    def membership_defect(self, e):
        return self.base.membership_defect(gauge_section(e, -self.g))

    def recast(self, ch):
        return Gauged(self.base.recast(ch),
                      GaugeElement(self.g.eta.with_chart(ch), self.g.gamma.with_chart(ch)))


def gauge_section(e: E1Section, g: GaugeElement) -> E1Section:
    """``tau_(eta, gamma)(e) = e + (eta, gamma)^flat(X, f)``."""
    return E1Section(e.vec, e.cov + flat(g.eta, g.gamma, e.vec))


def gauge_transform(x, g: GaugeElement):
    if isinstance(x, E1Section):
        return gauge_section(x, g)
    if isinstance(x, SubBundleSpec):
        return Gauged(x, g)
    raise StructuralError("gauge_transform expects a section or a sub-bundle")


def gauged_twist(tw: TwistData, g: GaugeElement) -> TwistData:
    """``(phi, omega) - d^(0,1)(eta, gamma)``."""
    return TwistData.from_ext(tw.ext - d_01(g.ext))


def check_gauge_proposition(L: SubBundleSpec, g: GaugeElement, tw: TwistData,
                            fn_multipliers: Optional[Sequence] = None) -> VerificationReport:
    ch = L.chart
    mults = default_multipliers(ch) if fn_multipliers is None else [ch.coerce(h) for h in fn_multipliers]
    tw2 = gauged_twist(tw, g)
    gens = L.generators()
    img = [gauge_section(e, g) for e in gens]
    col = Collector("gauge")
    for i, j in combinations_with_replacement(range(len(img)), 2):
        col.add("isotropy", pairing_plus(img[i], img[j]), f"g{i}, g{j}")
    for i, e in enumerate(gens):
        col.add("anchor", img[i].vec - e.vec, f"g{i}")
        col.add("group_law", gauge_section(img[i], g) - gauge_section(e, g + g), f"g{i}")
    pairs = [(gens[i], gens[j], f"g{i}, g{j}") for i, j in combinations(range(len(gens)), 2)]
    pairs += [(gens[i] * h, gens[j], f"{h}*g{i}, g{j}")
              for h in mults for i, j in product(range(len(gens)), repeat=2)]
    image = Gauged(L, g)
    for e1, e2, label in pairs:
        lhs = twisted_bracket(gauge_section(e1, g), gauge_section(e2, g), tw2)
        col.add("intertwining", lhs - gauge_section(twisted_bracket(e1, e2, tw), g), label)
        col.add("image_closure", image.membership_defect(lhs), label)
    return col.report()


# -- Courant bracket on TM + T*M and the lifts to M x R ----------------------

@dataclass(frozen=True)
class CourantSection:
    """``X + alpha`` in ``TM + T*M``."""

    vec: Multivector
    form: Form

    def __add__(self, other):
        return CourantSection(self.vec + other.vec, self.form + other.form)

    def __sub__(self, other):
        return CourantSection(self.vec - other.vec, self.form - other.form)

    def __neg__(self):
        return CourantSection(-self.vec, -self.form)

    def __mul__(self, c):
        return CourantSection(self.vec * c, self.form * c)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.vec) or bool(self.form)

    def __str__(self):
        return f"courant({self.vec}, {self.form})"


def courant_pairing(s1: CourantSection, s2: CourantSection) -> Coeff:
    return (interior(s2.vec, s1.form).scalar_value() + interior(s1.vec, s2.form).scalar_value()) * HALF


def courant_bracket(s1: CourantSection, s2: CourantSection, phi3: Optional[Form] = None) -> CourantSection:
    """``[X+a, Y+b]_C + phi3(X, Y, .)``."""
    x, a, y, b = s1.vec, s1.form, s2.vec, s2.form
    ch = x.chart
    vec = schouten(x, y)
    half = Form.scalar(ch, (interior(y, a).scalar_value() - interior(x, b).scalar_value()) * HALF)
    form = lie_derivative(x, b) - lie_derivative(y, a) + de_rham(half)
    if phi3 is not None:
        form = form + interior(y, interior(x, phi3))
    return CourantSection(vec, form)


LIFT_VARIANTS = ("omega_shifted", "exact_twisted")


@dataclass(frozen=True)
class LiftedSpec:
    """``{(X + f d_t) + e^t(a [+ i_X omega] + g dt) | (X,f)+(a,g) in L}`` on ``M x R``."""

    base: SubBundleSpec
    omega: Form
    variant: str
    lifted: Chart

    def __post_init__(self):
        if self.variant not in LIFT_VARIANTS:
            raise UsageError(f"lift variant must be one of {LIFT_VARIANTS}")

    @property
    def n(self) -> int:
        return self.base.chart.dim

    @property
    def ring_chart(self) -> Chart:
        """Base axes, coefficients from the lifted ring."""
        return self.base.chart.over(self.lifted)

    def _up(self, t):
        return t.reindex(self.lifted, {i: i for i in range(self.n)})

    def _down(self, t):
        return t.reindex(self.ring_chart, {i: i for i in range(self.n)})

    @property
    def phi3(self) -> Optional[Form]:
        if self.variant == "omega_shifted":
            return None
        return de_rham(self._up(self.omega) * self.lifted.exp(1))

    def lift(self, e: E1Section) -> CourantSection:
        lf = self.lifted
        n = self.n
        x = self._up(e.vec.first)
        f = lf.coerce(ext_scalar_part(e.vec))
        a = self._up(e.cov.first)
        g = lf.coerce(ext_scalar_part(e.cov))
        if self.variant == "omega_shifted":
            a = a + interior(x, self._up(self.omega))
        vec = x + Multivector.basis(lf, n) * f
        form = (a + Form.basis(lf, n) * g) * lf.exp(1)
        return CourantSection(vec, form)

    def generators(self) -> list[CourantSection]:
        return [self.lift(e) for e in self.base.generators()]

    def unlift(self, s: CourantSection) -> E1Section:
        n = self.n
        rc = self.ring_chart
        ex = self.lifted.exp(-1)
        xv = Multivector(rc, 1, {k: c for k, c in s.vec.terms.items() if k[0] < n})
        f = s.vec.coeff(n)
        form = s.form * ex
        a = Form(rc, 1, {k: c for k, c in form.terms.items() if k[0] < n})
        g = form.coeff(n)
        if self.variant == "omega_shifted":
            a = a - interior(xv, self.omega.with_chart(rc))
        return E1Section.make(xv, f, a, g)

    def membership_defect(self, s: CourantSection) -> list:
        spec = self.base.recast(self.ring_chart)
        return spec.membership_defect(self.unlift(s))


def lift_to_product(spec: SubBundleSpec, tw: TwistData, variant: str = "omega_shifted",
                    t: str = "t") -> LiftedSpec:
    return LiftedSpec(spec, tw.omega, variant, spec.chart.lifted(t))


def check_lift(spec: SubBundleSpec, tw: TwistData, variant: str = "omega_shifted",
               fn_multipliers: Optional[Sequence] = None) -> VerificationReport:
    ls = lift_to_product(spec, tw, variant)
    lf = ls.lifted
    mults = [lf.var(i) for i in range(len(lf.names))] if fn_multipliers is None else [lf.coerce(h) for h in fn_multipliers]
    gens = ls.generators()
    phi3 = ls.phi3
    col = Collector(f"lift-{variant}")
    for i, j in combinations_with_replacement(range(len(gens)), 2):
        col.add("isotropy", courant_pairing(gens[i], gens[j]), f"g{i}, g{j}")
    for i, g in enumerate(gens):
        col.add("generator_membership", ls.membership_defect(g), f"g{i}")
    for i, j in combinations(range(len(gens)), 2):
        col.add("closure", ls.membership_defect(courant_bracket(gens[i], gens[j], phi3)), f"g{i}, g{j}")
    for h in mults:
        for i, j in product(range(len(gens)), repeat=2):
            b = courant_bracket(gens[i] * h, gens[j], phi3)
            col.add("closure_scaled", ls.membership_defect(b), f"{h}*g{i}, g{j}")
    return col.report()
