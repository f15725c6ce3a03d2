"""Twisted Jacobi structures, their function bracket, tlcs structures and Poissonization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .calculus import (
    apply_vector,
    de_rham,
    differential,
    ext_schouten_mod,
    lie_derivative,
    schouten,
    sharp_pair,
    sharp_tensor_one,
)
from .chart import Chart
from .coeff import Coeff
from .errors import DegreeError, SingularityError, StructuralError, UnsupportedInputError
from .exterior import (
    ExtForm,
    ExtMultivector,
    Form,
    Multivector,
    evaluate,
    ext_covector,
    ext_eval,
    ext_partial_eval,
    sharp,
    sharp1,
    wedge,
)
from .report import Collector, VerificationReport


def _need(t, cls, degree: int, what: str) -> None:
    if not isinstance(t, cls):
        raise StructuralError(f"{what} must be a {cls.__name__}")
    if t.degree != degree:
        raise DegreeError(f"{what} must have degree {degree}, got {t.degree}")


@dataclass(frozen=True)
class TwistedJacobiStructure:
    lam: Multivector
    e: Multivector
    omega: Form

    def __post_init__(self):
        _need(self.lam, Multivector, 2, "Lambda")
        _need(self.e, Multivector, 1, "E")
        _need(self.omega, Form, 2, "omega")
        if not (self.lam.chart == self.e.chart == self.omega.chart):
            raise StructuralError("structure components live on different charts")

    @property
    def chart(self) -> Chart:
        return self.lam.chart

    @property
    def pi(self) -> ExtMultivector:
        """``(Lambda, E)`` as an extended bivector."""
        return ExtMultivector(self.lam, self.e)

    @property
    def phi(self) -> Form:
        return de_rham(self.omega)

    @property
    def twist(self) -> ExtForm:
        """``(d omega, omega)``."""
        return ExtForm(self.phi, self.omega)

    def sharp(self, w) -> ExtMultivector:
        return sharp_pair(self.lam, self.e, w)

    def sharp_df(self, f) -> ExtMultivector:
        """``(Lambda, E)^#(df, f)``."""
        ch = self.chart
        return self.sharp(ext_covector(differential(ch, f), f))


def check_twisted_jacobi(s: TwistedJacobiStructure) -> VerificationReport:
    """Component identities for the trivector and bivector parts, plus the combined identity.

    ``trivector``:  [L,L] + 2 E^L - 2 L^#(phi) - 2 (L^# omega)^E
    ``bivector``:   [E,L] - (L^#x1)(phi)(E) + ((L^#x1)(omega)(E))^E
    ``extended``:   [(L,E),(L,E)]^(0,1) - 2 (L,E)^#(d omega, omega)
    ``route_agreement``: extended - (trivector, 2 bivector), which must vanish identically.
    """
    col = Collector("twisted-jacobi")
    lam, e, omega = s.lam, s.e, s.omega
    phi = de_rham(omega)
    r1 = (schouten(lam, lam) + wedge(e, lam) * 2
          - sharp(lam, phi) * 2 - wedge(sharp(lam, omega), e) * 2)
    r2 = (schouten(e, lam) - sharp_tensor_one(lam, phi, e)
          + wedge(sharp_tensor_one(lam, omega, e), e))
    pi = s.pi
    r21 = ext_schouten_mod(pi, pi) - s.sharp(s.twist) * 2
    col.add("trivector", r1)
    col.add("bivector", r2)
    col.add("extended", r21)
    col.add("route_agreement", r21 - ExtMultivector(r1, r2 * 2))
    return col.report()


def jacobi_bracket(s: TwistedJacobiStructure, f, g) -> Coeff:
    """``{f, g} = Lambda(df, dg) + f E(g) - g E(f)``."""
    ch = s.chart
    f, g = ch.coerce(f), ch.coerce(g)
    df, dg = differential(ch, f), differential(ch, g)
    return evaluate(s.lam, df, dg) + f * apply_vector(s.e, g) - g * apply_vector(s.e, f)


def jacobiator_defect(s: TwistedJacobiStructure, f, g, h) -> tuple[Coeff, Coeff]:
    """Cyclic sum ``{f,{g,h}} + c.p.`` and ``-(d omega, omega)`` on the sharped differentials."""
    b = lambda u, v: jacobi_bracket(s, u, v)
    lhs = b(f, b(g, h)) + b(g, b(h, f)) + b(h, b(f, g))
    rhs = -ext_eval(s.twist, s.sharp_df(f), s.sharp_df(g), s.sharp_df(h))
    return lhs, rhs


def hamiltonian_field(s: TwistedJacobiStructure, f) -> Multivector:
    """``X_f = Lambda^#(df) + f E``."""
    ch = s.chart
    f = ch.coerce(f)
    return sharp1(s.lam, differential(ch, f)) + s.e * f


def hamiltonian_commutator_defect(s: TwistedJacobiStructure, f, g) -> tuple[Multivector, Multivector]:
    """``[X_f, X_g]`` against ``X_{f,g} + pi (L,E)^#((d omega, omega)(sharp df, sharp dg, .))``."""
    lhs = schouten(hamiltonian_field(s, f), hamiltonian_field(s, g))
    extra = s.sharp(ext_partial_eval(s.twist, s.sharp_df(f), s.sharp_df(g)))
    rhs = hamiltonian_field(s, jacobi_bracket(s, f, g)) + extra.p
    return lhs, rhs


# -- twisted locally conformal presymplectic structures ---------------------

@dataclass(frozen=True)
class TlcsStructure:
    theta: Form
    lee: Form
    omega: Form

    def __post_init__(self):
        _need(self.theta, Form, 2, "Theta")
        _need(self.lee, Form, 1, "Lee form")
        _need(self.omega, Form, 2, "omega")

    @property
    def chart(self) -> Chart:
        return self.theta.chart


def check_tlcs(t: TlcsStructure) -> VerificationReport:
    col = Collector("tlcs")
    col.add("lee_closed", de_rham(t.lee))
    big = t.theta + t.omega
    col.add("conformal", de_rham(big) + wedge(t.lee, big))
    return col.report()


def tlcs_to_twisted_jacobi(t: TlcsStructure) -> TwistedJacobiStructure:
    """Invert a constant ``Theta`` into ``(Lambda, E)`` with ``E = Lambda^#(lee)``.

    The defining relations ``i_E Theta = -lee`` and ``i_{Lambda^# a} Theta = -a`` are
    read with the contraction in the last slot, i.e. ``Theta(E, .) = lee`` and
    ``Theta(Lambda^# a, .) = a``.  With that reading the tlcs sub-bundle is exactly
    the graph of ``(Lambda, E)^#``.
    """
    import sympy

    ch = t.chart
    n = ch.dim
    if any(not c.is_constant() for c in t.theta.terms.values()):
        raise UnsupportedInputError("only constant-coefficient Theta can be inverted exactly")
    m = sympy.zeros(n, n)
    for (a, b), c in t.theta.terms.items():
        v = c.constant_value()
        m[a, b] = sympy.Rational(v.numerator, v.denominator)
        m[b, a] = -m[a, b]
    if m.det() == 0:
        raise SingularityError("Theta is degenerate")
    inv = m.inv()
    q = lambda x: Fraction(int(x.p), int(x.q))
    lam = Multivector(ch, 2, {(j, a): -q(inv[a, j]) for j in range(n) for a in range(j + 1, n) if inv[a, j] != 0})
    e = Multivector.zero(ch, 1)
    for a in range(n):
        acc = ch.zero()
        for b in range(n):
            if inv[a, b] != 0:
                acc = acc - t.lee.coeff(b) * q(inv[a, b])
        if acc:
            e = e + Multivector.basis(ch, a) * acc
    return TwistedJacobiStructure(lam, e, t.omega)


# -- homogeneous twisted exact Poisson structures -----------------------------

@dataclass(frozen=True)
class HomogeneousTwistedPoisson:
    lam: Multivector
    z: Multivector
    omega: Form

    def __post_init__(self):
        _need(self.lam, Multivector, 2, "Lambda")
        _need(self.z, Multivector, 1, "Z")
        _need(self.omega, Form, 2, "omega")

    @property
    def chart(self) -> Chart:
        return self.lam.chart


def check_homogeneous_twisted_poisson(h: HomogeneousTwistedPoisson) -> VerificationReport:
    col = Collector("homog-poisson")
    col.add("twisted_poisson", schouten(h.lam, h.lam) - sharp(h.lam, de_rham(h.omega)) * 2)
    col.add("homogeneous_bivector", schouten(h.z, h.lam) + h.lam)
    col.add("homogeneous_form", lie_derivative(h.z, h.omega) - h.omega)
    return col.report()


def lift_tensor(t, lifted: Chart):
    """Embed a base-chart tensor into the lifted chart ``M x R`` (t-independent)."""
    return t.reindex(lifted, {i: i for i in range(t.chart.dim)})


def poissonize(s: TwistedJacobiStructure, t: str = "t") -> HomogeneousTwistedPoisson:
    """``(e^{-t}(Lambda + dt ^ E), d_t, e^t omega)`` on the lifted chart."""
    lifted = s.chart.lifted(t)
    n = s.chart.dim
    dt = Multivector.basis(lifted, n)
    lam = lift_tensor(s.lam, lifted)
    e = lift_tensor(s.e, lifted)
    om = lift_tensor(s.omega, lifted)
    return HomogeneousTwistedPoisson(
        (lam + wedge(dt, e)) * lifted.exp(-1),
        dt,
        om * lifted.exp(1),
    )
