"""The ``.jk`` structure language: tokenizer, evaluating parser, printer and check driver.

A file declares one chart, binds named values and lists check directives::

    manifold M dim 5 coords x0 x1 x2 x3 x4;
    let L : mv2 = d(1)^d(3) + d(2)^d(4) + x4*d(0)^d(4);
    let E : mv1 = d(0);
    let w : form2 = dx(1)^dx(3);
    structure TJ = twisted_jacobi(L, E, w);
    check twisted-jacobi TJ;

Bindings are evaluated as they are parsed, so kind and degree errors surface
with the position of the offending expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Any, Callable, Optional

from . import algebroid, dirac, jacobi
from .calculus import (
    apply_vector,
    d_01,
    de_rham,
    differential,
    ext_d,
    ext_schouten,
    ext_schouten_mod,
    ext_sharp,
    lie_derivative,
    lie_mod,
    schouten,
)
from .chart import Chart
from .coeff import Coeff, ExpCoeff, Polynomial
from .errors import JkitError, ParseError
from .exterior import (
    E1Section,
    ExtForm,
    ExtMultivector,
    Form,
    Multivector,
    contract,
    e1_basis,
    evaluate,
    ext_interior,
    ext_wedge,
    interior,
    sharp,
    sharp1,
    wedge,
)
from .report import VerificationReport

CHECK_KINDS = (
    "closure", "courant-jacobi", "double", "gauge", "homog-poisson",
    "lift", "quasi-jacobi", "tlcs", "twisted-jacobi",
)
STATEMENTS = ("check", "let", "manifold", "structure", "subbundle")
_KIND_RE = re.compile(r"(poly|section|twist|gauge)|(mv|form|extmv|extform)(\d+)")
_GEN_RE = re.compile(r"(dx|d)(\d+)")

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\*\*|[-+*/^(),;:=])
""", re.VERBOSE)

Coeffs = (Polynomial, ExpCoeff)
Tensors = (Multivector, Form)
Exts = (ExtMultivector, ExtForm)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "id", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    out: list[Token] = []
    line, start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind in ("num", "id", "op"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# -- file model ---------------------------------------------------------------

@dataclass
class Binding:
    name: str
    kind: str
    value: Any
    line: int


@dataclass
class CheckDirective:
    kind: str
    target: str
    options: dict[str, Any]
    line: int

    @property
    def label(self) -> str:
        return f"{self.kind} {self.target}"


@dataclass
class StructureFile:
    name: str
    chart: Chart
    bindings: dict[str, Binding] = field(default_factory=dict)
    checks: list[CheckDirective] = field(default_factory=list)

    def value(self, name: str) -> Any:
        return self.bindings[name].value


@dataclass(frozen=True)
class ScalarPair:
    """``pair(0, b)`` with scalar entries; whether it is a vector or a covector comes from context."""

    a: Coeff
    b: Coeff
    chart: Chart

    def resolve(self, cls):
        if self.a:
            raise JkitError("the first entry of a degree-1 pair must be a 1-tensor")
        return cls(cls._inner.zero(self.chart, 1), cls._inner.scalar(self.chart, self.b))

    def __str__(self) -> str:
        return f"pair({self.a}, {self.b})"


# -- values: printing and kind coercion -----------------------------------------

def format_value(v: Any) -> str:
    """Canonical text for any value the evaluator can produce."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, jacobi.TwistedJacobiStructure):
        return f"twisted_jacobi({v.lam}, {v.e}, {v.omega})"
    if isinstance(v, jacobi.TlcsStructure):
        return f"tlcs({v.theta}, {v.lee}, {v.omega})"
    if isinstance(v, jacobi.HomogeneousTwistedPoisson):
        return f"homog_poisson({v.lam}, {v.z}, {v.omega})"
    if isinstance(v, dirac.TwistData):
        return f"twist({v.phi}, {v.omega})"
    if isinstance(v, dirac.GaugeElement):
        return f"gauge_element({v.eta}, {v.gamma})"
    if isinstance(v, dirac.GraphSharp):
        return f"graph_sharp({v.lam}, {v.e})"
    if isinstance(v, dirac.GraphFlat):
        return f"graph_flat({v.eta}, {v.gamma})"
    if isinstance(v, dirac.GraphBivector):
        return f"graph_bivector({v.pi})"
    if isinstance(v, dirac.GraphTwoForm):
        return f"graph_two_form({v.sigma})"
    if isinstance(v, dirac.CourantShift):
        return f"courant_shift({format_value(v.base)}, {v.omega})"
    if isinstance(v, dirac.Tlcs):
        return f"tlcs_bundle({v.theta}, {v.lee}, {v.omega})"
    if isinstance(v, dirac.HomogPoisson):
        return f"homog_bundle({v.lam}, {v.z}, {v.omega})"
    if isinstance(v, dirac.Gauged):
        return f"gauge({format_value(v.base)}, {format_value(v.g)})"
    if isinstance(v, VerificationReport):
        return v.summary()
    return str(v)


def _kind_name(v: Any) -> str:
    if isinstance(v, Coeffs):
        return "poly"
    if isinstance(v, Multivector):
        return f"mv{v.degree}"
    if isinstance(v, Form):
        return f"form{v.degree}"
    if isinstance(v, ExtMultivector):
        return f"extmv{v.degree}"
    if isinstance(v, ExtForm):
        return f"extform{v.degree}"
    if isinstance(v, ScalarPair):
        return "pair"
    if isinstance(v, E1Section):
        return "section"
    if isinstance(v, dirac.TwistData):
        return "twist"
    if isinstance(v, dirac.GaugeElement):
        return "gauge"
    return type(v).__name__


def coerce_kind(v: Any, kind: str, ch: Chart) -> Any:
    """Check ``v`` against a declared kind, filling in zeros and scalar embeddings."""
    m = _KIND_RE.fullmatch(kind)
    if m is None:
        raise JkitError(f"unknown kind {kind!r}")
    simple, fam, k = m.group(1), m.group(2), m.group(3)
    bad = JkitError(f"kind mismatch: declared {kind}, value is {_kind_name(v)}")
    is_zero_scalar = isinstance(v, Coeffs) and not v
    if simple == "poly":
        if isinstance(v, Coeffs):
            return v
        if isinstance(v, Tensors + Exts) and v.degree == 0:
            return v.scalar_value() if v else ch.zero()
        raise bad
    if simple == "section":
        if isinstance(v, E1Section):
            return v
        if is_zero_scalar:
            return E1Section.zero(ch)
        raise bad
    if simple == "twist":
        if isinstance(v, dirac.TwistData):
            return v
        if isinstance(v, ExtForm) and v.degree == 3:
            return dirac.TwistData.from_ext(v)
        if isinstance(v, Form) and v.degree == 2:
            return dirac.TwistData.exact(v)
        raise bad
    if simple == "gauge":
        if isinstance(v, dirac.GaugeElement):
            return v
        if isinstance(v, ExtForm) and v.degree == 2:
            return dirac.GaugeElement(v.first, v.second)
        raise bad
    k = int(k)
    cls = {"mv": Multivector, "form": Form, "extmv": ExtMultivector, "extform": ExtForm}[fam]
    if isinstance(v, cls):
        if v.degree == k:
            return v
        if not v:
            return cls.zero(ch, k)
        raise JkitError(f"degree mismatch: declared {kind}, value has degree {v.degree}")
    if isinstance(v, ScalarPair) and fam.startswith("ext"):
        if k == 1:
            return v.resolve(cls)
        if not v.a and not v.b and k > 1:
            return cls.zero(ch, k)
    if isinstance(v, Coeffs):
        if not v:
            return cls.zero(ch, k)
        if k == 0:
            return cls.scalar(ch, v)
    raise bad


# -- arithmetic on dynamically typed values --------------------------------------

def _unify(a, b):
    """Resolve context-typed scalar pairs against the other operand."""
    if isinstance(a, ScalarPair) and isinstance(b, Exts):
        a = a.resolve(type(b))
    if isinstance(b, ScalarPair) and isinstance(a, Exts):
        b = b.resolve(type(a))
    return a, b


def _lift_scalar(a, b):
    """Bring a scalar next to a degree-0 (or zero) tensor to the same kind."""
    if isinstance(a, Coeffs) and isinstance(b, Tensors + Exts):
        if not a:
            return type(b).zero(b.chart, b.degree), b
        if b.degree == 0:
            return type(b).scalar(b.chart, a), b
    return a, b


def _add(a, b, sign: int):
    a, b = _unify(a, b)
    if isinstance(a, ScalarPair) and isinstance(b, ScalarPair):
        return ScalarPair(a.a + b.a * sign, a.b + b.b * sign, a.chart)
    a, b = _lift_scalar(a, b)
    b, a = _lift_scalar(b, a)
    if type(a) is not type(b) and not (isinstance(a, Coeffs) and isinstance(b, Coeffs)):
        raise JkitError(f"cannot add {_kind_name(a)} and {_kind_name(b)}")
    if isinstance(a, Tensors + Exts) and a.degree != b.degree and a and b:
        raise JkitError(f"degree mismatch: {_kind_name(a)} and {_kind_name(b)}")
    if isinstance(a, Tensors) and a.degree != b.degree:
        return a if a else b if sign > 0 else -b
    return a + b if sign > 0 else a - b


def _scale(a, b):
    if isinstance(a, Coeffs) and isinstance(b, Coeffs):
        return a * b
    if isinstance(a, Coeffs):
        a, b = b, a
    if not isinstance(b, Coeffs):
        raise JkitError(f"'*' needs a scalar operand; use '^' to wedge {_kind_name(a)} and {_kind_name(b)}")
    if isinstance(a, ScalarPair):
        return ScalarPair(a.a * b, a.b * b, a.chart)
    if isinstance(a, (dirac.GaugeElement,)):
        return dirac.GaugeElement(a.eta * b, a.gamma * b)
    if isinstance(a, Tensors + Exts + (E1Section,)):
        return a * b
    raise JkitError(f"cannot scale {_kind_name(a)}")


def _wedge(a, b):
    a, b = _unify(a, b)
    if isinstance(a, Exts) and isinstance(b, Exts):
        return ext_wedge(a, b)
    if isinstance(a, Coeffs) or isinstance(b, Coeffs):
        return _scale(a, b)
    if isinstance(a, Tensors) and isinstance(b, Tensors):
        return wedge(a, b)
    raise JkitError(f"cannot wedge {_kind_name(a)} and {_kind_name(b)}")


def _constant(v, what: str) -> Fraction:
    if not isinstance(v, Coeffs) or not v.is_constant():
        raise JkitError(f"{what} must be a numeric constant")
    return v.constant_value()


# -- operator table -------------------------------------------------------------

def _need(v, types, what: str):
    if not isinstance(v, types):
        raise JkitError(f"{what}: unexpected argument of kind {_kind_name(v)}")
    return v


def _as(v, cls, degree: int, what: str, ch: Chart):
    """A tensor of the given kind and degree; a scalar zero becomes the zero tensor."""
    if isinstance(v, Coeffs) and not v:
        return cls.zero(ch, degree)
    if isinstance(v, Coeffs) and degree == 0:
        return cls.scalar(ch, v)
    if not isinstance(v, cls) or (v.degree != degree and v):
        want = ("mv" if cls is Multivector else "form") + str(degree)
        raise JkitError(f"{what}: expected {want}, got {_kind_name(v)}")
    return v if v.degree == degree else cls.zero(ch, degree)


def _mv(k: int, what: str):
    return lambda v, ch: _as(v, Multivector, k, what, ch)


def _fm(k: int, what: str):
    return lambda v, ch: _as(v, Form, k, what, ch)


def _structure(v) -> jacobi.TwistedJacobiStructure:
    if isinstance(v, jacobi.TlcsStructure):
        return jacobi.tlcs_to_twisted_jacobi(v)
    return _need(v, jacobi.TwistedJacobiStructure, "expected a twisted Jacobi structure")


def _ext_form(v, ch: Chart, degree: int) -> ExtForm:
    if isinstance(v, ScalarPair):
        return v.resolve(ExtForm)
    if isinstance(v, Coeffs) and degree == 0:
        return ExtForm.scalar(ch, v)
    return _need(v, ExtForm, "expected an extended form")


def _ext_mv(v, ch: Chart) -> ExtMultivector:
    if isinstance(v, ScalarPair):
        return v.resolve(ExtMultivector)
    return _need(v, ExtMultivector, "expected an extended multivector")


def _twist(v) -> dirac.TwistData:
    if isinstance(v, dirac.TwistData):
        return v
    if isinstance(v, jacobi.TwistedJacobiStructure):
        return dirac.TwistData.exact(v.omega)
    if isinstance(v, ExtForm) and v.degree == 3:
        return dirac.TwistData.from_ext(v)
    if isinstance(v, Form) and v.degree == 2:
        return dirac.TwistData.exact(v)
    raise JkitError(f"expected a twist, got {_kind_name(v)}")


def _gauge_el(v) -> dirac.GaugeElement:
    if isinstance(v, ExtForm) and v.degree == 2:
        return dirac.GaugeElement(v.first, v.second)
    return _need(v, dirac.GaugeElement, "expected a gauge element")


def _op_d(ch, x):
    if isinstance(x, Coeffs):
        return differential(ch, x)
    if isinstance(x, Form):
        return de_rham(x)
    if isinstance(x, ExtForm):
        return ext_d(x)
    raise JkitError(f"d: cannot differentiate {_kind_name(x)}")


def _op_d01(ch, x):
    if isinstance(x, ScalarPair):
        x = x.resolve(ExtForm)
    if isinstance(x, Coeffs):
        return d_01(x, ch)
    return d_01(_need(x, ExtForm, "d01"))


def _op_schouten(ch, p, q):
    if isinstance(p, Exts + (ScalarPair,)) or isinstance(q, Exts + (ScalarPair,)):
        return ext_schouten(_ext_mv(p, ch), _ext_mv(q, ch))
    p, q = (Multivector.scalar(ch, v) if isinstance(v, Coeffs) else v for v in (p, q))
    return schouten(_need(p, Multivector, "schouten"), _need(q, Multivector, "schouten"))


def _op_sharp(ch, lam, w):
    if isinstance(lam, jacobi.TwistedJacobiStructure):
        return lam.sharp(_ext_form(w, ch, 1) if not isinstance(w, ExtForm) else w)
    if isinstance(lam, ExtMultivector):
        return ext_sharp(lam, _ext_form(w, ch, 1))
    lam = _need(lam, Multivector, "sharp")
    w = _need(w, Form, "sharp")
    return sharp1(lam, w) if w.degree == 1 and lam.degree == 2 else sharp(lam, w)


def _op_interior(ch, x, w):
    if isinstance(x, Exts + (ScalarPair,)) or isinstance(w, Exts + (ScalarPair,)):
        return ext_interior(_ext_mv(x, ch), _ext_form(w, ch, 1))
    return interior(_need(x, Multivector, "interior"), _need(w, Form, "interior"))


def _op_lie(ch, x, w):
    x = _need(x, Multivector, "lie")
    if isinstance(w, Coeffs):
        return apply_vector(x, w)
    return lie_derivative(x, _need(w, Tensors, "lie"))


def _op_pair(ch, a, b=None):
    if b is None:
        if isinstance(a, Coeffs):
            raise JkitError("pair: a single scalar has no kind; declare it with a let type")
        a = _need(a, Tensors, "pair")
        return (ExtMultivector if isinstance(a, Multivector) else ExtForm)(a)
    if isinstance(a, Coeffs) and isinstance(b, Coeffs):
        if a:
            raise JkitError("pair: the first entry must be a tensor of degree >= 1")
        return ScalarPair(a, b, ch)
    if isinstance(a, Tensors):
        cls = Multivector if isinstance(a, Multivector) else Form
        if isinstance(b, Coeffs):
            b = cls.scalar(ch, b) if a.degree == 1 else (cls.zero(ch, a.degree - 1) if not b else b)
    elif isinstance(b, Tensors):
        cls = Multivector if isinstance(b, Multivector) else Form
        if isinstance(a, Coeffs) and not a:
            a = cls.zero(ch, b.degree + 1)
    else:
        raise JkitError("pair: entries must be tensors")
    if not isinstance(a, Tensors) or type(a) is not type(b):
        raise JkitError(f"pair: mixed kinds {_kind_name(a)} and {_kind_name(b)}")
    if b.degree != a.degree - 1:
        raise JkitError(f"pair: degrees {a.degree} and {b.degree} do not fit")
    return (ExtMultivector if isinstance(a, Multivector) else ExtForm)(a, b)


def _op_section(ch, v, a):
    return E1Section(_ext_mv(v, ch), _ext_form(a, ch, 1))


def _op_twist(ch, phi, omega=None):
    if omega is None:
        return _twist(phi)
    return dirac.TwistData(_fm(3, "twist")(phi, ch), _fm(2, "twist")(omega, ch))


def _op_exp(ch, k):
    c = _constant(k, "exp weight")
    if c.denominator != 1:
        raise JkitError("exp weight must be an integer")
    return ch.exp(int(c))


def _op_graph_sharp(ch, s, e=None):
    if e is None:
        s = _structure(s)
        return dirac.GraphSharp(s.lam, s.e)
    return dirac.GraphSharp(_mv(2, "graph_sharp")(s, ch), _mv(1, "graph_sharp")(e, ch))


def _op_tlcs_bundle(ch, *args):
    if len(args) == 1:
        t = _need(args[0], jacobi.TlcsStructure, "tlcs_bundle")
        return dirac.Tlcs(t.theta, t.lee, t.omega)
    if len(args) != 3:
        raise JkitError("tlcs_bundle takes a tlcs structure or (Theta, lee, omega)")
    return dirac.Tlcs(_fm(2, "tlcs_bundle")(args[0], ch), _fm(1, "tlcs_bundle")(args[1], ch), _fm(2, "tlcs_bundle")(args[2], ch))


def _op_homog_bundle(ch, *args):
    if len(args) == 1:
        h = _need(args[0], jacobi.HomogeneousTwistedPoisson, "homog_bundle")
        return dirac.HomogPoisson(h.lam, h.z, h.omega)
    if len(args) != 3:
        raise JkitError("homog_bundle takes a homogeneous structure or (Lambda, Z, omega)")
    return dirac.HomogPoisson(_mv(2, "homog_bundle")(args[0], ch), _mv(1, "homog_bundle")(args[1], ch), _fm(2, "homog_bundle")(args[2], ch))


def _op_gauge(ch, x, g):
    g = _gauge_el(g)
    if isinstance(x, dirac.TwistData):
        return dirac.gauged_twist(x, g)
    return dirac.gauge_transform(x, g)


def _cotangent(s) -> algebroid.CotangentAlgebroid:
    return algebroid.CotangentAlgebroid(_structure(s))


OPERATORS: dict[str, tuple[int, int, Callable]] = {
    "wedge": (2, 2, lambda ch, a, b: _wedge(a, b)),
    "schouten": (2, 2, _op_schouten),
    "schouten01": (2, 2, lambda ch, p, q: ext_schouten_mod(_ext_mv(p, ch), _ext_mv(q, ch))),
    "d": (1, 1, _op_d),
    "d01": (1, 1, _op_d01),
    "sharp": (2, 2, _op_sharp),
    "interior": (2, 2, _op_interior),
    "contract": (2, 2, lambda ch, a, p: contract(_need(a, Form, "contract"), _need(p, Multivector, "contract"))),
    "eval": (1, 8, lambda ch, w, *xs: evaluate(_need(w, Tensors, "eval"), *xs)),
    "apply": (2, 2, lambda ch, x, f: apply_vector(_need(x, Multivector, "apply"), f)),
    "lie": (2, 2, _op_lie),
    "lie01": (2, 2, lambda ch, x, w: lie_mod(_ext_mv(x, ch), _ext_form(w, ch, 0))),
    "pair": (1, 2, _op_pair),
    "section": (2, 2, _op_section),
    "pairing_plus": (2, 2, lambda ch, a, b: dirac.pairing(_need(a, E1Section, "pairing"), _need(b, E1Section, "pairing"), "plus")),
    "pairing_minus": (2, 2, lambda ch, a, b: dirac.pairing(_need(a, E1Section, "pairing"), _need(b, E1Section, "pairing"), "minus")),
    "bracket_e1": (2, 2, lambda ch, a, b: dirac.e1_bracket(_need(a, E1Section, "bracket_e1"), _need(b, E1Section, "bracket_e1"))),
    "bracket_tw": (3, 3, lambda ch, a, b, tw: dirac.twisted_bracket(
        _need(a, E1Section, "bracket_tw"), _need(b, E1Section, "bracket_tw"), _twist(tw))),
    "twist": (1, 2, _op_twist),
    "gauge_element": (2, 2, lambda ch, eta, gamma: dirac.GaugeElement(_fm(2, "gauge_element")(eta, ch), _fm(1, "gauge_element")(gamma, ch))),
    "gauge": (2, 2, _op_gauge),
    "exp": (1, 1, _op_exp),
    "twisted_jacobi": (3, 3, lambda ch, lam, e, w: jacobi.TwistedJacobiStructure(
        _mv(2, "twisted_jacobi")(lam, ch), _mv(1, "twisted_jacobi")(e, ch), _fm(2, "twisted_jacobi")(w, ch))),
    "tlcs": (3, 3, lambda ch, th, lee, w: jacobi.TlcsStructure(
        _fm(2, "tlcs")(th, ch), _fm(1, "tlcs")(lee, ch), _fm(2, "tlcs")(w, ch))),
    "homog_poisson": (3, 3, lambda ch, lam, z, w: jacobi.HomogeneousTwistedPoisson(
        _mv(2, "homog_poisson")(lam, ch), _mv(1, "homog_poisson")(z, ch), _fm(2, "homog_poisson")(w, ch))),
    "tlcs_to_jacobi": (1, 1, lambda ch, t: _structure(t)),
    "poissonize": (1, 1, lambda ch, s: jacobi.poissonize(_structure(s))),
    "jacobi_bracket": (3, 3, lambda ch, s, f, g: jacobi.jacobi_bracket(_structure(s), f, g)),
    "hamiltonian": (2, 2, lambda ch, s, f: jacobi.hamiltonian_field(_structure(s), f)),
    "graph_sharp": (1, 2, _op_graph_sharp),
    "graph_flat": (2, 2, lambda ch, eta, gamma: dirac.GraphFlat(_fm(2, "graph_flat")(eta, ch), _fm(1, "graph_flat")(gamma, ch))),
    "graph_bivector": (1, 1, lambda ch, pi: dirac.GraphBivector(_mv(2, "graph_bivector")(pi, ch))),
    "graph_two_form": (1, 1, lambda ch, s: dirac.GraphTwoForm(_fm(2, "graph_two_form")(s, ch))),
    "courant_shift": (2, 2, lambda ch, base, w: dirac.CourantShift(
        _need(base, dirac.CourantDiracSpec, "courant_shift"), _fm(2, "courant_shift")(w, ch))),
    "tlcs_bundle": (1, 3, _op_tlcs_bundle),
    "homog_bundle": (1, 3, _op_homog_bundle),
    "cotangent_bracket": (3, 3, lambda ch, s, a, b: algebroid.cotangent_bracket(
        _cotangent(s), _ext_form(a, ch, 1), _ext_form(b, ch, 1))),
    "d_star": (2, 2, lambda ch, s, x: _cotangent(s).d_star(x)),
    "d_star_w": (2, 2, lambda ch, s, x: _cotangent(s).d_star_w(x)),
    "double_bracket": (3, 3, lambda ch, s, a, b: algebroid.double_bracket(
        algebroid.QuasiJacobiData(_structure(s)), _need(a, E1Section, "double_bracket"), _need(b, E1Section, "double_bracket"))),
}


# -- parser ------------------------------------------------------------------------

_PRIMARY_START = ("(", "-", "identifier", "number")


class Parser:
    def __init__(self, source: str, file: Optional[StructureFile] = None) -> None:
        self.toks = tokenize(source)
        self.i = 0
        self.file = file

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, expected=(), tok: Optional[Token] = None) -> ParseError:
        t = tok or self.tok
        return ParseError(msg, t.line, t.col, tuple(expected))

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "id") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", (text,))
        t = self.tok
        self.i += 1
        return t

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "id":
            found = self.tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", (what,))
        t = self.tok
        self.i += 1
        return t

    def number(self) -> int:
        if self.tok.kind != "num":
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", ("number",))
        t = self.tok
        self.i += 1
        return int(t.text)

    @property
    def chart(self) -> Chart:
        return self.file.chart

    # statements

    def parse_file(self) -> StructureFile:
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind != "id" or t.text not in STATEMENTS:
                raise self.error(f"unexpected {t.text!r}", STATEMENTS)
            if t.text != "manifold" and self.file is None:
                raise self.error("the manifold declaration must come first", ("manifold",))
            getattr(self, "_stmt_" + t.text)()
        if self.file is None:
            raise self.error("missing manifold declaration", ("manifold",))
        return self.file

    def _stmt_manifold(self) -> None:
        start = self.expect("manifold")
        if self.file is not None:
            raise self.error("duplicate chart: only one manifold per file", tok=start)
        name = self.ident("manifold name").text
        self.expect("dim")
        dim_tok = self.tok
        n = self.number()
        self.expect("coords")
        names: list[str] = []
        while self.tok.kind == "id" and self.tok.text != "weight":
            t = self.ident()
            if _GEN_RE.fullmatch(t.text) or t.text in OPERATORS:
                raise self.error(f"{t.text!r} is reserved and cannot name a coordinate", tok=t)
            if t.text in names:
                raise self.error(f"duplicate coordinate {t.text!r}", tok=t)
            names.append(t.text)
        if not names:
            raise self.error("expected coordinate names", ("identifier",))
        if len(names) != n:
            raise self.error(f"dim {n} but {len(names)} coordinates", tok=dim_tok)
        tvar = None
        if self.at("weight"):
            self.i += 1
            t = self.ident("coordinate")
            if t.text not in names:
                raise self.error(f"weight variable {t.text!r} is not a coordinate", tok=t)
            tvar = names.index(t.text)
        self.expect(";")
        self.file = StructureFile(name, Chart(tuple(names), tuple(range(n)), tvar))

    def _bind_name(self) -> Token:
        t = self.ident("name")
        if t.text in self.file.bindings:
            raise self.error(f"duplicate binding {t.text!r}", tok=t)
        if t.text in self.chart.names:
            raise self.error(f"{t.text!r} is a coordinate", tok=t)
        return t

    def _stmt_let(self) -> None:
        self.expect("let")
        name = self._bind_name()
        self.expect(":")
        kt = self.tok
        kind = self.ident("kind").text
        if _KIND_RE.fullmatch(kind) is None:
            raise self.error(f"unknown kind {kind!r}",
                             ("poly", "mv<k>", "form<k>", "extmv<k>", "extform<k>", "section", "twist", "gauge"), tok=kt)
        self.expect("=")
        et = self.tok
        v = self.expr()
        try:
            v = coerce_kind(v, kind, self.chart)
        except JkitError as exc:
            raise self.error(str(exc), tok=et) from None
        self.expect(";")
        self.file.bindings[name.text] = Binding(name.text, kind, v, name.line)

    def _stmt_typed(self, word: str, ok: tuple, what: str) -> None:
        self.expect(word)
        name = self._bind_name()
        self.expect("=")
        et = self.tok
        v = self.expr()
        if not isinstance(v, ok):
            raise self.error(f"a {word} must be {what}, got {_kind_name(v)}", tok=et)
        self.expect(";")
        self.file.bindings[name.text] = Binding(name.text, word, v, name.line)

    def _stmt_structure(self) -> None:
        self._stmt_typed("structure", (jacobi.TwistedJacobiStructure, jacobi.TlcsStructure,
                                       jacobi.HomogeneousTwistedPoisson), "a structure")

    def _stmt_subbundle(self) -> None:
        self._stmt_typed("subbundle", (dirac.SubBundleSpec,) + dirac.CourantDiracSpec, "a sub-bundle")

    def _stmt_check(self) -> None:
        start = self.expect("check")
        kt = self.tok
        parts = [self.ident("check kind").text]
        while self.at("-") and self.peek().kind == "id":
            self.i += 1
            parts.append(self.ident().text)
        kind = "-".join(parts)
        if kind not in CHECK_KINDS:
            raise self.error(f"unknown check kind {kind!r}", CHECK_KINDS, tok=kt)
        tt = self.tok
        target = self.ident("name").text
        if target not in self.file.bindings:
            raise self.error(f"unbound name {target!r}", tok=tt)
        options: dict[str, Any] = {}
        if self.at("with"):
            self.i += 1
            while True:
                key = self.ident("option name").text
                self.expect("=")
                options[key] = self._option_value()
                if not self.at(","):
                    break
                self.i += 1
        self.expect(";")
        d = CheckDirective(kind, target, options, start.line)
        try:
            _validate(self.file, d)
        except JkitError as exc:
            raise self.error(str(exc), tok=tt) from None
        self.file.checks.append(d)

    def _option_value(self) -> Any:
        t = self.tok
        if (t.kind == "id" and self.peek().text in (",", ";") and t.text not in self.file.bindings
                and t.text not in self.chart.names and not _GEN_RE.fullmatch(t.text)):
            self.i += 1
            return t.text
        if t.kind == "num" and self.peek().text in (",", ";"):
            self.i += 1
            return int(t.text)
        return self.expr()

    # expressions:  sum := prod (('+'|'-') prod)* ; prod := wedge (('*'|'/') wedge)* ;
    # wedge := unary ('^' unary)* ; unary := '-' unary | power ; power := atom ('**' unary)?

    def expr(self) -> Any:
        v = self._prod()
        while self.at("+") or self.at("-"):
            op = self.tok
            self.i += 1
            w = self._prod()
            v = self._apply(op, _add, v, w, 1 if op.text == "+" else -1)
        return v

    def _prod(self) -> Any:
        v = self._wedge()
        while self.at("*") or self.at("/"):
            op = self.tok
            self.i += 1
            w = self._wedge()
            if op.text == "*":
                v = self._apply(op, _scale, v, w)
            else:
                v = self._apply(op, _divide, v, w)
        return v

    def _wedge(self) -> Any:
        v = self._unary()
        while self.at("^"):
            op = self.tok
            self.i += 1
            w = self._unary()
            v = self._apply(op, _wedge, v, w)
        return v

    def _unary(self) -> Any:
        if self.at("-"):
            op = self.tok
            self.i += 1
            v = self._unary()
            return self._apply(op, _negate, v)
        if self.at("+"):
            self.i += 1
            return self._unary()
        return self._power()

    def _power(self) -> Any:
        v = self._atom()
        if self.at("**"):
            op = self.tok
            self.i += 1
            e = self._unary()
            v = self._apply(op, _power, v, e)
        return v

    def _apply(self, tok: Token, fn, *args):
        try:
            return fn(*args)
        except (JkitError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise self.error(str(exc), tok=tok) from None

    def _atom(self) -> Any:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return self.chart.const(int(t.text))
        if self.at("("):
            self.i += 1
            v = self.expr()
            self.expect(")")
            return v
        if t.kind != "id":
            raise self.error(f"unexpected {t.text or 'end of input'!r}", _PRIMARY_START)
        if self.peek().text == "(" and self.peek().kind == "op":
            return self._call()
        self.i += 1
        return self._name(t)

    def _name(self, t: Token) -> Any:
        f = self.file
        if t.text in f.bindings:
            return f.bindings[t.text].value
        if t.text in self.chart.names:
            return self.chart.var(t.text)
        m = _GEN_RE.fullmatch(t.text)
        if m:
            return self._generator(m.group(1), [int(m.group(2))], t)
        raise self.error(f"unbound name {t.text!r}", tok=t)

    def _generator(self, prefix: str, idx: list[int], t: Token):
        cls = Multivector if prefix == "d" else Form
        for i in idx:
            if not 0 <= i < self.chart.dim:
                raise self.error(f"axis {i} out of range for a {self.chart.dim}-dimensional chart", tok=t)
        return self._apply(t, lambda: cls.basis(self.chart, *idx))

    def _is_generator_call(self) -> bool:
        # d(1) / dx(1, 3): only integer literals inside the parentheses
        if self.tok.text not in ("d", "dx"):
            return False
        k = 2
        while True:
            if self.peek(k).kind != "num":
                return False
            nxt = self.peek(k + 1)
            if nxt.text == ")":
                return True
            if nxt.text != ",":
                return False
            k += 2

    def _call(self) -> Any:
        t = self.tok
        if self._is_generator_call():
            self.i += 2
            idx = [self.number()]
            while self.at(","):
                self.i += 1
                idx.append(self.number())
            self.expect(")")
            return self._generator("d" if t.text == "d" else "dx", idx, t)
        if t.text not in OPERATORS:
            raise self.error(f"unknown operator {t.text!r}", sorted(OPERATORS), tok=t)
        lo, hi, fn = OPERATORS[t.text]
        self.i += 1
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.expr())
            while self.at(","):
                self.i += 1
                args.append(self.expr())
        self.expect(")")
        if not lo <= len(args) <= hi:
            want = str(lo) if lo == hi else f"{lo}..{hi}"
            raise self.error(f"{t.text} takes {want} arguments, got {len(args)}", tok=t)
        ch = self.chart
        return self._apply(t, lambda: fn(ch, *args))


def _negate(v):
    if isinstance(v, ScalarPair):
        return ScalarPair(-v.a, -v.b, v.chart)
    if isinstance(v, dirac.GaugeElement):
        return -v
    if isinstance(v, Coeffs + Tensors + Exts + (E1Section,)):
        return -v
    raise JkitError(f"cannot negate {_kind_name(v)}")


def _divide(a, b):
    c = _constant(b, "divisor")
    if c == 0:
        raise JkitError("division by zero")
    return _scale(a, _const_like(b, 1 / c))


def _const_like(c: Coeff, value: Fraction) -> Coeff:
    if isinstance(c, ExpCoeff):
        return ExpCoeff.const(c.vars, c.tindex, value)
    return Polynomial.const(c.vars, value)


def _power(base, e):
    k = _constant(e, "exponent")
    if k.denominator != 1 or k < 0:
        raise JkitError("exponent must be a non-negative integer")
    if not isinstance(base, Coeffs):
        raise JkitError(f"cannot raise {_kind_name(base)} to a power")
    return base ** int(k)


# -- public entry points ---------------------------------------------------------

def parse(source: str) -> StructureFile:
    return Parser(source).parse_file()


def parse_file(path: str) -> StructureFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def eval_value(file: StructureFile, text: str) -> Any:
    p = Parser(text, file)
    v = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}", ("end of input", "+", "-", "*", "/", "^"))
    return v


def eval_expr(file: StructureFile, text: str) -> str:
    """Evaluate ``text`` over the bindings of ``file`` and print it canonically."""
    return format_value(eval_value(file, text))


# -- check driver ------------------------------------------------------------------

_TARGETS = {
    "twisted-jacobi": (jacobi.TwistedJacobiStructure, jacobi.TlcsStructure),
    "tlcs": (jacobi.TlcsStructure,),
    "homog-poisson": (jacobi.HomogeneousTwistedPoisson,),
    "closure": (dirac.SubBundleSpec,) + dirac.CourantDiracSpec,
    "courant-jacobi": (dirac.TwistData, jacobi.TwistedJacobiStructure, Form, ExtForm),
    "gauge": (dirac.SubBundleSpec,),
    "lift": (dirac.SubBundleSpec,),
    "quasi-jacobi": (jacobi.TwistedJacobiStructure, jacobi.TlcsStructure),
    "double": (jacobi.TwistedJacobiStructure, jacobi.TlcsStructure),
}
_OPTIONS = {
    "closure": {"twist", "jacobi"},
    "courant-jacobi": set(),
    "gauge": {"g", "twist"},
    "lift": {"twist", "variant"},
}


def _validate(file: StructureFile, d: CheckDirective) -> None:
    v = file.value(d.target)
    if not isinstance(v, _TARGETS[d.kind]):
        raise JkitError(f"check {d.kind} cannot run on {_kind_name(v)} {d.target!r}")
    allowed = _OPTIONS.get(d.kind, set())
    for k in d.options:
        if k not in allowed:
            raise JkitError(f"unknown option {k!r} for check {d.kind}")
    if d.kind == "gauge" and "g" not in d.options:
        raise JkitError("check gauge needs an option g=<gauge element>")
    if "g" in d.options:
        _gauge_el(d.options["g"])
    if "twist" in d.options:
        _twist(d.options["twist"])
    variant = d.options.get("variant")
    if variant is not None and variant not in dirac.LIFT_VARIANTS:
        raise JkitError(f"lift variant must be one of {dirac.LIFT_VARIANTS}")


def default_twist(file: StructureFile, spec) -> dirac.TwistData:
    """The twist a sub-bundle is naturally closed under."""
    if isinstance(spec, dirac.Gauged):
        return dirac.gauged_twist(default_twist(file, spec.base), spec.g)
    omega = getattr(spec, "omega", None)
    if omega is not None:
        return dirac.TwistData.exact(omega)
    if isinstance(spec, dirac.GraphSharp):
        for b in file.bindings.values():
            s = b.value
            if isinstance(s, jacobi.TlcsStructure):
                s = jacobi.tlcs_to_twisted_jacobi(s)
            if isinstance(s, jacobi.TwistedJacobiStructure) and s.lam == spec.lam and s.e == spec.e:
                return dirac.TwistData.exact(s.omega)
    return dirac.TwistData.zero(spec.chart)


def _monomials(ch: Chart, max_degree: int) -> list[Coeff]:
    vs = ch.variables()
    out = [ch.one()]
    for d in range(1, max_degree + 1):
        for combo in combinations_with_replacement(vs, d):
            m = ch.one()
            for v in combo:
                m = m * v
            out.append(m)
    return out


def run_directive(file: StructureFile, d: CheckDirective, max_test_degree: int = 1) -> list[VerificationReport]:
    v = file.value(d.target)
    ch = file.chart
    opts = d.options
    k = d.kind
    reports: list[VerificationReport]
    if k == "twisted-jacobi":
        reports = [jacobi.check_twisted_jacobi(_structure(v))]
    elif k == "tlcs":
        reports = [jacobi.check_tlcs(v)]
    elif k == "homog-poisson":
        reports = [jacobi.check_homogeneous_twisted_poisson(v)]
    elif k == "closure":
        if isinstance(v, dirac.CourantDiracSpec):
            reports = [dirac.courant_dirac_closure(v)]
        else:
            tw = _twist(opts["twist"]) if "twist" in opts else default_twist(file, v)
            mults = dirac.default_multipliers(v.chart, max_test_degree)
            reports = [dirac.check_closure(v, tw, mults, jacobi=bool(opts.get("jacobi", 0)))]
    elif k == "courant-jacobi":
        tw = _twist(v)
        reports = [dirac.check_courant_jacobi_axioms(tw, e1_basis(ch), _monomials(ch, max_test_degree))]
    elif k == "gauge":
        tw = _twist(opts["twist"]) if "twist" in opts else default_twist(file, v)
        mults = dirac.default_multipliers(v.chart, max_test_degree)
        reports = [dirac.check_gauge_proposition(v, _gauge_el(opts["g"]), tw, mults)]
    elif k == "lift":
        tw = _twist(opts["twist"]) if "twist" in opts else default_twist(file, v)
        variants = [opts["variant"]] if "variant" in opts else list(dirac.LIFT_VARIANTS)
        reports = []
        for var in variants:
            lifted = v.chart.lifted()
            mults = [m for m in _monomials(lifted, max_test_degree) if not m.is_constant()]
            r = dirac.check_lift(v, tw, var, mults)
            r.name = f"{d.label} {var}"
            reports.append(r)
        return reports
    elif k == "quasi-jacobi":
        qj = algebroid.QuasiJacobiData(_structure(v))
        reports = [algebroid.check_quasi_jacobi(qj, _monomials(ch, max_test_degree))]
    elif k == "double":
        qj = algebroid.QuasiJacobiData(_structure(v))
        reports = [algebroid.check_double_courant_jacobi(qj, test_functions=_monomials(ch, max_test_degree))]
    else:  # pragma: no cover - rejected by the parser
        raise JkitError(f"unknown check kind {k!r}")
    for r in reports:
        r.name = d.label
    return reports


def run_checks(file: StructureFile, max_test_degree: int = 1) -> list[VerificationReport]:
    out: list[VerificationReport] = []
    for d in file.checks:
        out.extend(run_directive(file, d, max_test_degree))
    return out
