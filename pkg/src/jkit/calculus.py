"""Differential operators: de Rham, Schouten, Lie derivatives, cocycle-modified versions.

Sign conventions are the ones fixed by ``[X, f] = X(f)``, the Lie bracket on
vector fields, graded antisymmetry and the graded Leibniz rule
``[P, Q^R] = [P, Q]^R + (-1)^((p-1)q) Q^[P, R]``.  In coordinates, with odd
symbols ``theta_i`` for ``d_i``,

    [P, Q] = sum_i (P d/dtheta_i)(d_i Q) - (-1)^((p-1)(q-1)) (Q d/dtheta_i)(d_i P)

where ``d/dtheta_i`` acts from the right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .chart import Chart
from .coeff import Coeff, ExpCoeff, Polynomial
from .errors import DegreeError, StructuralError
from .exterior import (
    ExtForm,
    ExtMultivector,
    Form,
    Multivector,
    _wedge_keys,
    contract,
    ext_covector,
    ext_interior,
    ext_vector,
    interior,
    sharp,
    wedge,
)


def de_rham(w: Form) -> Form:
    if isinstance(w, (Polynomial, ExpCoeff)):
        raise StructuralError("de_rham needs a Form; wrap scalars with Form.scalar")
    ch = w.chart
    t: dict = {}
    for axis in range(ch.dim):
        if ch.axes[axis] is None:
            continue
        for k, c in w.terms.items():
            d = ch.deriv(c, axis)
            if not d:
                continue
            s, key = _wedge_keys((axis,), k)
            if not s:
                continue
            if s < 0:
                d = -d
            prev = t.get(key)
            d = d if prev is None else prev + d
            if d:
                t[key] = d
            else:
                del t[key]
    return Form._raw(ch, w.degree + 1, t)


def differential(ch: Chart, f) -> Form:
    """``df`` of a coefficient function."""
    return de_rham(Form.scalar(ch, f))


def apply_vector(x: Multivector, f) -> Coeff:
    """``X(f)`` for a vector field and a function."""
    ch = x.chart
    out = ch.zero()
    for (i,), c in x.terms.items():
        d = ch.deriv(f, i)
        if d:
            out = out + c * d
    return out


def _half(P: Multivector, Q: Multivector, dQ: dict) -> dict:
    t: dict = {}
    ch = P.chart
    p = P.degree
    for kP, cP in P.terms.items():
        for m, i in enumerate(kP):
            if ch.axes[i] is None:
                continue
            dq = dQ.get(i)
            if dq is None:
                dq = dQ[i] = Q.deriv(i)
            if not dq.terms:
                continue
            sign = -1 if (p - 1 - m) & 1 else 1
            rest = kP[:m] + kP[m + 1:]
            for kQ, cQ in dq.terms.items():
                s, key = _wedge_keys(rest, kQ)
                if not s:
                    continue
                c = cP * cQ
                if s * sign < 0:
                    c = -c
                prev = t.get(key)
                c = c if prev is None else prev + c
                if c:
                    t[key] = c
                else:
                    del t[key]
    return t


def schouten(P: Multivector, Q: Multivector) -> Multivector:
    """Schouten bracket ``[P, Q]`` of multivector fields (degree ``p + q - 1``)."""
    if not isinstance(P, Multivector) or not isinstance(Q, Multivector):
        raise StructuralError("schouten expects two multivectors")
    if P.chart != Q.chart:
        raise StructuralError("multivectors live on different charts")
    p, q = P.degree, Q.degree
    ch = P.chart
    if p + q == 0:
        return Multivector.zero(ch, 0)
    a = _half(P, Q, {})
    b = _half(Q, P, {})
    sign = -1 if ((p - 1) * (q - 1)) & 1 else 1
    # result = a - sign * b
    for k, c in b.items():
        c = -c if sign > 0 else c
        prev = a.get(k)
        c = c if prev is None else prev + c
        if c:
            a[k] = c
        else:
            a.pop(k, None)
    return Multivector._raw(ch, p + q - 1, a)


def lie_derivative(x: Multivector, w):
    """``L_X`` on forms (Cartan formula) or multivectors (``[X, .]``)."""
    if isinstance(w, Multivector):
        return schouten(x, w)
    dw = interior(x, de_rham(w))
    if w.degree == 0:
        return dw
    return dw + de_rham(interior(x, w))


# -- the trivial Lie algebroid TM x R and its 1-cocycle (0, 1) ---------------

def unit_covector(ch: Chart) -> ExtForm:
    """The 1-cocycle ``(0, 1)`` of ``TM x R``."""
    return ext_covector(Form.zero(ch, 1), 1)


def unit_vector(ch: Chart) -> ExtMultivector:
    return ext_vector(Multivector.zero(ch, 1), 1)


def _as_ext_form(w, ch: Optional[Chart] = None) -> ExtForm:
    if isinstance(w, ExtForm):
        return w
    if isinstance(w, (Polynomial, ExpCoeff)) and ch is not None:
        return ExtForm(Form.scalar(ch, w))
    raise StructuralError("expected an extended form")


def ext_d(w: ExtForm) -> ExtForm:
    """Differential of ``TM x R``: ``(eta, xi) -> (d eta, -d xi)``."""
    return ExtForm.from_aug(de_rham(w.aug()))


def d_phi(w: ExtForm, phi: ExtForm) -> ExtForm:
    """``d^phi w = d w + phi ^ w``."""
    a = w.aug()
    return ExtForm.from_aug(de_rham(a) + wedge(phi.aug(), a))


def d_01(w, ch: Optional[Chart] = None) -> ExtForm:
    """``d^{(0,1)}(eta, xi) = (d eta, eta - d xi)``; on a function ``f`` gives ``(df, f)``."""
    w = _as_ext_form(w, ch)
    return d_phi(w, unit_covector(w.chart))


def lie_mod(x: ExtMultivector, w: ExtForm, phi: Optional[ExtForm] = None) -> ExtForm:
    """``L^phi_X = d^phi i_X + i_X d^phi`` (``phi`` defaults to ``(0, 1)``)."""
    if phi is None:
        phi = unit_covector(x.chart)
    out = ext_interior(x, d_phi(w, phi))
    if w.degree:
        out = out + d_phi(ext_interior(x, w), phi)
    return out


def ext_schouten(P: ExtMultivector, Q: ExtMultivector) -> ExtMultivector:
    """Schouten bracket of ``TM x R`` (unit section central, anchor ignores it)."""
    return ExtMultivector.from_aug(schouten(P.aug(), Q.aug()))


def ext_schouten_mod(P: ExtMultivector, Q: ExtMultivector,
                     phi: Optional[ExtForm] = None) -> ExtMultivector:
    """``[P,Q]^phi = [P,Q] + (p-1) P^i_phi Q + (-1)^p (q-1) (i_phi P)^Q``."""
    if phi is None:
        phi = unit_covector(P.chart)
    p, q = P.degree, Q.degree
    A, B, F = P.aug(), Q.aug(), phi.aug()
    out = schouten(A, B)
    if p - 1 and q:
        out = out + wedge(A, contract(F, B)) * (p - 1)
    if q - 1 and p:
        out = out + wedge(contract(F, A), B) * ((-1) ** p * (q - 1))
    return ExtMultivector.from_aug(out)


# -- sharp maps ------------------------------------------------------------

def sharp_pair(lam: Multivector, e: Multivector, w) -> ExtMultivector:
    """``(Lambda, E)^#`` on extended forms of any degree (identity on scalars)."""
    pi = ExtMultivector(lam, e)
    if not isinstance(w, ExtForm):
        w = _as_ext_form(w, lam.chart)
    return ExtMultivector.from_aug(sharp(pi.aug(), w.aug()))


def ext_sharp(pi: ExtMultivector, w: ExtForm) -> ExtMultivector:
    """Sharp of an arbitrary extended bivector ``(C, Y)``."""
    if pi.degree != 2:
        raise DegreeError("sharp needs an extended bivector")
    return ExtMultivector.from_aug(sharp(pi.aug(), w.aug()))


def sharp_tensor_one(lam: Multivector, w: Form, x: Multivector) -> Multivector:
    """``(Lambda^# (x) 1)(w)(X)``.

    For a 3-form: the bivector ``(a, b) -> -w(Lambda^# a, Lambda^# b, X)``.
    For a 2-form: the vector ``a -> w(Lambda^# a, X)``.
    """
    if w.degree == 3:
        return -sharp(lam, interior(x, w))
    if w.degree == 2:
        return sharp(lam, interior(x, w))
    raise StructuralError("sharp_tensor_one needs a 2-form or a 3-form")


def ext_sharp_tensor_one(pi: ExtMultivector, w: ExtForm, x: ExtMultivector) -> ExtMultivector:
    """Extended analogue: ``(a, b) -> -w(pi^# a, pi^# b, x)`` for a degree-3 ``w``."""
    if w.degree == 3:
        return -ext_sharp(pi, ext_interior(x, w))
    if w.degree == 2:
        return ext_sharp(pi, ext_interior(x, w))
    raise StructuralError("ext_sharp_tensor_one needs degree 2 or 3")


@dataclass(frozen=True)
class CocycleContext:
    """The 1-cocycle ``phi`` of ``TM x R`` and, when a structure is attached, ``W``."""

    phi: ExtForm
    w: Optional[ExtMultivector] = None

    @classmethod
    def canonical(cls, ch: Chart, e: Optional[Multivector] = None) -> "CocycleContext":
        w = None if e is None else ExtMultivector(-e, Multivector.zero(ch, 0))
        return cls(unit_covector(ch), w)
