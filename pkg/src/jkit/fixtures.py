"""Reference structures used by the tests, the CLI fixtures and the docs."""

from __future__ import annotations

from .chart import Chart
from .exterior import Form, Multivector
from .jacobi import HomogeneousTwistedPoisson, TlcsStructure, TwistedJacobiStructure
from .calculus import de_rham
from .exterior import wedge


def chart(n: int) -> Chart:
    return Chart.coords(*[f"x{i}" for i in range(n)])


def example3() -> TwistedJacobiStructure:
    """``Lambda = d1^d3 + d2^d4 + x4 d0^d4``, ``E = d0``, ``omega = dx1^dx3`` on R^5."""
    ch = chart(5)
    d = lambda *i: Multivector.basis(ch, *i)
    x4 = ch.var("x4")
    lam = d(1, 3) + d(2, 4) + d(0, 4) * x4
    return TwistedJacobiStructure(lam, d(0), Form.basis(ch, 1, 3))


def negative() -> TwistedJacobiStructure:
    """``Lambda = d1^d3``, ``E = d0``, ``omega = 0``: fails with residual ``2 d0^d1^d3``."""
    ch = chart(5)
    return TwistedJacobiStructure(Multivector.basis(ch, 1, 3), Multivector.basis(ch, 0), Form.zero(ch, 2))


def contact_r3() -> TwistedJacobiStructure:
    """The Jacobi pair of the contact form ``dx0 - x2 dx1`` on R^3, with ``omega = 0``."""
    ch = chart(3)
    d = lambda *i: Multivector.basis(ch, *i)
    lam = d(1, 2) + d(0, 2) * ch.var("x2")
    return TwistedJacobiStructure(lam, d(0), Form.zero(ch, 2))


def lie_poisson_so3() -> TwistedJacobiStructure:
    ch = chart(3)
    x = [ch.var(i) for i in range(3)]
    d = lambda *i: Multivector.basis(ch, *i)
    lam = d(0, 1) * x[2] + d(1, 2) * x[0] + d(2, 0) * x[1]
    return TwistedJacobiStructure(lam, Multivector.zero(ch, 1), Form.zero(ch, 2))


def twisted_poisson_r3() -> TwistedJacobiStructure:
    """``d1^d2`` with ``omega = x3 dx1^dx2`` on coordinates ``x1 x2 x3``."""
    ch = Chart.coords("x1", "x2", "x3")
    lam = Multivector.basis(ch, 0, 1)
    return TwistedJacobiStructure(lam, Multivector.zero(ch, 1), Form.basis(ch, 0, 1) * ch.var("x3"))


def homogeneous_plane() -> HomogeneousTwistedPoisson:
    ch = chart(2)
    z = (Multivector.basis(ch, 0) * ch.var(0) + Multivector.basis(ch, 1) * ch.var(1)) / 2
    return HomogeneousTwistedPoisson(Multivector.basis(ch, 0, 1), z, Form.basis(ch, 0, 1))


def tlcs_r4(k: Form | None = None, lee: Form | None = None) -> TlcsStructure:
    """``Theta = dx0^dx1 + dx2^dx3``, closed Lee form, ``omega = dk + lee^k - Theta``."""
    ch = chart(4)
    y = [ch.var(i) for i in range(4)]
    D = lambda *i: Form.basis(ch, *i)
    th = D(0, 1) + D(2, 3)
    lee = D(0) if lee is None else lee
    k = D(3) * y[1] * y[2] if k is None else k
    return TlcsStructure(th, lee, de_rham(k) + wedge(lee, k) - th)
