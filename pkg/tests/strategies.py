"""Hypothesis strategies for small random polynomials and tensors."""

from __future__ import annotations

from itertools import combinations, product

from hypothesis import strategies as st

from jkit.chart import Chart
from jkit.coeff import Polynomial
from jkit.exterior import ExtMultivector, Form, Multivector

small = st.integers(-3, 3)


def chart(n: int) -> Chart:
    return Chart.coords(*[f"x{i}" for i in range(n)])


def _monomials(n: int, max_degree: int) -> list[tuple[int, ...]]:
    return [e for e in product(range(max_degree + 1), repeat=n) if sum(e) <= max_degree]


@st.composite
def polys(draw, ch: Chart, max_degree: int = 1, max_terms: int = 3):
    terms = draw(st.dictionaries(st.sampled_from(_monomials(len(ch.names), max_degree)), small, max_size=max_terms))
    return ch.coerce(Polynomial(ch.names, terms))


@st.composite
def tensors(draw, ch: Chart, cls, degree: int, max_degree: int = 1, max_terms: int = 3):
    keys = list(combinations(range(ch.dim), degree))
    chosen = draw(st.lists(st.sampled_from(keys), max_size=max_terms, unique=True)) if keys else []
    terms = {k: draw(polys(ch, max_degree)) for k in chosen}
    return cls(ch, degree, terms)


def multivectors(ch, degree, **kw):
    return tensors(ch, Multivector, degree, **kw)


def forms(ch, degree, **kw):
    return tensors(ch, Form, degree, **kw)


@st.composite
def ext_pairs(draw, ch: Chart, cls, degree: int, **kw):
    inner = Multivector if cls is ExtMultivector else Form
    a = draw(tensors(ch, inner, degree, **kw))
    b = draw(tensors(ch, inner, degree - 1, **kw)) if degree else None
    return cls(a, b)
