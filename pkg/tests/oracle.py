"""Independent dense reference implementation over sympy.

Tensors are dicts from strictly increasing index tuples to sympy expressions.
Nothing here calls into the kernel except the converters at the bottom.
"""

from __future__ import annotations

from itertools import combinations, permutations, product

import sympy

from jkit.coeff import ExpCoeff, Polynomial


def symbols(n: int, names=None):
    names = names or [f"x{i}" for i in range(n)]
    return tuple(sympy.Symbol(s) for s in names)


def perm_sign(seq) -> int:
    seq = list(seq)
    if len(set(seq)) < len(seq):
        return 0
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def comp(t: dict, idx) -> sympy.Expr:
    """Component at an arbitrary (unsorted) index tuple."""
    s = perm_sign(idx)
    if s == 0:
        return sympy.Integer(0)
    return s * t.get(tuple(sorted(idx)), sympy.Integer(0))


def clean(t: dict) -> dict:
    out = {}
    for k, v in t.items():
        v = sympy.expand(v)
        if v != 0:
            out[k] = v
    return out


def add_into(t: dict, idx, c) -> None:
    s = perm_sign(idx)
    if s == 0:
        return
    k = tuple(sorted(idx))
    t[k] = t.get(k, 0) + s * c


def wedge(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            add_into(out, ka + kb, ca * cb)
    return clean(out)


def scale(a: dict, c) -> dict:
    return clean({k: v * c for k, v in a.items()})


def plus(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
    return clean(out)


def de_rham(w: dict, xs, degree: int) -> dict:
    """(dw)_{i0..ik} = sum_j (-1)^j d_{ij} w_{i0..^ij..ik}."""
    n = len(xs)
    out: dict = {}
    for idx in combinations(range(n), degree + 1):
        acc = 0
        for j, i in enumerate(idx):
            rest = idx[:j] + idx[j + 1:]
            acc += (-1) ** j * sympy.diff(w.get(rest, 0), xs[i])
        out[idx] = acc
    return clean(out)


def vector_apply(x: dict, f, xs) -> sympy.Expr:
    return sympy.expand(sum(c * sympy.diff(f, xs[k[0]]) for k, c in x.items()))


def lie_bracket(x: dict, y: dict, xs) -> dict:
    out = {}
    for i in range(len(xs)):
        out[(i,)] = vector_apply(x, y.get((i,), 0), xs) - vector_apply(y, x.get((i,), 0), xs)
    return clean(out)


def _decompose(t: dict, n: int) -> list[list[dict]]:
    """Each term f d_i1^...^d_ip as the list of vector fields [f d_i1, d_i2, ...]."""
    out = []
    for k, c in t.items():
        fields = [{(k[0],): c}] + [{(i,): sympy.Integer(1)} for i in k[1:]]
        out.append(fields)
    return out


def _wedge_all(fields: list[dict]) -> dict:
    acc = {(): sympy.Integer(1)}
    for f in fields:
        acc = wedge(acc, f)
    return acc


def schouten(p: dict, q: dict, xs, pdeg: int, qdeg: int) -> dict:
    """Leibniz expansion over decomposables: sum (-1)^(i+j) [Xi,Yj] ^ X^i ^ Y^j (p, q >= 1)."""
    assert pdeg >= 1 and qdeg >= 1
    n = len(xs)
    out: dict = {}
    for X in _decompose(p, n):
        for Y in _decompose(q, n):
            for i in range(pdeg):
                for j in range(qdeg):
                    br = lie_bracket(X[i], Y[j], xs)
                    rest = X[:i] + X[i + 1:] + Y[:j] + Y[j + 1:]
                    term = wedge(br, _wedge_all(rest))
                    out = plus(out, scale(term, (-1) ** (i + j)))
    return clean(out)


def interior(x: dict, w: dict, wdeg: int, n: int) -> dict:
    """(i_X w)_J = sum_i X^i w_{iJ} for a vector field X."""
    out = {}
    for J in combinations(range(n), wdeg - 1):
        out[J] = sum(x.get((i,), 0) * comp(w, (i,) + J) for i in range(n))
    return clean(out)


def sharp1(lam: dict, a: dict, n: int) -> dict:
    """(Lambda^# a)^j = sum_i a_i Lambda^{ij}."""
    return clean({(j,): sum(a.get((i,), 0) * comp(lam, (i, j)) for i in range(n)) for j in range(n)})


def evaluate(w: dict, vectors: list[dict], n: int) -> sympy.Expr:
    """w(X1, ..., Xk) = sum over index tuples w_{i1..ik} X1^{i1} ... Xk^{ik}."""
    acc = 0
    for idx in product(range(n), repeat=len(vectors)):
        c = comp(w, idx)
        if c == 0:
            continue
        for v, i in zip(vectors, idx):
            c = c * v.get((i,), 0)
        acc += c
    return sympy.expand(acc)


def lie_derivative_form(x: dict, w: dict, xs, degree: int) -> dict:
    """Coordinate formula: X^k d_k w_I + sum_a w_{i1..k..ip} d_{ia} X^k."""
    n = len(xs)
    out = {}
    for I in combinations(range(n), degree):
        acc = sum(x.get((k,), 0) * sympy.diff(w.get(I, 0), xs[k]) for k in range(n))
        for a in range(degree):
            for k in range(n):
                J = I[:a] + (k,) + I[a + 1:]
                acc += comp(w, J) * sympy.diff(x.get((k,), 0), xs[I[a]])
        out[I] = acc
    return clean(out)


# -- converters from kernel objects ------------------------------------------

def coeff_to_sympy(c, xs) -> sympy.Expr:
    if isinstance(c, Polynomial):
        acc = 0
        for exps, v in c.sorted_terms():
            m = sympy.Rational(v.numerator, v.denominator)
            for i, e in enumerate(exps):
                m *= xs[i] ** e
            acc += m
        return sympy.expand(acc)
    if isinstance(c, ExpCoeff):
        t = xs[c.tindex]
        return sympy.expand(sum(sympy.exp(k * t) * coeff_to_sympy(p, xs) for k, p in c.components.items()))
    return sympy.Rational(c)


def tensor_to_dict(t, xs) -> dict:
    return clean({k: coeff_to_sympy(c, xs) for k, c in t.terms.items()})


def same(a: dict, b: dict) -> bool:
    return plus(a, b, -1) == {}


def permutations_of(n: int):
    return permutations(range(n))
