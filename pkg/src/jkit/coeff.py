"""Exact coefficient rings.

``Polynomial`` is a sparse multivariate polynomial with rational coefficients.
``ExpCoeff`` is a finite sum ``sum_k e^{k t} p_k`` with polynomial ``p_k``; it is
the coefficient ring of the lifted chart ``M x R``.

Monomials are packed into a single integer, 16 bits per exponent, so that
multiplying monomials is integer addition.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ResourceError, StructuralError

Scalar = Union[int, Fraction]

_BITS = 16
_MASK = (1 << _BITS) - 1
MAX_TERMS = int(float(os.environ.get("JKIT_MAX_TERMS", "1e6")))


def _guard(n: int) -> None:
    if n > MAX_TERMS:
        raise ResourceError(f"expression grew to {n} terms (JKIT_MAX_TERMS={MAX_TERMS})")


def _pack(exps: Iterable[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (_BITS * i)
    return key


def _unpack(key: int, n: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(n))


def _fmt_scalar(c: Scalar) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Sparse polynomial over ``Q`` in the variables ``vars``."""

    __slots__ = ("vars", "_t", "_hash")

    def __init__(self, vars: Iterable[str], terms: Mapping[tuple[int, ...], Scalar] | None = None):
        self.vars = tuple(vars)
        t: dict[int, Scalar] = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(self.vars):
                raise StructuralError("exponent tuple length does not match the chart")
            if c:
                k = _pack(exps)
                s = t.get(k, 0) + Fraction(c)
                if s:
                    t[k] = s
                else:
                    t.pop(k, None)
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple[str, ...], t: dict[int, Scalar]) -> "Polynomial":
        p = object.__new__(cls)
        p.vars = vars
        p._t = t
        p._hash = None
        return p

    @classmethod
    def const(cls, vars: Iterable[str], c: Scalar) -> "Polynomial":
        return cls._raw(tuple(vars), {0: Fraction(c)} if c else {})

    @classmethod
    def var(cls, vars: Iterable[str], name: str | int) -> "Polynomial":
        vars = tuple(vars)
        i = _var_index(vars, name)
        return cls._raw(vars, {1 << (_BITS * i): Fraction(1)})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        n = len(self.vars)
        return {_unpack(k, n): Fraction(c) for k, c in self._t.items()}

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return Fraction(self._t.get(0, 0))

    def degree(self) -> int:
        n = len(self.vars)
        return max((sum(_unpack(k, n)) for k in self._t), default=-1)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._t.items())))
        return self._hash

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vars is not self.vars and other.vars != self.vars:
                raise StructuralError(f"chart mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(self.vars, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        if isinstance(other, ExpCoeff):
            return NotImplemented
        o = self._coerce(other)
        t = dict(self._t)
        for k, c in o._t.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = s
            else:
                del t[k]
        return Polynomial._raw(self.vars, t)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.vars, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, ExpCoeff):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, ExpCoeff):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial._raw(self.vars, {})
            return Polynomial._raw(self.vars, {k: c * other for k, c in self._t.items()})
        o = self._coerce(other)
        a, b = self._t, o._t
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((kb, cb),) = b.items()
            return Polynomial._raw(self.vars, {k + kb: c * cb for k, c in a.items()})
        t: dict[int, Scalar] = {}
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                s = t.get(k, 0) + ca * cb
                if s:
                    t[k] = s
                else:
                    del t[k]
        _guard(len(t))
        return Polynomial._raw(self.vars, t)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Polynomial":
        if isinstance(other, Polynomial):
            other = other.constant_value()
        return self * (1 / Fraction(other))

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def partial(self, var: str | int) -> "Polynomial":
        i = _var_index(self.vars, var)
        shift = _BITS * i
        unit = 1 << shift
        t: dict[int, Scalar] = {}
        for k, c in self._t.items():
            e = (k >> shift) & _MASK
            if e:
                t[k - unit] = c * e
        return Polynomial._raw(self.vars, t)

    def subs(self, values: Mapping[str, Scalar]) -> "Polynomial":
        """Substitute rational values for some variables."""
        idx = {_var_index(self.vars, v): Fraction(x) for v, x in values.items()}
        out: dict[int, Scalar] = {}
        n = len(self.vars)
        for k, c in self._t.items():
            exps = list(_unpack(k, n))
            for i, x in idx.items():
                c = c * x ** exps[i]
                exps[i] = 0
            if c:
                kk = _pack(exps)
                s = out.get(kk, 0) + c
                if s:
                    out[kk] = s
                else:
                    del out[kk]
        return Polynomial._raw(self.vars, out)

    def embed(self, vars: tuple[str, ...]) -> "Polynomial":
        """Re-express over a larger variable list containing ``self.vars``."""
        if vars == self.vars:
            return self
        pos = [_var_index(vars, v) for v in self.vars]
        n = len(self.vars)
        t = {}
        for k, c in self._t.items():
            exps = _unpack(k, n)
            t[sum(e << (_BITS * pos[i]) for i, e in enumerate(exps))] = c
        return Polynomial._raw(tuple(vars), t)

    # -- printing ---------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        n = len(self.vars)
        items = [(_unpack(k, n), c) for k, c in self._t.items()]
        items.sort(key=lambda it: (-sum(it[0]), tuple(-e for e in it[0])))
        return items

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts: list[str] = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                self.vars[i] if e == 1 else f"{self.vars[i]}**{e}"
                for i, e in enumerate(exps) if e
            )
            neg = c < 0
            a = abs(c)
            if not mono:
                body = _fmt_scalar(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_scalar(a)}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def leading_negative(self) -> bool:
        terms = self.sorted_terms()
        return bool(terms) and terms[0][1] < 0


def _var_index(vars: tuple[str, ...], name: str | int) -> int:
    if isinstance(name, int):
        if 0 <= name < len(vars):
            return name
    elif name in vars:
        return vars.index(name)
    raise StructuralError(f"unknown variable {name!r} for chart {vars}")


class ExpCoeff:
    """``sum_k e^{k t} p_k`` where ``t`` is the variable at ``tindex``."""

    __slots__ = ("vars", "tindex", "_c", "_hash")

    def __init__(self, vars: Iterable[str], tindex: int,
                 components: Mapping[int, Polynomial] | None = None):
        self.vars = tuple(vars)
        self.tindex = tindex
        c: dict[int, Polynomial] = {}
        for k, p in (components or {}).items():
            if not isinstance(p, Polynomial):
                p = Polynomial.const(self.vars, p)
            if p.vars != self.vars:
                raise StructuralError("component lives on a different chart")
            q = c.get(k)
            q = p if q is None else q + p
            if q:
                c[k] = q
            else:
                c.pop(k, None)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, vars, tindex, c) -> "ExpCoeff":
        e = object.__new__(cls)
        e.vars = vars
        e.tindex = tindex
        e._c = c
        e._hash = None
        return e

    @classmethod
    def const(cls, vars, tindex: int, c: Scalar) -> "ExpCoeff":
        vars = tuple(vars)
        return cls._raw(vars, tindex, {0: Polynomial.const(vars, c)} if c else {})

    @classmethod
    def exp(cls, vars, tindex: int, k: int, p: Polynomial | Scalar = 1) -> "ExpCoeff":
        return cls(vars, tindex, {k: p})

    @property
    def components(self) -> dict[int, Polynomial]:
        return dict(self._c)

    def weights(self) -> set[int]:
        return set(self._c)

    def __len__(self) -> int:
        return sum(len(p) for p in self._c.values())

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_constant(self) -> bool:
        return not self._c or (list(self._c) == [0] and self._c[0].is_constant())

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("coefficient is not constant")
        return self._c[0].constant_value() if self._c else Fraction(0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExpCoeff):
            return self.vars == other.vars and self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: Polynomial.const(self.vars, other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._c.items())))
        return self._hash

    def _coerce(self, other) -> "ExpCoeff":
        if isinstance(other, ExpCoeff):
            if other.vars != self.vars or other.tindex != self.tindex:
                raise StructuralError("exponential coefficients on different charts")
            return other
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise StructuralError("chart mismatch")
            return ExpCoeff._raw(self.vars, self.tindex, {0: other} if other else {})
        if isinstance(other, (int, Fraction)):
            return ExpCoeff.const(self.vars, self.tindex, other)
        raise TypeError(f"cannot combine ExpCoeff with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        c = dict(self._c)
        for k, p in o._c.items():
            q = c.get(k)
            q = p if q is None else q + p
            if q:
                c[k] = q
            else:
                c.pop(k, None)
        return ExpCoeff._raw(self.vars, self.tindex, c)

    __radd__ = __add__

    def __neg__(self):
        return ExpCoeff._raw(self.vars, self.tindex, {k: -p for k, p in self._c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ExpCoeff._raw(self.vars, self.tindex, {})
            return ExpCoeff._raw(self.vars, self.tindex, {k: p * other for k, p in self._c.items()})
        o = self._coerce(other)
        c: dict[int, Polynomial] = {}
        for ka, pa in self._c.items():
            for kb, pb in o._c.items():
                k = ka + kb
                q = pa * pb
                r = c.get(k)
                q = q if r is None else r + q
                if q:
                    c[k] = q
                else:
                    c.pop(k, None)
        _guard(sum(len(p) for p in c.values()))
        return ExpCoeff._raw(self.vars, self.tindex, c)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "ExpCoeff":
        return self * (1 / Fraction(other))

    def __pow__(self, n: int) -> "ExpCoeff":
        out = ExpCoeff.const(self.vars, self.tindex, 1)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, var: str | int) -> "ExpCoeff":
        i = _var_index(self.vars, var)
        if i == self.tindex:
            return self.exp_partial_t()
        c = {}
        for k, p in self._c.items():
            q = p.partial(i)
            if q:
                c[k] = q
        return ExpCoeff._raw(self.vars, self.tindex, c)

    def exp_partial_t(self) -> "ExpCoeff":
        """``d/dt`` with the product rule ``d/dt(e^{kt} p) = e^{kt}(k p + dp/dt)``."""
        c = {}
        for k, p in self._c.items():
            q = p * k + p.partial(self.tindex)
            if q:
                c[k] = q
        return ExpCoeff._raw(self.vars, self.tindex, c)

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            p = self._c[k]
            if k == 0:
                body = str(p)
                if len(p) > 1:
                    body = f"({body})"
            elif p == 1:
                body = f"exp({k})"
            elif p == -1:
                body = f"-exp({k})"
            else:
                body = f"exp({k})*({p})"
            if parts and body.startswith("-"):
                parts.append(" - " + body[1:])
            elif parts:
                parts.append(" + " + body)
            else:
                parts.append(body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"ExpCoeff({self})"

    def leading_negative(self) -> bool:
        return False


Coeff = Union[Polynomial, ExpCoeff]
