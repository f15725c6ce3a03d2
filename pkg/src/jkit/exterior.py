"""Antisymmetric tensors in canonical form.

Keys are strictly increasing tuples of axis indices.  Forms use the
determinant convention ``dx_I(d_I) = 1``, so ``(dx1^dx3)(d1, d3) = 1``.
Contractions act on the first slot: ``(i_X w)(Y, ...) = w(X, Y, ...)``.

The extended bundles are modelled on the extended chart, whose axis 0 is the
unit section ``e = (0, 1)`` of ``TM x R`` with dual ``eps = (0, 1)`` of
``T*M x R``.  Then ``(P, Q) = P + e^Q`` and ``(eta, xi) = eta + eps^xi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Optional, Sequence, Union

from .chart import Chart
from .coeff import Coeff
from .errors import DegreeError, StructuralError

Key = tuple[int, ...]


def _sort_sign(idx: Sequence[int]) -> tuple[int, Key]:
    """Sign of the permutation sorting ``idx`` (0 if an index repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


@lru_cache(maxsize=None)
def _wedge_keys(a: Key, b: Key) -> tuple[int, Key]:
    if set(a) & set(b):
        return 0, ()
    inv = sum(1 for i in a for j in b if i > j)
    return (-1 if inv & 1 else 1), tuple(sorted(a + b))


@lru_cache(maxsize=None)
def _remove(key: Key, axis: int) -> tuple[int, Key]:
    """First-slot contraction of a basis element with the dual of ``axis``."""
    if axis not in key:
        return 0, ()
    p = key.index(axis)
    return (-1 if p & 1 else 1), key[:p] + key[p + 1:]


class _Tensor:
    __slots__ = ("chart", "degree", "terms", "_hash")
    _prefix = "?"

    def __init__(self, chart: Chart, degree: int, terms: Mapping[Sequence[int], object] | None = None):
        if degree < 0:
            raise DegreeError("negative degree")
        self.chart = chart
        self.degree = degree
        out: dict[Key, Coeff] = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DegreeError(f"key {idx} does not have length {degree}")
            if any(not 0 <= i < chart.dim for i in idx):
                raise StructuralError(f"index out of range in {idx}")
            s, key = _sort_sign(idx)
            if not s:
                continue
            c = chart.coerce(c)
            if s < 0:
                c = -c
            prev = out.get(key)
            c = c if prev is None else prev + c
            if c:
                out[key] = c
            else:
                out.pop(key, None)
        self.terms = out
        self._hash = None

    @classmethod
    def _raw(cls, chart: Chart, degree: int, terms: dict[Key, Coeff]):
        t = object.__new__(cls)
        t.chart = chart
        t.degree = degree
        t.terms = terms
        t._hash = None
        return t

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls._raw(chart, degree, {})

    @classmethod
    def scalar(cls, chart: Chart, c):
        c = chart.coerce(c)
        return cls._raw(chart, 0, {(): c} if c else {})

    @classmethod
    def basis(cls, chart: Chart, *idx: int, coeff=1):
        return cls(chart, len(idx), {idx: coeff})

    # -- structure --------------------------------------------------------

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise StructuralError(f"kind mismatch: {type(self).__name__} vs {type(other).__name__}")
        if other.chart != self.chart:
            raise StructuralError("tensors live on different charts")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if type(other) is not type(self):
            return NotImplemented
        return self.chart == other.chart and self.degree == other.degree and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.chart, self.degree, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        if other.degree != self.degree:
            if not other.terms:
                return self
            if not self.terms:
                return other
            raise DegreeError(f"cannot add degree {self.degree} and degree {other.degree}")
        t = dict(self.terms)
        for k, c in other.terms.items():
            prev = t.get(k)
            c = c if prev is None else prev + c
            if c:
                t[k] = c
            else:
                del t[k]
        return type(self)._raw(self.chart, self.degree, t)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.chart, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, _Tensor):
            return NotImplemented
        c = self.chart.coerce(c)
        if not c:
            return type(self)._raw(self.chart, self.degree, {})
        t = {}
        for k, v in self.terms.items():
            w = v * c
            if w:
                t[k] = w
        return type(self)._raw(self.chart, self.degree, t)

    __rmul__ = __mul__

    def __truediv__(self, c):
        from fractions import Fraction
        return self * (1 / Fraction(c))

    def coeff(self, *idx: int) -> Coeff:
        s, key = _sort_sign(idx)
        if not s:
            return self.chart.zero()
        c = self.terms.get(key)
        if c is None:
            return self.chart.zero()
        return c if s > 0 else -c

    def scalar_value(self) -> Coeff:
        if self.degree:
            raise DegreeError("not a degree-0 tensor")
        return self.terms.get((), self.chart.zero())

    def map_coeffs(self, fn):
        t = {}
        for k, c in self.terms.items():
            c = fn(c)
            if c:
                t[k] = c
        return type(self)._raw(self.chart, self.degree, t)

    def deriv(self, axis: int):
        """Coefficient-wise derivative along one axis."""
        ch = self.chart
        t = {}
        for k, c in self.terms.items():
            d = ch.deriv(c, axis)
            if d:
                t[k] = d
        return type(self)._raw(ch, self.degree, t)

    def reindex(self, chart: Chart, axis_map: Mapping[int, int]):
        """Move to ``chart`` sending axis ``i`` to ``axis_map[i]``; coefficients are coerced."""
        return type(self)(chart, self.degree,
                          {tuple(axis_map[i] for i in k): c for k, c in self.terms.items()})

    def with_chart(self, chart: Chart):
        """Re-express over a chart with the same axes and a larger coefficient ring."""
        if chart.dim != self.chart.dim:
            raise StructuralError("axis count differs")
        return type(self)._raw(chart, self.degree, {k: chart.coerce(c) for k, c in self.terms.items()})

    # -- printing ---------------------------------------------------------

    def _basis_str(self, key: Key) -> str:
        return "^".join(f"{self._prefix}{self.chart.axis_label(i)}" for i in key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        if self.degree == 0:
            return str(self.terms[()])
        parts: list[str] = []
        for key in sorted(self.terms):
            neg, body = format_term(self.terms[key], self._basis_str(key))
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


def format_term(c: Coeff, basis: str) -> tuple[bool, str]:
    """Split a coefficient times a basis word into (negative?, text)."""
    if c.is_constant():
        v = c.constant_value()
        a = abs(v)
        if a == 1:
            return v < 0, basis
        s = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return v < 0, f"{s}*{basis}"
    if c.leading_negative():
        return True, f"({-c})*{basis}"
    return False, f"({c})*{basis}"


class Multivector(_Tensor):
    """Multivector field; ``d<i>`` is the coordinate vector field of axis ``i``."""

    __slots__ = ()
    _prefix = "d"


class Form(_Tensor):
    """Differential form; ``dx<i>`` is the coordinate 1-form of axis ``i``."""

    __slots__ = ()
    _prefix = "dx"


Tensor = Union[Multivector, Form]


# -- algebra ---------------------------------------------------------------

def wedge(a, b):
    """Exterior product of two multivectors or two forms."""
    if not isinstance(a, _Tensor) or not isinstance(b, _Tensor):
        if isinstance(a, _Tensor):
            return a * b
        if isinstance(b, _Tensor):
            return b * a
        return a * b
    a._check(b)
    t: dict[Key, Coeff] = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            s, k = _wedge_keys(ka, kb)
            if not s:
                continue
            c = ca * cb
            if s < 0:
                c = -c
            prev = t.get(k)
            c = c if prev is None else prev + c
            if c:
                t[k] = c
            else:
                del t[k]
    return type(a)._raw(a.chart, a.degree + b.degree, t)


def _contract(v: _Tensor, w: _Tensor):
    """First-slot contraction of ``w`` by the degree-1 tensor ``v`` of the other kind."""
    if v.degree != 1:
        raise DegreeError("contraction needs a degree-1 argument")
    if w.degree == 0:
        raise DegreeError("cannot contract a degree-0 tensor")
    if v.chart != w.chart:
        raise StructuralError("tensors live on different charts")
    t: dict[Key, Coeff] = {}
    for (i,), cv in v.terms.items():
        for k, cw in w.terms.items():
            s, r = _remove(k, i)
            if not s:
                continue
            c = cv * cw
            if s < 0:
                c = -c
            prev = t.get(r)
            c = c if prev is None else prev + c
            if c:
                t[r] = c
            else:
                del t[r]
    return type(w)._raw(w.chart, w.degree - 1, t)


def interior(x: Multivector, w: Form) -> Form:
    """``i_X w`` with ``(i_X w)(Y, ...) = w(X, Y, ...)``."""
    if not isinstance(x, Multivector) or not isinstance(w, Form):
        raise StructuralError("interior expects (Multivector, Form)")
    return _contract(x, w)


def contract(a: Form, p: Multivector) -> Multivector:
    """``i_a P`` with ``(i_a P)(b, ...) = P(a, b, ...)``."""
    if not isinstance(a, Form) or not isinstance(p, Multivector):
        raise StructuralError("contract expects (Form, Multivector)")
    return _contract(a, p)


def evaluate(w: _Tensor, *args: _Tensor) -> Coeff:
    """Full evaluation ``w(a1, ..., ak)`` of a form on vectors (or a multivector on covectors)."""
    if len(args) != w.degree:
        raise StructuralError(f"expected {w.degree} arguments, got {len(args)}")
    for a in args:
        w = _contract(a, w)
    return w.scalar_value()


def pair(w: Form, p: Multivector) -> Coeff:
    """Natural pairing of a k-form with a k-vector (determinant convention)."""
    if w.degree != p.degree:
        raise DegreeError("pairing needs equal degrees")
    if w.chart != p.chart:
        raise StructuralError("tensors live on different charts")
    out = w.chart.zero()
    for k, c in w.terms.items():
        d = p.terms.get(k)
        if d is not None:
            out = out + c * d
    return out


def sharp1(lam: Multivector, a: Form) -> Multivector:
    """``Lambda^#(alpha)`` with ``<beta, Lambda^# alpha> = Lambda(alpha, beta)``."""
    if lam.degree != 2:
        raise DegreeError("sharp needs a bivector")
    return contract(a, lam)


def sharp(lam: Multivector, w: Form) -> Multivector:
    """Extension of ``Lambda^#`` to k-forms.

    With the sign ``(Lambda^# w)(a_1..a_k) = (-1)^k w(Lambda^# a_1, ..., Lambda^# a_k)``
    this is the k-th exterior power of the map on 1-forms.
    """
    if lam.degree != 2:
        raise DegreeError("sharp needs a bivector")
    ch = lam.chart
    if w.degree == 0:
        return Multivector._raw(ch, 0, dict(w.terms))
    images = {}
    out = Multivector.zero(ch, w.degree)
    for key, c in w.terms.items():
        acc = None
        for i in key:
            img = images.get(i)
            if img is None:
                img = images[i] = contract(Form.basis(ch, i), lam)
            acc = img if acc is None else wedge(acc, img)
        out = out + acc * c
    return out


def basis_keys(dim: int, degree: int) -> list[Key]:
    return list(combinations(range(dim), degree))


# -- extended (TM x R) objects ---------------------------------------------

def _shift_up(t: _Tensor, ext: Chart):
    return type(t)._raw(ext, t.degree, {tuple(i + 1 for i in k): c for k, c in t.terms.items()})


def _split(t: _Tensor, base: Chart):
    """Split an extended-chart tensor into (part without axis 0, part after removing a leading 0)."""
    cls = type(t)
    p: dict[Key, Coeff] = {}
    q: dict[Key, Coeff] = {}
    for k, c in t.terms.items():
        if k and k[0] == 0:
            q[tuple(i - 1 for i in k[1:])] = c
        else:
            p[tuple(i - 1 for i in k)] = c
    P = cls._raw(base, t.degree, p)
    Q = cls._raw(base, t.degree - 1, q) if t.degree else None
    return P, Q


class _ExtPair:
    __slots__ = ()
    _inner: type = _Tensor

    @property
    def first(self) -> _Tensor:
        raise NotImplementedError

    @property
    def second(self) -> Optional[_Tensor]:
        raise NotImplementedError

    @property
    def chart(self) -> Chart:
        return self.first.chart

    @property
    def degree(self) -> int:
        return self.first.degree

    @classmethod
    def make(cls, first, second=None):
        raise NotImplementedError

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        inner = cls._inner
        return cls.make(inner.zero(chart, degree), inner.zero(chart, degree - 1) if degree else None)

    @classmethod
    def scalar(cls, chart: Chart, c):
        return cls.make(cls._inner.scalar(chart, c), None)

    def aug(self) -> _Tensor:
        """The same object as a tensor on the extended chart."""
        ext = self.chart.extended()
        out = _shift_up(self.first, ext)
        if self.second is not None and self.second.terms:
            q = self.second
            t = dict(out.terms)
            for k, c in q.terms.items():
                t[(0,) + tuple(i + 1 for i in k)] = c
            out = type(out)._raw(ext, self.degree, t)
        return out

    @classmethod
    def from_aug(cls, t: _Tensor):
        base = t.chart.unextended()
        p, q = _split(t, base)
        return cls.make(p, q)

    def __bool__(self) -> bool:
        return bool(self.first) or bool(self.second)

    def is_zero(self) -> bool:
        return not self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self
        if type(other) is not type(self):
            return NotImplemented
        return self.first == other.first and self.second == other.second

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.first, self.second))

    def _combine(self, other, op):
        if type(other) is not type(self):
            raise StructuralError(f"kind mismatch: {type(self).__name__} vs {type(other).__name__}")
        if other.degree != self.degree:
            if not other:
                return self
            if not self:
                return other
            raise DegreeError("degree mismatch")
        s = None if self.second is None else op(self.second, other.second)
        return type(self).make(op(self.first, other.first), s)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return type(self).make(-self.first, None if self.second is None else -self.second)

    def __mul__(self, c):
        if isinstance(c, (_Tensor, _ExtPair)):
            return NotImplemented
        return type(self).make(self.first * c, None if self.second is None else self.second * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return type(self).make(self.first / c, None if self.second is None else self.second / c)

    def scalar_value(self) -> Coeff:
        return self.first.scalar_value()

    def __str__(self) -> str:
        if self.second is None:
            return str(self.first)
        return f"pair({self.first}, {self.second})"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


def _check_pair(a: _Tensor, b: Optional[_Tensor], cls: type) -> None:
    if not isinstance(a, cls) or (b is not None and not isinstance(b, cls)):
        raise StructuralError(f"components must be {cls.__name__} values")
    if b is None:
        if a.degree != 0:
            raise DegreeError("second component missing for a positive degree")
        return
    if b.degree != a.degree - 1:
        raise DegreeError(f"component degrees {a.degree}, {b.degree} must differ by one")
    if a.chart != b.chart:
        raise StructuralError("components live on different charts")


class ExtMultivector(_ExtPair):
    """Section ``(P, Q)`` of the k-th exterior power of ``TM x R``."""

    __slots__ = ("p", "q")
    _inner = Multivector

    def __init__(self, p: Multivector, q: Optional[Multivector] = None):
        if q is None and p.degree > 0:
            q = Multivector.zero(p.chart, p.degree - 1)
        _check_pair(p, q, Multivector)
        self.p = p
        self.q = q

    @classmethod
    def make(cls, first, second=None):
        return cls(first, second)

    @property
    def first(self):
        return self.p

    @property
    def second(self):
        return self.q


class ExtForm(_ExtPair):
    """Section ``(eta, xi)`` of the k-th exterior power of ``T*M x R``."""

    __slots__ = ("eta", "xi")
    _inner = Form

    def __init__(self, eta: Form, xi: Optional[Form] = None):
        if xi is None and eta.degree > 0:
            xi = Form.zero(eta.chart, eta.degree - 1)
        _check_pair(eta, xi, Form)
        self.eta = eta
        self.xi = xi

    @classmethod
    def make(cls, first, second=None):
        return cls(first, second)

    @property
    def first(self):
        return self.eta

    @property
    def second(self):
        return self.xi


Ext = Union[ExtMultivector, ExtForm]


def ext_vector(x: Multivector, f) -> ExtMultivector:
    """``(X, f)`` from a vector field and a function."""
    return ExtMultivector(x, Multivector.scalar(x.chart, f))


def ext_covector(a: Form, g) -> ExtForm:
    """``(alpha, g)`` from a 1-form and a function."""
    return ExtForm(a, Form.scalar(a.chart, g))


def ext_scalar_part(x: _ExtPair) -> Coeff:
    """The function ``f`` of a degree-1 pair ``(X, f)``."""
    return x.second.scalar_value()


def ext_wedge(a: _ExtPair, b: _ExtPair):
    return type(a).from_aug(wedge(a.aug(), b.aug()))


def ext_interior(x: ExtMultivector, w: ExtForm) -> ExtForm:
    return ExtForm.from_aug(interior(x.aug(), w.aug()))


def ext_contract(a: ExtForm, p: ExtMultivector) -> ExtMultivector:
    return ExtMultivector.from_aug(contract(a.aug(), p.aug()))


def ext_pairing(w: ExtForm, x: ExtMultivector) -> Coeff:
    """``<(alpha, g), (X, f)> = alpha(X) + g f`` and its exterior powers."""
    return pair(w.aug(), x.aug())


def ext_eval(w: ExtForm, *args: ExtMultivector) -> Coeff:
    """``(eta, xi)((X_1,f_1), ..., (X_k,f_k))``.

    Equals ``eta(X_1..X_k) + sum_i (-1)^(i+1) f_i xi(X_1..^i..X_k)``.
    """
    if len(args) != w.degree:
        raise StructuralError(f"expected {w.degree} arguments, got {len(args)}")
    return evaluate(w.aug(), *(a.aug() for a in args))


def ext_partial_eval(w: ExtForm, *args: ExtMultivector) -> ExtForm:
    """Fill all but the last slot: the degree-1 pair ``w(a_1, ..., a_{k-1}, .)``."""
    if w.degree < 1 or len(args) != w.degree - 1:
        raise StructuralError(f"expected {w.degree - 1} arguments, got {len(args)}")
    t = w.aug()
    for a in args:
        t = interior(a.aug(), t)
    return ExtForm.from_aug(t)


@dataclass(frozen=True)
class E1Section:
    """Section ``(X, f) + (alpha, g)`` of ``(TM x R) + (T*M x R)``."""

    vec: ExtMultivector
    cov: ExtForm

    def __post_init__(self):
        if self.vec.degree != 1 or self.cov.degree != 1:
            raise DegreeError("section components must have degree 1")
        if self.vec.chart != self.cov.chart:
            raise StructuralError("section components live on different charts")

    @classmethod
    def make(cls, x: Multivector, f, a: Form, g) -> "E1Section":
        return cls(ext_vector(x, f), ext_covector(a, g))

    @classmethod
    def zero(cls, chart: Chart) -> "E1Section":
        return cls(ExtMultivector.zero(chart, 1), ExtForm.zero(chart, 1))

    @property
    def chart(self) -> Chart:
        return self.vec.chart

    def __add__(self, other: "E1Section") -> "E1Section":
        return E1Section(self.vec + other.vec, self.cov + other.cov)

    def __sub__(self, other: "E1Section") -> "E1Section":
        return E1Section(self.vec - other.vec, self.cov - other.cov)

    def __neg__(self) -> "E1Section":
        return E1Section(-self.vec, -self.cov)

    def __mul__(self, c) -> "E1Section":
        return E1Section(self.vec * c, self.cov * c)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.vec) or bool(self.cov)

    def __str__(self) -> str:
        return f"section({self.vec}, {self.cov})"


def coordinate_vectors(chart: Chart) -> list[Multivector]:
    return [Multivector.basis(chart, i) for i in range(chart.dim)]


def coordinate_covectors(chart: Chart) -> list[Form]:
    return [Form.basis(chart, i) for i in range(chart.dim)]


def ext_basis_vectors(chart: Chart) -> list[ExtMultivector]:
    """``(d_i, 0)`` for every axis, then the unit ``(0, 1)``."""
    out = [ext_vector(v, 0) for v in coordinate_vectors(chart)]
    out.append(ext_vector(Multivector.zero(chart, 1), 1))
    return out


def ext_basis_covectors(chart: Chart) -> list[ExtForm]:
    """``(dx_i, 0)`` for every axis, then the unit ``(0, 1)``."""
    out = [ext_covector(a, 0) for a in coordinate_covectors(chart)]
    out.append(ext_covector(Form.zero(chart, 1), 1))
    return out


def e1_basis(chart: Chart) -> list[E1Section]:
    """The ``2(n+1)`` coordinate sections of ``(TM x R) + (T*M x R)``."""
    zv = ExtMultivector.zero(chart, 1)
    zc = ExtForm.zero(chart, 1)
    return ([E1Section(v, zc) for v in ext_basis_vectors(chart)]
            + [E1Section(zv, a) for a in ext_basis_covectors(chart)])
