"""Coordinate charts.

A chart fixes the polynomial variables of the coefficient ring and the list of
tensor directions ("axes").  Each axis differentiates along one variable, except
the phantom axis ``None``: it stands for the unit section of ``TM x R`` and
nothing depends on it.  Extended tensors on ``M`` are ordinary tensors on the
extended chart whose axis 0 is the phantom.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .coeff import Coeff, ExpCoeff, Polynomial
from .errors import StructuralError


@dataclass(frozen=True)
class Chart:
    names: tuple[str, ...]
    axes: tuple[Optional[int], ...]
    tvar: Optional[int] = None

    @classmethod
    def coords(cls, *names: str) -> "Chart":
        if len(names) == 1 and not isinstance(names[0], str):
            names = tuple(names[0])
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate coordinate names in {names}")
        return cls(tuple(names), tuple(range(len(names))))

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def is_extended(self) -> bool:
        return None in self.axes

    # -- coefficients -----------------------------------------------------

    def const(self, c) -> Coeff:
        if self.tvar is None:
            return Polynomial.const(self.names, c)
        return ExpCoeff.const(self.names, self.tvar, c)

    def zero(self) -> Coeff:
        return self.const(0)

    def one(self) -> Coeff:
        return self.const(1)

    def var(self, name: str | int) -> Coeff:
        return self.coerce(Polynomial.var(self.names, name))

    def exp(self, k: int) -> ExpCoeff:
        if self.tvar is None:
            raise StructuralError("exponential weights need a lifted chart")
        return ExpCoeff.exp(self.names, self.tvar, k)

    def coerce(self, x) -> Coeff:
        if isinstance(x, (int, Fraction)):
            return self.const(x)
        if isinstance(x, Polynomial):
            if x.vars != self.names:
                if all(v in self.names for v in x.vars):
                    x = x.embed(self.names)
                else:
                    raise StructuralError(f"chart mismatch: {x.vars} vs {self.names}")
            if self.tvar is None:
                return x
            return ExpCoeff(self.names, self.tvar, {0: x})
        if isinstance(x, ExpCoeff):
            if self.tvar is None or x.vars != self.names or x.tindex != self.tvar:
                raise StructuralError("exponential coefficient on a different chart")
            return x
        raise StructuralError(f"not a coefficient: {x!r}")

    def deriv(self, c: Coeff, axis: int) -> Coeff:
        v = self.axes[axis]
        if v is None:
            return self.zero()
        return c.partial(v)

    def variables(self) -> list[Coeff]:
        return [self.var(i) for i in range(len(self.names)) if i != self.tvar]

    # -- derived charts ---------------------------------------------------

    def extended(self) -> "Chart":
        if self.is_extended:
            raise StructuralError("chart is already extended")
        return Chart(self.names, (None,) + self.axes, self.tvar)

    def unextended(self) -> "Chart":
        if not self.axes or self.axes[0] is not None:
            raise StructuralError("chart is not extended")
        return Chart(self.names, self.axes[1:], self.tvar)

    def lifted(self, t: str = "t") -> "Chart":
        """The chart of ``M x R``; ``t`` becomes the last axis and carries e^{kt} weights."""
        if self.is_extended or self.tvar is not None:
            raise StructuralError("only a plain chart can be lifted")
        while t in self.names:
            t += "_"
        n = len(self.names)
        return Chart(self.names + (t,), self.axes + (n,), n)

    def over(self, ring: "Chart") -> "Chart":
        """Same axes, coefficients taken from the (larger) ring of ``ring``."""
        if self.names != ring.names[: len(self.names)]:
            raise StructuralError("ring chart does not extend this chart")
        return Chart(ring.names, self.axes, ring.tvar)

    def axis_label(self, axis: int) -> str:
        v = self.axes[axis]
        return "u" if v is None else str(v)
