"""Exact coefficient fields: rationals and Gaussian rationals.

Every algebraic object in the engine stores coefficients as exact field
elements; there is no floating point anywhere.  The rational field is
`fractions.Fraction`.  Scenarios with complex coordinates use Gaussian
rationals a + b*i with exact rational parts.
"""

from __future__ import annotations

from fractions import Fraction


class GaussianRational:
    """A Gaussian rational a + b*i with Fraction components.

    Immutable.  Supports mixed arithmetic with int and Fraction.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x, 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = GaussianRational(1, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    # -- comparisons ------------------------------------------------------

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}*i"
        sign = "-" if self.im < 0 else "+"
        mag = abs(self.im)
        imag = "i" if mag == 1 else f"{mag}*i"
        return f"({self.re} {sign} {imag})"


class Field:
    """A coefficient field: coercion, constants and random sampling."""

    name = "abstract"

    def coerce(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def random(self, rng, span=6):
        """A small random nonzero element, for probe generation."""
        raise NotImplementedError

    def __repr__(self):
        return f"<field {self.name}>"

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self))


class RationalField(Field):
    name = "rational"

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise TypeError("cannot coerce a complex value into the rationals")
            return x.re
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into the rationals")

    def random(self, rng, span=6):
        num = rng.randint(-span, span)
        if num == 0:
            num = 1
        den = rng.randint(1, 3)
        return Fraction(num, den)


class GaussianField(Field):
    name = "gaussian"

    @property
    def i(self):
        return GaussianRational(0, 1)

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x, 0)
        if isinstance(x, str):
            return GaussianRational(Fraction(x), 0)
        raise TypeError(f"cannot coerce {x!r} into the Gaussian rationals")

    def random(self, rng, span=6):
        re = rng.randint(-span, span)
        im = rng.randint(-span, span)
        if re == 0 and im == 0:
            re = 1
        return GaussianRational(Fraction(re), Fraction(im, 2) if rng.random() < 0.3 else Fraction(im))


QQ = RationalField()
QQ_I = GaussianField()
