"""Exact scalar fields: the rationals and prime fields F_p.

Rational scalars are plain :class:`fractions.Fraction` values.  Prime-field
scalars are :class:`Fp` instances which carry their modulus, so that mixing
two different kinds of scalar is caught at the operator level.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Integral

DEFAULT_PRIME = 32003


class ScalarKindError(TypeError):
    """Raised when scalars from different fields meet in one operation."""


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Fp:
    """Residue class modulo a prime ``p``, stored as an int in ``[0, p)``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "value", int(value) % p)

    @classmethod
    def _make(cls, value: int, p: int) -> "Fp":
        # p already validated by the caller
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "value", value % p)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Fp is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ScalarKindError(f"cannot mix F_{self.p} with F_{other.p}")
            return other.value
        if isinstance(other, Integral) and not isinstance(other, bool):
            return int(other) % self.p
        raise ScalarKindError(f"cannot mix F_{self.p} with {type(other).__name__}")

    def __add__(self, other):
        return Fp._make(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Fp._make(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return Fp._make(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return Fp._make(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def inverse(self) -> "Fp":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Fp._make(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * Fp(self._coerce(other), self.p).inverse()

    def __rtruediv__(self, other):
        return Fp(self._coerce(other), self.p) * self.inverse()

    def __neg__(self):
        return Fp._make(-self.value, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Fp._make(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, Integral) and not isinstance(other, bool):
            return self.value == int(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Field:
    """Common interface of the two scalar kinds."""

    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def contains(self, x) -> bool:
        raise NotImplementedError

    def raw(self, x):
        """Plain int/Fraction representative used on hot paths."""
        raise NotImplementedError


class RationalField(Field):
    characteristic = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fp):
            raise ScalarKindError("cannot convert an F_p element to a rational")
        if isinstance(x, float):
            raise TypeError("floats are not exact scalars")
        return Fraction(x)

    def contains(self, x) -> bool:
        return isinstance(x, (Fraction, Integral)) and not isinstance(x, bool)

    def raw(self, x):
        if isinstance(x, Fp):
            raise ScalarKindError("cannot convert an F_p element to a rational")
        return x

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, x) -> Fp:
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ScalarKindError(f"cannot mix F_{self.p} with F_{x.p}")
            return x
        if isinstance(x, Fraction):
            # reduction of a rational; the denominator must be a unit mod p
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return Fp(x.numerator, self.p) / x.denominator
        if isinstance(x, Integral) and not isinstance(x, bool):
            return Fp(int(x), self.p)
        raise ScalarKindError(f"cannot convert {type(x).__name__} to F_{self.p}")

    def contains(self, x) -> bool:
        return isinstance(x, Fp) and x.p == self.p

    def raw(self, x) -> int:
        return self(x).value

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int = DEFAULT_PRIME) -> PrimeField:
    return PrimeField(p)


def field_of(x) -> Field:
    if isinstance(x, Fp):
        return GF(x.p)
    if isinstance(x, (Fraction, Integral)) and not isinstance(x, bool):
        return QQ
    raise ScalarKindError(f"{type(x).__name__} is not an exact scalar")


def format_scalar(x) -> str:
    """Canonical text form: ``n`` or ``n/d`` for rationals, the residue for F_p."""
    if isinstance(x, Fp):
        return str(x.value)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
