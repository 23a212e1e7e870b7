"""Exact coefficient fields.

Two fields are supported: ``F2`` (arithmetic mod 2) and ``Q`` (rationals with
arbitrary-precision numerators and denominators).  Scalars are plain Python
``int`` values (always 0 or 1 for F2) or :class:`fractions.Fraction` values for
Q, which are kept in lowest terms with a positive denominator by construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]


class Field:
    """An exact field.  Instances are singletons: use :data:`F2` and :data:`Q`."""

    __slots__ = ("name", "characteristic")

    def __init__(self, name: str, characteristic: int):
        self.name = name
        self.characteristic = characteristic

    def __repr__(self) -> str:
        return self.name

    def __reduce__(self):
        return (field_from_name, (self.name,))

    # All arithmetic goes through ``reduce`` so that F2 values never leave {0, 1}.
    def reduce(self, x: Scalar) -> Scalar:
        if self.characteristic == 2:
            if isinstance(x, Fraction):
                if x.denominator % 2 == 0:
                    raise ZeroDivisionError(f"{x} has no image in F2")
                return x.numerator & 1
            return x & 1
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def __call__(self, x) -> Scalar:
        if isinstance(x, str):
            x = Fraction(x)
        return self.reduce(x)

    @property
    def zero(self) -> Scalar:
        return 0

    @property
    def one(self) -> Scalar:
        return 1

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return self.reduce(a + b)

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return self.reduce(a - b)

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return self.reduce(a * b)

    def neg(self, a: Scalar) -> Scalar:
        return self.reduce(-a)

    def inv(self, a: Scalar) -> Scalar:
        a = self.reduce(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic == 2:
            return 1
        return self.reduce(Fraction(1) / a)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Scalar) -> bool:
        return self.reduce(a) == 0

    def sign(self, exponent: int) -> Scalar:
        """``(-1)**exponent`` as a field element."""
        if self.characteristic == 2:
            return 1
        return -1 if exponent & 1 else 1


F2 = Field("F2", 2)
Q = Field("Q", 0)


def field_from_name(name: str) -> Field:
    key = name.strip().upper()
    if key in ("F2", "GF2", "Z2", "Z/2"):
        return F2
    if key in ("Q", "QQ"):
        return Q
    raise ValueError(f"unknown field {name!r}; expected F2 or Q")
