"""Exact scalars over the rationals Q and prime fields F_p.

Every computation in this package is exact; floating point is never used.
Rationals are ``fractions.Fraction`` (lowest terms, sign on the numerator),
prime-field elements are ``Residue`` objects with value in [0, p).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class FieldError(ValueError):
    """Invalid field specification or malformed scalar literal."""


_RAT_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_INT_RE = re.compile(r"^[+-]?\d+$")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Residue:
    """An element of Z/pZ, stored as the canonical representative in [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> "Residue":
        if not isinstance(other, Residue):
            return NotImplemented
        if other.p != self.p:
            raise FieldError(f"mixed moduli {self.p} and {other.p}")
        return other

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value + o.value, self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value - o.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * o.value, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.value == 0:
            raise ZeroDivisionError("division by zero residue")
        return Residue(self.value * pow(o.value, self.p - 2, self.p), self.p)

    def __neg__(self):
        return Residue(-self.value, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, Residue)
            and other.p == self.p
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value}, p={self.p})"


@dataclass(frozen=True)
class Field:
    """Field specification: kind "Q" (rationals) or "Fp" (prime field)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise FieldError("rationals take no modulus")
        elif self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise FieldError(f"modulus must be prime, got {self.p!r}")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else Residue(0, self.p)

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else Residue(1, self.p)

    def of(self, n: int):
        """Embed a Python integer."""
        return Fraction(n) if self.kind == "Q" else Residue(n, self.p)

    def parse(self, text: str):
        """Parse a scalar literal: "3", "-3/7" over Q; an integer over F_p.

        Literals are normalized (lowest terms / canonical residue).
        """
        if not isinstance(text, str):
            raise FieldError(f"scalar literal must be a string, got {type(text).__name__}")
        if self.kind == "Q":
            if not _RAT_RE.match(text):
                raise FieldError(f"bad rational literal {text!r}")
            num, _, den = text.partition("/")
            if den:
                if int(den) == 0:
                    raise FieldError(f"zero denominator in {text!r}")
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        if not _INT_RE.match(text):
            raise FieldError(f"bad residue literal {text!r}")
        return Residue(int(text), self.p)

    def to_str(self, x) -> str:
        return str(x.value) if self.kind == "Fp" else str(x)

    def to_json(self) -> dict:
        if self.kind == "Q":
            return {"type": "Q"}
        return {"type": "Fp", "p": self.p}


QQ = Field("Q")


def GF(p: int) -> Field:
    return Field("Fp", p)
