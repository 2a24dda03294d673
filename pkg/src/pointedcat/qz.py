"""Exact elements of Q/Z.

A value ``p/q`` stands for the root of unity exp(2*pi*i*p/q); the group
operation of k* is written additively here.  Everything downstream relies on
exact equality of these values, so no floats anywhere.
"""

from __future__ import annotations

from math import gcd


class QZ:
    """A rational number modulo 1, kept in lowest terms with 0 <= num < den."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("QZ denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        num %= den
        g = gcd(num, den)
        self.num = num // g
        self.den = den // g

    @staticmethod
    def zero() -> "QZ":
        return QZ(0, 1)

    @staticmethod
    def parse(s: str) -> "QZ":
        s = s.strip()
        if "/" in s:
            p, q = s.split("/")
            return QZ(int(p), int(q))
        return QZ(int(s), 1)

    def is_zero(self) -> bool:
        return self.num == 0

    def order(self) -> int:
        """Additive order in Q/Z (1 for the zero element)."""
        return self.den

    def __add__(self, other: "QZ") -> "QZ":
        return QZ(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "QZ") -> "QZ":
        return QZ(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "QZ":
        return QZ(-self.num, self.den)

    def __mul__(self, k: int) -> "QZ":
        if not isinstance(k, int):
            return NotImplemented
        return QZ(self.num * k, self.den)

    __rmul__ = __mul__

    def div(self, k: int) -> "QZ":
        """One solution y of k*y = self; the canonical lift num/(k*den)."""
        if k == 0:
            raise ZeroDivisionError("cannot divide by 0 in Q/Z")
        return QZ(self.num, self.den * abs(k)) if k > 0 else QZ(-self.num, self.den * (-k))

    def __eq__(self, other) -> bool:
        return isinstance(other, QZ) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"QZ({self.num}, {self.den})"

    def __str__(self):
        return f"{self.num}/{self.den}"

    def __bool__(self):
        return self.num != 0


ZERO = QZ(0, 1)


def qz_sum(values) -> QZ:
    total = ZERO
    for v in values:
        total = total + v
    return total
