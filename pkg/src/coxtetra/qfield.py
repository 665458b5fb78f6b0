"""Exact arithmetic in the real quadratic fields Q(sqrt 2) and Q(sqrt 5)."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

SUPPORTED_RADICANDS = (1, 2, 5)


@total_ordering
class QuadraticFieldScalar:
    """The number ``a + b*sqrt(d)`` with rational ``a, b``.

    ``d == 1`` is the rational case; the ``b`` part is folded into ``a`` so
    that equal numbers always have equal coordinates.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 1) -> None:
        if d not in SUPPORTED_RADICANDS:
            raise ValueError(f"unsupported radicand {d}")
        a, b = Fraction(a), Fraction(b)
        if d == 1:
            a, b = a + b, Fraction(0)
        self.a = a
        self.b = b
        self.d = d

    def _coerce(self, other) -> QuadraticFieldScalar:
        if isinstance(other, QuadraticFieldScalar):
            if other.d == self.d or other.b == 0:
                return other if other.d == self.d else QuadraticFieldScalar(other.a, 0, self.d)
            if self.b == 0:
                return other
            raise ValueError(f"cannot mix Q(sqrt {self.d}) and Q(sqrt {other.d})")
        if isinstance(other, (int, Fraction)):
            return QuadraticFieldScalar(other, 0, self.d)
        return NotImplemented

    def _field(self, other: QuadraticFieldScalar) -> int:
        return self.d if self.b != 0 or other.b == 0 else other.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticFieldScalar(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self) -> QuadraticFieldScalar:
        return QuadraticFieldScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return QuadraticFieldScalar(
            self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadraticFieldScalar:
        return QuadraticFieldScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conjugate()
        return QuadraticFieldScalar(num.a / n, num.b / n, num.d)

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(d)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa if sa else sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with d*b^2
        diff = self.a * self.a - self.d * self.b * self.b
        if diff == 0:
            return 0
        return sa if diff > 0 else sb

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() == 0

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * self.d ** 0.5

    def __repr__(self) -> str:
        return f"QuadraticFieldScalar({self.a}, {self.b}, d={self.d})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*sqrt({self.d})"


def cos_pi_over(m: int) -> QuadraticFieldScalar:
    """Exact ``cos(pi/m)`` for the bond orders that occur here."""
    if m == 2:
        return QuadraticFieldScalar(0)
    if m == 3:
        return QuadraticFieldScalar(Fraction(1, 2))
    if m == 4:
        return QuadraticFieldScalar(0, Fraction(1, 2), 2)
    if m == 5:
        return QuadraticFieldScalar(Fraction(1, 4), Fraction(1, 4), 5)
    raise ValueError(f"no exact cosine for m={m}")
