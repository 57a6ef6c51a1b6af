"""Exact univariate polynomials over the rationals.

Polynomials are stored densely as a tuple of :class:`fractions.Fraction`
coefficients indexed by exponent, with trailing zeros stripped.  Values are
immutable and hashable, so they can be used as cache keys and shared freely.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]

#: degree of the zero polynomial
NEG_INF = float("-inf")


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``[p, q]`` pairs to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool):
            raise TypeError(f"rational pair must hold two integers, got {value!r}")
        return Fraction(num, den)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def rational_to_json(q: Fraction) -> list[int]:
    return [q.numerator, q.denominator]


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Poly:
    """An element of Q[x]."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        c = [as_rational(a) for a in coeffs]
        while c and not c[-1]:
            c.pop()
        self._c: tuple[Fraction, ...] = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list[Fraction]) -> Poly:
        # trusted constructor: coefficients already Fractions
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj._c = tuple(coeffs)
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> Poly:
        return cls._raw([])

    @classmethod
    def constant(cls, c: Scalar) -> Poly:
        return cls._raw([as_rational(c)])

    @classmethod
    def monomial(cls, n: int, c: Scalar = 1) -> Poly:
        if n < 0:
            raise ValueError("monomial exponent must be nonnegative")
        c = as_rational(c)
        if not c:
            return cls._raw([])
        return cls._raw([Fraction(0)] * n + [c])

    @classmethod
    def x(cls) -> Poly:
        return cls.monomial(1)

    # -- accessors ----------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self):
        """Degree as an int, or ``NEG_INF`` for the zero polynomial."""
        return len(self._c) - 1 if self._c else NEG_INF

    def __getitem__(self, n: int) -> Fraction:
        if 0 <= n < len(self._c):
            return self._c[n]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def leading_coefficient(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def terms(self) -> Iterable[tuple[int, Fraction]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing exponent order."""
        return ((i, a) for i, a in enumerate(self._c) if a)

    # -- ring structure -----------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == Poly.constant(other)._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._c)
        return self._hash

    def __add__(self, other) -> Poly:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            if v:
                out[i] += v
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw([-v for v in self._c])

    def __sub__(self, other) -> Poly:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self._c or not other._c:
            return Poly._raw([])
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        # sparse loops: monomial-heavy workloads dominate
        right = [(j, b) for j, b in enumerate(other._c) if b]
        for i, a in enumerate(self._c):
            if not a:
                continue
            for j, b in right:
                out[i + j] += a * b
        return Poly._raw(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> Poly:
        c = as_rational(c)
        if not c:
            return Poly._raw([])
        return Poly._raw([c * v for v in self._c])

    def __truediv__(self, c: Scalar) -> Poly:
        c = as_rational(c)
        if not c:
            raise ZeroDivisionError("polynomial division by zero scalar")
        return self.scale(1 / c)

    def __pow__(self, n: int) -> Poly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> Poly:
        """Multiply by ``x**k``."""
        if not self._c:
            return self
        return Poly._raw([Fraction(0)] * k + list(self._c))

    # -- calculus -----------------------------------------------------
    def derivative(self) -> Poly:
        return Poly._raw([i * v for i, v in enumerate(self._c)][1:])

    def integral_from(self, a: Scalar = 0) -> Poly:
        """The antiderivative vanishing at ``x = a``."""
        a = as_rational(a)
        if not self._c:
            return self
        out = [Fraction(0)] + [v / (i + 1) for i, v in enumerate(self._c)]
        if a:
            out[0] = -_horner(out, a)
        return Poly._raw(out)

    def __call__(self, a: Scalar) -> Fraction:
        return _horner(self._c, as_rational(a))

    evaluate = __call__

    def compose(self, other: Poly) -> Poly:
        """``self(other(x))``."""
        result = Poly.zero()
        for v in reversed(self._c):
            result = result * other + Poly.constant(v)
        return result

    # -- text / json --------------------------------------------------
    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts: list[str] = []
        for n in range(len(self._c) - 1, -1, -1):
            c = self._c[n]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if n == 0:
                body = format_rational(mag)
            else:
                xpart = "x" if n == 1 else f"x^{n}"
                body = xpart if mag == 1 else f"{format_rational(mag)}*{xpart}"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"

    def to_json(self) -> list[list[int]]:
        return [rational_to_json(v) for v in self._c]

    @classmethod
    def from_json(cls, data) -> Poly:
        if isinstance(data, str):
            return parse_poly(data)
        if isinstance(data, (int, Fraction)):
            return cls.constant(data)
        if not isinstance(data, list):
            raise TypeError(f"polynomial JSON must be a list of [num, den] pairs, got {data!r}")
        return cls(as_rational(v) for v in data)


def _coerce(value) -> Poly | None:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Poly.constant(value)
    return None


def _horner(coeffs: Sequence[Fraction], a: Fraction) -> Fraction:
    acc = Fraction(0)
    for v in reversed(coeffs):
        acc = acc * a + v
    return acc


X = Poly.x()

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
           (?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*(?P<x1>x)(?:\s*\^\s*(?P<e1>\d+))?)?
         | (?P<x2>x)(?:\s*\^\s*(?P<e2>\d+))?
        )\s*""",
    re.VERBOSE,
)


def parse_poly(text: str) -> Poly:
    """Parse the canonical text format, e.g. ``"1/2*x^3 - x + 4"``.

    Coefficients may be omitted (``x^2``) or written explicitly (``1*x^2``);
    ``**`` is accepted as an exponent marker.
    """
    s = text.strip().replace("**", "^")
    if not s:
        raise ValueError("empty polynomial text")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign = m.group("sign")
        if sign is None and not first:
            raise ValueError(f"missing operator in polynomial {text!r} at offset {pos}")
        if m.group("coef") is not None:
            c = Fraction(m.group("coef"))
            if m.group("x1"):
                e = int(m.group("e1")) if m.group("e1") else 1
            else:
                e = 0
        elif m.group("x2") is not None:
            c = Fraction(1)
            e = int(m.group("e2")) if m.group("e2") else 1
        else:
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        if sign == "-":
            c = -c
        coeffs[e] = coeffs.get(e, Fraction(0)) + c
        pos = m.end()
        first = False
    if not coeffs:
        return Poly.zero()
    top = max(coeffs)
    return Poly(coeffs.get(i, Fraction(0)) for i in range(top + 1))


def derivative(p: Poly) -> Poly:
    return p.derivative()


def integral_from(a: Scalar, p: Poly) -> Poly:
    return p.integral_from(a)


def evaluate(p: Poly, a: Scalar) -> Fraction:
    return p(a)
