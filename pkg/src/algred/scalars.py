"""Exact coefficients: polynomials in a formal ``hbar`` over the Gaussian rationals.

A :class:`Scalar` stores ``{k: (re, im)}`` meaning ``sum (re + im*i) * hbar**k``.
Fractions are always reduced (``fractions.Fraction`` guarantees it) and zero
coefficients are never stored, so structural equality is value equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

Gauss = Tuple[Fraction, Fraction]
Number = Union[int, Fraction, "Scalar"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _gmul(a: Gauss, b: Gauss) -> Gauss:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _ginv(a: Gauss) -> Gauss:
    n = a[0] * a[0] + a[1] * a[1]
    return (a[0] / n, -a[1] / n)


def gauss_str(g: Gauss) -> str:
    re, im = g
    if im == 0:
        return str(re)
    ims = "i" if im == 1 else "-i" if im == -1 else f"{im}*i"
    if re == 0:
        return ims
    sign = "-" if im < 0 else "+"
    mag = abs(im)
    ims = "i" if mag == 1 else f"{mag}*i"
    return f"({re}{sign}{ims})"


class Scalar:
    """Element of Q(i)[hbar]. Immutable."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Dict[int, Gauss] | None = None):
        self._c: Dict[int, Gauss] = {}
        if coeffs:
            for k, g in coeffs.items():
                if k < 0:
                    raise ValueError("negative hbar power")
                g = (Fraction(g[0]), Fraction(g[1]))
                if g[0] or g[1]:
                    self._c[k] = g
        self._hash = None

    @classmethod
    def _raw(cls, c: Dict[int, Gauss]) -> "Scalar":
        s = object.__new__(cls)
        s._c = c
        s._hash = None
        return s

    # -- constructors ---------------------------------------------------
    @classmethod
    def of(cls, value: Number, imag: Number = 0) -> "Scalar":
        if isinstance(value, Scalar):
            if imag:
                raise TypeError("imag part only for rational input")
            return value
        re, im = Fraction(value), Fraction(imag)
        if re == 0 and im == 0:
            return ZERO
        return cls._raw({0: (re, im)})

    @classmethod
    def hbar(cls, power: int = 1) -> "Scalar":
        return cls._raw({power: (_ONE, _ZERO)})

    # -- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def degree(self) -> int:
        """Degree in hbar; -1 for zero."""
        return max(self._c) if self._c else -1

    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def is_unit(self) -> bool:
        """Invertible in Q(i)[hbar]: a nonzero hbar-free value."""
        return len(self._c) == 1 and 0 in self._c

    def constant_term(self) -> Gauss:
        return self._c.get(0, (_ZERO, _ZERO))

    def leading(self) -> Gauss:
        return self._c[max(self._c)]

    def items(self) -> Iterable[Tuple[int, Gauss]]:
        return sorted(self._c.items())

    def is_real_rational(self) -> bool:
        return self.is_constant() and self.constant_term()[1] == 0

    def to_fraction(self) -> Fraction:
        if not self.is_real_rational():
            raise ValueError(f"{self} is not a rational number")
        return self.constant_term()[0]

    def to_complex(self) -> complex:
        if not self.is_constant():
            raise ValueError(f"{self} depends on hbar")
        re, im = self.constant_term()
        return complex(float(re), float(im))

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: Number) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for k, g in other._c.items():
            h = c.get(k)
            if h is None:
                c[k] = g
            else:
                s = (h[0] + g[0], h[1] + g[1])
                if s[0] or s[1]:
                    c[k] = s
                else:
                    del c[k]
        return Scalar._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw({k: (-g[0], -g[1]) for k, g in self._c.items()})

    def __sub__(self, other: Number) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Number) -> "Scalar":
        return _coerce(other) - self

    def __mul__(self, other: Number) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._c or not other._c:
            return ZERO
        if len(other._c) == 1 and len(self._c) == 1:
            (k1, g1), = self._c.items()
            (k2, g2), = other._c.items()
            return Scalar._raw({k1 + k2: _gmul(g1, g2)})
        c: Dict[int, Gauss] = {}
        for k1, g1 in self._c.items():
            for k2, g2 in other._c.items():
                p = _gmul(g1, g2)
                k = k1 + k2
                h = c.get(k)
                c[k] = p if h is None else (h[0] + p[0], h[1] + p[1])
        return Scalar._raw({k: g for k, g in c.items() if g[0] or g[1]})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "Scalar":
        """Entrywise Gaussian conjugation; hbar is treated as real."""
        return Scalar._raw({k: (g[0], -g[1]) for k, g in self._c.items()})

    def inverse(self) -> "Scalar":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not invertible in Q(i)[hbar]")
        return Scalar._raw({0: _ginv(self._c[0])})

    def scale_gauss(self, g: Gauss) -> "Scalar":
        if not (g[0] or g[1]):
            return ZERO
        return Scalar._raw({k: _gmul(h, g) for k, h in self._c.items()})

    def divmod(self, other: "Scalar") -> Tuple["Scalar", "Scalar"]:
        """Long division in hbar over the field Q(i)."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        dq = other.degree()
        inv_lead = _ginv(other.leading())
        rem = dict(self._c)
        quot: Dict[int, Gauss] = {}
        while rem and max(rem) >= dq:
            k = max(rem)
            t = _gmul(rem[k], inv_lead)
            shift = k - dq
            quot[shift] = t
            for j, g in other._c.items():
                p = _gmul(t, g)
                h = rem.get(j + shift, (_ZERO, _ZERO))
                s = (h[0] - p[0], h[1] - p[1])
                if s[0] or s[1]:
                    rem[j + shift] = s
                else:
                    rem.pop(j + shift, None)
        return Scalar._raw(quot), Scalar._raw(rem)

    def exact_div(self, other: "Scalar") -> "Scalar":
        if other.is_unit():
            return self * other.inverse()
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __truediv__(self, other: Number) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.exact_div(other)

    def monic(self) -> "Scalar":
        if not self._c:
            return self
        return self.scale_gauss(_ginv(self.leading()))

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.of(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._c.items())))
        return self._hash

    # -- printing -------------------------------------------------------
    def term_count(self) -> int:
        return len(self._c)

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k, g in sorted(self._c.items()):
            if k == 0:
                parts.append(gauss_str(g))
                continue
            h = "hbar" if k == 1 else f"hbar^{k}"
            if g == (_ONE, _ZERO):
                parts.append(h)
            elif g == (-_ONE, _ZERO):
                parts.append("-" + h)
            else:
                parts.append(f"{gauss_str(g)}*{h}")
        return join_terms(parts)

    def __repr__(self) -> str:
        return f"Scalar({self})"


def join_terms(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _coerce(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.of(x)
    return NotImplemented


def scalar_gcd(a: Scalar, b: Scalar) -> Scalar:
    """Monic gcd in Q(i)[hbar]; gcd(0, 0) = 0."""
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic()


ZERO = Scalar._raw({})
ONE = Scalar._raw({0: (_ONE, _ZERO)})
I = Scalar._raw({0: (_ZERO, _ONE)})
HBAR = Scalar.hbar()
