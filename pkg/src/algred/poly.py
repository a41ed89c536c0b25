"""Sparse multivariate polynomials with Q(i)[hbar] coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

from .scalars import ONE, ZERO, Scalar, join_terms

Monomial = Tuple[int, ...]


def grlex_key(m: Monomial) -> Tuple[int, Monomial]:
    """Graded lexicographic sort key; larger key means larger monomial."""
    return (sum(m), m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_up_to(nvars: int, degree: int) -> list[Monomial]:
    """All exponent vectors of total degree <= degree, ascending grlex."""
    out: list[Monomial] = []

    def rec(prefix: list[int], left: int, remaining: int):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e, remaining - 1)

    rec([], degree, nvars)
    out.sort(key=grlex_key)
    return out


class Poly:
    """Immutable sparse polynomial over a fixed, named variable list."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Monomial, Scalar] | None = None):
        self.vars: Tuple[str, ...] = tuple(vars)
        self.terms: Dict[Monomial, Scalar] = {}
        if terms:
            n = len(self.vars)
            for m, c in terms.items():
                if len(m) != n:
                    raise ValueError("monomial length does not match variable list")
                if any(e < 0 for e in m):
                    raise ValueError("negative exponent")
                c = Scalar.of(c) if not isinstance(c, Scalar) else c
                if c:
                    self.terms[tuple(m)] = c
        self._hash = None

    @classmethod
    def _raw(cls, vars: Tuple[str, ...], terms: Dict[Monomial, Scalar]) -> "Poly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Poly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, vars: Sequence[str], c) -> "Poly":
        vars = tuple(vars)
        c = Scalar.of(c) if not isinstance(c, Scalar) else c
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "Poly":
        vars = tuple(vars)
        idx = _index(vars, name)
        m = tuple(1 if j == idx else 0 for j in range(len(vars)))
        return cls._raw(vars, {m: ONE})

    @classmethod
    def monomial(cls, vars: Sequence[str], m: Monomial, c=ONE) -> "Poly":
        return cls(vars, {tuple(m): c})

    # -- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant(self) -> Scalar:
        return self.terms.get((0,) * len(self.vars), ZERO)

    def coeff(self, m: Monomial) -> Scalar:
        return self.terms.get(tuple(m), ZERO)

    def sorted_terms(self) -> list[Tuple[Monomial, Scalar]]:
        """Terms in canonical (descending grlex) order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coeff(self) -> Scalar:
        return self.terms[self.leading_monomial()]

    def used_vars(self) -> set[str]:
        used = set()
        for m in self.terms:
            for j, e in enumerate(m):
                if e:
                    used.add(self.vars[j])
        return used

    def depends_on(self, name: str) -> bool:
        j = _index(self.vars, name)
        return any(m[j] for m in self.terms)

    def hbar_free(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Poly"):
        if self.vars != other.vars:
            raise ValueError(f"variable-list mismatch: {self.vars} vs {other.vars}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Poly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t[m] + c if m in t else c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly._raw(self.vars, t)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly":
        if not c:
            return Poly.zero(self.vars)
        return Poly._raw(self.vars, {m: v * c for m, v in self.terms.items() if v * c})

    def mul_term(self, mono: Monomial, c: Scalar) -> "Poly":
        if not c:
            return Poly.zero(self.vars)
        out = {}
        for m, v in self.terms.items():
            p = v * c
            if p:
                out[mono_mul(m, mono)] = p
        return Poly._raw(self.vars, out)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(Scalar.of(other))
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        t: Dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                p = c1 * c2
                t[m] = t[m] + p if m in t else p
        return Poly._raw(self.vars, {m: c for m, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative exponent")
        out = Poly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus / evaluation -------------------------------------------
    def derivative(self, v: Union[str, int]) -> "Poly":
        j = v if isinstance(v, int) else _index(self.vars, v)
        t = {}
        for m, c in self.terms.items():
            e = m[j]
            if e:
                dm = m[:j] + (e - 1,) + m[j + 1:]
                t[dm] = c * e
        return Poly._raw(self.vars, t)

    def evaluate(self, point: Mapping[str, Scalar]) -> "Poly":
        """Substitute scalar values for some variables; result keeps the variable list."""
        idx = {_index(self.vars, k): Scalar.of(v) if not isinstance(v, Scalar) else v
               for k, v in point.items()}
        out = Poly.zero(self.vars)
        for m, c in self.terms.items():
            coef = c
            mm = list(m)
            for j, val in idx.items():
                if mm[j]:
                    coef = coef * val ** mm[j]
                    mm[j] = 0
            out = out + Poly.monomial(self.vars, tuple(mm), coef)
        return out

    def value_at(self, point: Mapping[str, Scalar]) -> Scalar:
        """Full evaluation; every used variable must be supplied."""
        missing = self.used_vars() - set(point)
        if missing:
            raise ValueError(f"no value for {sorted(missing)}")
        return self.evaluate({k: v for k, v in point.items() if k in self.vars}).constant()

    # -- variable lists --------------------------------------------------
    def embed(self, new_vars: Sequence[str]) -> "Poly":
        """Re-express over a variable list containing every used variable."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        pos = []
        for j, v in enumerate(self.vars):
            if v in new_vars:
                pos.append(new_vars.index(v))
            else:
                pos.append(None)
        t = {}
        for m, c in self.terms.items():
            nm = [0] * len(new_vars)
            for j, e in enumerate(m):
                if e:
                    if pos[j] is None:
                        raise ValueError(f"variable {self.vars[j]} not in {new_vars}")
                    nm[pos[j]] = e
            t[tuple(nm)] = c
        return Poly._raw(new_vars, t)

    # -- comparison / printing -------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            return self == Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def mono_str(self, m: Monomial) -> str:
        return monomial_str(self.vars, m)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            ms = self.mono_str(m)
            if not ms:
                parts.append(str(c))
            elif c.term_count() > 1:
                parts.append(f"({c})*{ms}")
            elif c == ONE:
                parts.append(ms)
            elif c == -ONE:
                parts.append("-" + ms)
            else:
                parts.append(f"{c}*{ms}")
        return join_terms(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, vars={self.vars})"


def monomial_str(vars: Sequence[str], m: Monomial) -> str:
    out = []
    for v, e in zip(vars, m):
        if e == 1:
            out.append(v)
        elif e > 1:
            out.append(f"{v}^{e}")
    return "*".join(out)


def _index(vars: Tuple[str, ...], name: str) -> int:
    try:
        return vars.index(name)
    except ValueError:
        raise ValueError(f"unknown variable {name!r}; declared {list(vars)}") from None


def poly_derivative(f: Poly, v: str) -> Poly:
    return f.derivative(v)


def linear_combination(vars: Sequence[str], coeffs: Iterable[Scalar], polys: Iterable[Poly]) -> Poly:
    out = Poly.zero(vars)
    for c, p in zip(coeffs, polys):
        if c:
            out = out + p.scale(c)
    return out
