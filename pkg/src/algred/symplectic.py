"""Constant symplectic forms on R^2n, Hamiltonian vector fields and the Poisson bracket.

Sign conventions: ``omega = 1/2 sum Omega_ab dx^a ^ dx^b``, the interior product
is ``(X _| omega)(Y) = omega(X, Y)``, ``X_f _| omega = -df`` and
``{f, g} = -X_f g``.  With ``omega = dp ^ dq`` this gives ``X_{p^2/2} = p d/dq``
and ``{p, q} = -1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

from . import linalg
from .parsing import RESERVED
from .poly import Poly
from .scalars import ONE, ZERO, Scalar


class SymplecticError(ValueError):
    pass


@dataclass(frozen=True)
class PhaseSpace:
    coords: Tuple[str, ...]
    omega: Tuple[Tuple[Scalar, ...], ...]
    omega_inv: Tuple[Tuple[Scalar, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.coords)
        if len(set(self.coords)) != n:
            raise SymplecticError(f"duplicate coordinate names in {self.coords}")
        if any(c in RESERVED for c in self.coords):
            raise SymplecticError("coordinate names 'i' and 'hbar' are reserved")
        om = tuple(tuple(x if isinstance(x, Scalar) else Scalar.of(x) for x in row)
                   for row in self.omega)
        object.__setattr__(self, "omega", om)
        if len(om) != n or any(len(r) != n for r in om):
            raise SymplecticError(f"symplectic matrix must be {n}x{n}")
        if n % 2:
            raise SymplecticError("phase space dimension must be even")
        for a in range(n):
            for b in range(n):
                if not om[a][b].is_constant():
                    raise SymplecticError("symplectic matrix entries must be hbar-free constants")
                if om[a][b] != -om[b][a]:
                    raise SymplecticError(
                        f"symplectic matrix is not antisymmetric at ({a + 1},{b + 1})")
        if n:
            try:
                inv = linalg.inverse([list(r) for r in om])
            except ZeroDivisionError:
                raise SymplecticError("symplectic matrix is degenerate (not invertible)") from None
        else:
            inv = []
        object.__setattr__(self, "omega_inv", tuple(tuple(r) for r in inv))

    @classmethod
    def canonical(cls, pairs: Sequence[Tuple[str, str]]) -> "PhaseSpace":
        """``omega = sum dp_i ^ dq_i`` with coordinates ordered p1, q1, p2, q2, ..."""
        coords = tuple(c for pair in pairs for c in pair)
        n = len(coords)
        om = [[ZERO] * n for _ in range(n)]
        for k in range(len(pairs)):
            om[2 * k][2 * k + 1] = ONE
            om[2 * k + 1][2 * k] = -ONE
        return cls(coords, tuple(tuple(r) for r in om))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def poly(self, text: str) -> Poly:
        from .parsing import parse_poly
        return parse_poly(text, self.coords)

    def check(self, f: Poly):
        if f.vars != self.coords:
            raise ValueError(f"variable-list mismatch: {f.vars} vs phase space {self.coords}")


@dataclass(frozen=True)
class PolyVectorField:
    """``sum X^a d/dx^a`` with polynomial components."""

    vars: Tuple[str, ...]
    components: Tuple[Poly, ...]

    def __post_init__(self):
        if len(self.components) != len(self.vars):
            raise ValueError("one component per coordinate required")

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "PolyVectorField":
        vars = tuple(vars)
        return cls(vars, tuple(Poly.zero(vars) for _ in vars))

    @classmethod
    def coordinate(cls, vars: Sequence[str], name: str) -> "PolyVectorField":
        vars = tuple(vars)
        return cls(vars, tuple(Poly.const(vars, 1 if v == name else 0) for v in vars))

    def __call__(self, f: Poly) -> Poly:
        return lie_derivative(self, f)

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField(self.vars, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField(self.vars, tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, c) -> "PolyVectorField":
        return PolyVectorField(self.vars, tuple(a * c for a in self.components))

    def times(self, f: Poly) -> "PolyVectorField":
        return PolyVectorField(self.vars, tuple(a * f for a in self.components))

    def bracket(self, other: "PolyVectorField") -> "PolyVectorField":
        """Commutator ``[X, Y]`` as first-order differential operators."""
        return PolyVectorField(self.vars, tuple(
            lie_derivative(self, yb) - lie_derivative(other, xb)
            for xb, yb in zip(self.components, other.components)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __str__(self) -> str:
        parts = []
        for v, c in zip(self.vars, self.components):
            if c:
                parts.append(f"({c})*d/d{v}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class OneForm:
    """``sum alpha_a dx^a`` with polynomial components."""

    vars: Tuple[str, ...]
    components: Tuple[Poly, ...]

    def __post_init__(self):
        if len(self.components) != len(self.vars):
            raise ValueError("one component per coordinate required")

    def pair(self, X: PolyVectorField) -> Poly:
        out = Poly.zero(self.vars)
        for a, x in zip(self.components, X.components):
            if a and x:
                out = out + a * x
        return out

    def exterior_derivative(self) -> Tuple[Tuple[Poly, ...], ...]:
        """Components ``(d alpha)_ab = d_a alpha_b - d_b alpha_a``."""
        n = len(self.vars)
        return tuple(tuple(self.components[b].derivative(a) - self.components[a].derivative(b)
                           for b in range(n)) for a in range(n))

    def __str__(self) -> str:
        parts = [f"({c})*d{v}" for v, c in zip(self.vars, self.components) if c]
        return " + ".join(parts) if parts else "0"


def lie_derivative(X: PolyVectorField, f: Poly) -> Poly:
    """Directional derivative ``X f = sum X^a df/dx^a``."""
    if X.vars != f.vars:
        raise ValueError(f"variable-list mismatch: {X.vars} vs {f.vars}")
    out = Poly.zero(f.vars)
    for a, xa in enumerate(X.components):
        if xa:
            d = f.derivative(a)
            if d:
                out = out + xa * d
    return out


def hamiltonian_vector_field(f: Poly, S: PhaseSpace) -> PolyVectorField:
    """Unique ``X`` with ``X _| omega = -df``, i.e. ``X^a = sum_b (Omega^-1)_ab d_b f``."""
    S.check(f)
    grads = [f.derivative(b) for b in range(S.dim)]
    comps = []
    for a in range(S.dim):
        c = Poly.zero(S.coords)
        for b in range(S.dim):
            w = S.omega_inv[a][b]
            if w and grads[b]:
                c = c + grads[b].scale(w)
        comps.append(c)
    return PolyVectorField(S.coords, tuple(comps))


def interior(X: PolyVectorField, S: PhaseSpace) -> OneForm:
    """``X _| omega`` with ``(X _| omega)_b = sum_a X^a Omega_ab``."""
    comps = []
    for b in range(S.dim):
        c = Poly.zero(S.coords)
        for a in range(S.dim):
            w = S.omega[a][b]
            if w and X.components[a]:
                c = c + X.components[a].scale(w)
        comps.append(c)
    return OneForm(S.coords, tuple(comps))


def differential(f: Poly) -> OneForm:
    return OneForm(f.vars, tuple(f.derivative(a) for a in range(len(f.vars))))


def omega_pairing(X: PolyVectorField, Y: PolyVectorField, S: PhaseSpace) -> Poly:
    """``omega(X, Y) = sum Omega_ab X^a Y^b``."""
    out = Poly.zero(S.coords)
    for a in range(S.dim):
        for b in range(S.dim):
            w = S.omega[a][b]
            if w and X.components[a] and Y.components[b]:
                out = out + (X.components[a] * Y.components[b]).scale(w)
    return out


def poisson_bracket(f: Poly, g: Poly, S: PhaseSpace) -> Poly:
    """``{f, g} = -X_f g``."""
    S.check(g)
    return -lie_derivative(hamiltonian_vector_field(f, S), g)


def poisson_bracket_via_omega(f: Poly, g: Poly, S: PhaseSpace) -> Poly:
    """``{f, g} = -omega(X_f, X_g)``; independent second route for cross-checks."""
    return -omega_pairing(hamiltonian_vector_field(f, S), hamiltonian_vector_field(g, S), S)
