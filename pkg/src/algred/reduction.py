"""Momentum maps, momentum ideals, quotient classes and algebraic reduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .groebner import GroebnerBasis, groebner
from .poly import Monomial, Poly, grlex_key
from .scalars import ZERO, Scalar
from .symplectic import PhaseSpace, hamiltonian_vector_field, lie_derivative, poisson_bracket


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class LieAlgebraData:
    """Basis names and structure constants ``[x_j, x_l] = sum_m c[j][l][m] x_m``."""

    names: Tuple[str, ...]
    structure: Tuple[Tuple[Tuple[Scalar, ...], ...], ...]

    def __post_init__(self):
        k = len(self.names)
        c = self.structure
        if len(c) != k or any(len(r) != k or any(len(v) != k for v in r) for r in c):
            raise ReductionError(f"structure constants must have shape {k}x{k}x{k}")
        for j in range(k):
            for l in range(k):
                for m in range(k):
                    if c[j][l][m] != -c[l][j][m]:
                        raise ReductionError(
                            f"structure constants not antisymmetric: "
                            f"[{self.names[j]},{self.names[l]}] vs [{self.names[l]},{self.names[j]}]")
        for a in range(k):
            for b in range(k):
                for d in range(k):
                    for n in range(k):
                        s = ZERO
                        for m in range(k):
                            s = s + c[a][b][m] * c[m][d][n] + c[b][d][m] * c[m][a][n] \
                                + c[d][a][m] * c[m][b][n]
                        if s:
                            raise ReductionError(
                                f"Jacobi identity of the structure constants fails for "
                                f"({self.names[a]},{self.names[b]},{self.names[d]})")

    @classmethod
    def abelian(cls, names: Sequence[str]) -> "LieAlgebraData":
        k = len(names)
        return cls(tuple(names), tuple(tuple(tuple(ZERO for _ in range(k)) for _ in range(k))
                                       for _ in range(k)))

    @classmethod
    def from_brackets(cls, names: Sequence[str],
                      brackets: Dict[Tuple[str, str], Dict[str, Scalar]]) -> "LieAlgebraData":
        """Build from ``{(a, b): {m: coeff}}``; antisymmetric partners are filled in."""
        names = tuple(names)
        k = len(names)
        c = [[[ZERO] * k for _ in range(k)] for _ in range(k)]
        for (a, b), rhs in brackets.items():
            ia, ib = names.index(a), names.index(b)
            for m, v in rhs.items():
                im = names.index(m)
                v = Scalar.of(v) if not isinstance(v, Scalar) else v
                c[ia][ib][im] = v
                c[ib][ia][im] = -v
        return cls(names, tuple(tuple(tuple(v) for v in r) for r in c))

    @property
    def dim(self) -> int:
        return len(self.names)

    def is_abelian(self) -> bool:
        return all(not x for r in self.structure for v in r for x in v)


@dataclass(frozen=True)
class MomentumMap:
    space: PhaseSpace
    lie: LieAlgebraData
    components: Tuple[Poly, ...]
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if len(self.components) != self.lie.dim:
            raise ReductionError(
                f"momentum map needs {self.lie.dim} components, got {len(self.components)}")
        for c in self.components:
            self.space.check(c)
        if self.check:
            report = check_equivariance(self)
            if not report["passed"]:
                raise ReductionError(report["failures"][0]["message"])

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.space.coords

    @cached_property
    def fields(self):
        return tuple(hamiltonian_vector_field(c, self.space) for c in self.components)


def check_equivariance(J: MomentumMap) -> dict:
    """Check ``{J_j, J_l} = sum_m c^m_jl J_m`` for all pairs; failures are reported, not raised."""
    lie = J.lie
    failures = []
    for j in range(lie.dim):
        for l in range(j + 1, lie.dim):
            lhs = poisson_bracket(J.components[j], J.components[l], J.space)
            rhs = Poly.zero(J.vars)
            for m in range(lie.dim):
                if lie.structure[j][l][m]:
                    rhs = rhs + J.components[m].scale(lie.structure[j][l][m])
            defect = lhs - rhs
            if defect:
                failures.append({
                    "pair": [lie.names[j], lie.names[l]],
                    "defect": str(defect),
                    "message": (f"equivariance {{J_xi,J_zeta}}=J_[xi,zeta] fails for "
                                f"({lie.names[j]},{lie.names[l]}): defect {defect}"),
                })
    npairs = lie.dim * (lie.dim - 1) // 2
    return {"passed": not failures, "pairs_checked": npairs, "failures": failures}


@dataclass(frozen=True)
class MomentumIdeal:
    """Ideal generated by ``J_j - mu_j``; ``mu = 0`` is the plain momentum ideal."""

    momentum: MomentumMap
    mu: Tuple[Scalar, ...] = ()

    def __post_init__(self):
        k = self.momentum.lie.dim
        mu = tuple(Scalar.of(m) if not isinstance(m, Scalar) else m for m in self.mu) or \
            tuple(ZERO for _ in range(k))
        if len(mu) != k:
            raise ReductionError(f"shift needs {k} values")
        object.__setattr__(self, "mu", mu)

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.momentum.vars

    @property
    def space(self) -> PhaseSpace:
        return self.momentum.space

    @cached_property
    def generators(self) -> Tuple[Poly, ...]:
        return tuple(c - m for c, m in zip(self.momentum.components, self.mu))

    @cached_property
    def basis(self) -> GroebnerBasis:
        return groebner(list(self.generators))

    def nf(self, f: Poly) -> Poly:
        return self.basis.normal_form(f)

    def contains(self, f: Poly) -> bool:
        return not self.nf(f)

    def quotient_monomials(self, degree: int) -> List[Monomial]:
        return self.basis.standard_monomials(degree)


@dataclass(frozen=True)
class QuotientClass:
    rep: Poly
    ideal: MomentumIdeal = field(compare=False, repr=False)

    def __eq__(self, other):
        if not isinstance(other, QuotientClass):
            return NotImplemented
        return self.rep == other.rep and self.ideal.basis == other.ideal.basis

    def __hash__(self):
        return hash(self.rep)

    def __add__(self, other: "QuotientClass") -> "QuotientClass":
        return class_of(self.rep + other.rep, self.ideal)

    def __mul__(self, other: "QuotientClass") -> "QuotientClass":
        return class_of(self.rep * other.rep, self.ideal)

    def __str__(self) -> str:
        return f"[{self.rep}]"


def class_of(f: Poly, I: MomentumIdeal) -> QuotientClass:
    if f.vars != I.vars:
        raise ValueError(f"variable-list mismatch: {f.vars} vs {I.vars}")
    return QuotientClass(I.nf(f), I)


def is_invariant_class(c: QuotientClass, J: MomentumMap) -> bool:
    """True iff ``X_{J_xi} f`` lies in the ideal for every basis element."""
    return all(c.ideal.contains(lie_derivative(X, c.rep)) for X in J.fields)


def _kernel_classes(monos: Sequence[Monomial], images: Sequence[Sequence[Poly]],
                    I: MomentumIdeal) -> List[QuotientClass]:
    """Classes ``sum v_t m_t`` for ``v`` in the kernel of ``m_t -> images[t]``."""
    vars = I.vars
    rows: Dict[Tuple[int, Monomial], Dict[int, Scalar]] = {}
    for t, imgs in enumerate(images):
        for j, img in enumerate(imgs):
            for m, c in img.terms.items():
                rows.setdefault((j, m), {})[t] = c
    keys = sorted(rows, key=lambda k: (k[0], grlex_key(k[1])))
    M = [[rows[k].get(t, ZERO) for t in range(len(monos))] for k in keys]
    out = []
    for v in linalg.kernel_basis(M, ncols=len(monos)):
        f = Poly(vars, {m: x for m, x in zip(monos, v) if x})
        out.append(QuotientClass(f, I))
    return out


def invariant_classes_up_to_degree(J: MomentumMap, I: MomentumIdeal, d: int) -> List[QuotientClass]:
    """Basis of invariant classes whose normal-form representative has degree <= d."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    monos = I.quotient_monomials(d)
    images = []
    for m in monos:
        f = Poly.monomial(I.vars, m)
        images.append([I.nf(lie_derivative(X, f)) for X in J.fields])
    return _kernel_classes(monos, images, I)


def reduced_poisson_bracket(c1: QuotientClass, c2: QuotientClass, J: MomentumMap) -> QuotientClass:
    """``{[f1], [f2]} = [{f1, f2}]`` on invariant classes."""
    for c in (c1, c2):
        if not is_invariant_class(c, J):
            raise ReductionError(
                f"class {c} is not invariant (X_J f not in the momentum ideal); "
                f"the reduced bracket is defined only on invariant classes")
    return class_of(poisson_bracket(c1.rep, c2.rep, J.space), c1.ideal)


def normalizer_classes_up_to_degree(I: MomentumIdeal, d: int) -> List[QuotientClass]:
    """Classes of ``{f : {f, g_j} in I for all generators}`` with representative degree <= d.

    Checking generators suffices: ``{f, h g_j} = h {f, g_j} + g_j {f, h}``.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    monos = I.quotient_monomials(d)
    S = I.space
    images = []
    for m in monos:
        f = Poly.monomial(I.vars, m)
        images.append([I.nf(poisson_bracket(f, g, S)) for g in I.generators])
    return _kernel_classes(monos, images, I)


def product_with_orbit(J: MomentumMap, J_orbit: MomentumMap) -> MomentumMap:
    """Momentum map ``J - J_O`` on ``P x O`` with ``omega = pr1* omega - pr2* omega_O``."""
    if J.lie != J_orbit.lie:
        raise ReductionError("orbit model uses different Lie algebra data")
    P, O = J.space, J_orbit.space
    clash = set(P.coords) & set(O.coords)
    if clash:
        raise ReductionError(f"orbit coordinates clash with phase space: {sorted(clash)}")
    n, m = P.dim, O.dim
    om = [[ZERO] * (n + m) for _ in range(n + m)]
    for a in range(n):
        for b in range(n):
            om[a][b] = P.omega[a][b]
    for a in range(m):
        for b in range(m):
            om[n + a][n + b] = -O.omega[a][b]
    space = PhaseSpace(P.coords + O.coords, tuple(tuple(r) for r in om))
    comps = tuple(f.embed(space.coords) - g.embed(space.coords)
                  for f, g in zip(J.components, J_orbit.components))
    return MomentumMap(space, J.lie, comps)


def point_orbit(lie: LieAlgebraData, mu: Sequence[Scalar]) -> MomentumMap:
    """Zero-dimensional orbit model with constant momentum ``mu``."""
    space = PhaseSpace((), ())
    comps = tuple(Poly.const((), m) for m in mu)
    return MomentumMap(space, lie, comps)


def bracket_table(classes: Sequence[QuotientClass], J: MomentumMap) -> List[dict]:
    out = []
    for a in range(len(classes)):
        for b in range(a + 1, len(classes)):
            r = reduced_poisson_bracket(classes[a], classes[b], J)
            out.append({"left": str(classes[a].rep), "right": str(classes[b].rep),
                        "bracket": str(r.rep)})
    return out
