"""Prequantization in a trivializing chart, real coordinate polarizations and reduced quantization.

A section is ``psi * s`` with ``nabla s = i hbar^-1 alpha (x) s`` and ``d alpha = -omega``.
The prequantization operator of ``f`` is ``psi -> -i hbar X_f psi + (f + <alpha|X_f>) psi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import linalg
from .poly import Poly, grlex_key, monomials_up_to
from .reduction import MomentumIdeal, MomentumMap, QuotientClass, is_invariant_class
from .scalars import HBAR, I, ZERO, Scalar
from .symplectic import (OneForm, PhaseSpace, PolyVectorField, hamiltonian_vector_field,
                         lie_derivative, poisson_bracket)

MINUS_I_HBAR = -(I * HBAR)
# Factor c for which [P_f, P_g] = c P_{f,g} holds under these sign conventions.
HOLDING_FACTOR = I * HBAR


class QuantizationError(ValueError):
    pass


@dataclass(frozen=True)
class BundleChart:
    space: PhaseSpace
    alpha: OneForm
    label: str = "s"

    def __post_init__(self):
        if self.alpha.vars != self.space.coords:
            raise QuantizationError("connection potential uses different coordinates")
        d = self.alpha.exterior_derivative()
        n = self.space.dim
        for a in range(n):
            for b in range(n):
                want = Poly.const(self.space.coords, -self.space.omega[a][b])
                if d[a][b] != want:
                    raise QuantizationError(
                        f"curvature convention d(alpha) = -omega violated at "
                        f"({self.space.coords[a]},{self.space.coords[b]}): "
                        f"d(alpha) component is {d[a][b]}, expected {want}")

    @classmethod
    def from_components(cls, space: PhaseSpace, comps: Dict[str, Poly], label: str = "s"):
        """``comps`` maps a coordinate name x to the coefficient of ``dx``."""
        for k in comps:
            if k not in space.coords:
                raise QuantizationError(f"unknown coordinate {k!r} in connection potential")
        alpha = OneForm(space.coords, tuple(comps.get(c, Poly.zero(space.coords))
                                            for c in space.coords))
        return cls(space, alpha, label)


@dataclass(frozen=True)
class Section:
    psi: Poly
    chart: BundleChart = field(compare=False, repr=False)

    def __str__(self):
        if self.psi == Poly.const(self.psi.vars, 1):
            return self.chart.label
        return f"({self.psi})*{self.chart.label}"


@dataclass(frozen=True)
class SectionOperator:
    """``psi -> -i hbar X psi + m psi``."""

    field: PolyVectorField
    mult: Poly

    @property
    def vars(self):
        return self.mult.vars

    def __call__(self, psi: Poly) -> Poly:
        return lie_derivative(self.field, psi).scale(MINUS_I_HBAR) + self.mult * psi

    def __add__(self, other: "SectionOperator") -> "SectionOperator":
        return SectionOperator(self.field + other.field, self.mult + other.mult)

    def __sub__(self, other: "SectionOperator") -> "SectionOperator":
        return SectionOperator(self.field - other.field, self.mult - other.mult)

    def scale(self, c: Scalar) -> "SectionOperator":
        return SectionOperator(self.field.scale(c), self.mult.scale(c))

    def commutator(self, other: "SectionOperator") -> "SectionOperator":
        """``[A, B]``; the second-order parts cancel, leaving a first-order operator."""
        X, Y = self.field, other.field
        vf = X.bracket(Y).scale(MINUS_I_HBAR)
        m = (lie_derivative(X, other.mult) - lie_derivative(Y, self.mult)).scale(MINUS_I_HBAR)
        return SectionOperator(vf, m)

    def restrict(self, F: "Polarization") -> "SectionOperator":
        """Action on polarized sections, where derivatives along F vanish."""
        comps = tuple(Poly.zero(self.vars) if a in F.indices else c
                      for a, c in enumerate(self.field.components))
        return SectionOperator(PolyVectorField(self.vars, comps), self.mult)

    def is_zero(self) -> bool:
        return self.field.is_zero() and self.mult.is_zero()

    def is_multiplication(self) -> bool:
        return self.field.is_zero()

    def __str__(self) -> str:
        parts = []
        if not self.field.is_zero():
            parts.append(f"-i*hbar*[{self.field}]")
        if self.mult or not parts:
            parts.append(f"({self.mult})")
        return " + ".join(parts)


@dataclass(frozen=True)
class Polarization:
    """Real constant distribution spanned by coordinate directions ``indices``."""

    space: PhaseSpace
    indices: FrozenSet[int]

    def __post_init__(self):
        n = self.space.dim
        idx = frozenset(self.indices)
        object.__setattr__(self, "indices", idx)
        if any(not 0 <= i < n for i in idx):
            raise QuantizationError("polarization index out of range")
        if 2 * len(idx) != n:
            raise QuantizationError(
                f"polarization is not Lagrangian: spans {len(idx)} directions in dimension {n}")
        for a in idx:
            for b in idx:
                if self.space.omega[a][b]:
                    raise QuantizationError(
                        f"polarization is not Lagrangian: omega(d/d{self.space.coords[a]}, "
                        f"d/d{self.space.coords[b]}) != 0")

    @classmethod
    def spanned_by(cls, space: PhaseSpace, names: Sequence[str]) -> "Polarization":
        for nme in names:
            if nme not in space.coords:
                raise QuantizationError(f"unknown coordinate {nme!r} in polarization")
        return cls(space, frozenset(space.coords.index(nme) for nme in names))

    @property
    def leaf(self) -> Tuple[str, ...]:
        return tuple(c for i, c in enumerate(self.space.coords) if i in self.indices)

    @property
    def transverse(self) -> Tuple[str, ...]:
        return tuple(c for i, c in enumerate(self.space.coords) if i not in self.indices)

    def is_polarized(self, psi: Poly) -> bool:
        return not any(psi.depends_on(v) for v in self.leaf)


def prequant_operator(f: Poly, B: BundleChart, S: PhaseSpace | None = None) -> SectionOperator:
    S = S or B.space
    S.check(f)
    X = hamiltonian_vector_field(f, S)
    return SectionOperator(X, f + B.alpha.pair(X))


def commutator_defect(f: Poly, g: Poly, B: BundleChart, S: PhaseSpace | None = None,
                      factor: Scalar = MINUS_I_HBAR) -> SectionOperator:
    """``[P_f, P_g] - factor * P_{f,g}``.

    With the default ``factor = -i hbar`` this is nonzero in general; the
    identity holds for ``factor = HOLDING_FACTOR = +i hbar``.
    """
    S = S or B.space
    lhs = prequant_operator(f, B, S).commutator(prequant_operator(g, B, S))
    return lhs - prequant_operator(poisson_bracket(f, g, S), B, S).scale(factor)


def _quantizability_defects(f: Poly, F: Polarization, S: PhaseSpace) -> List[Poly]:
    X = hamiltonian_vector_field(f, S)
    return [X.components[a].derivative(i) for i in sorted(F.indices)
            for a in range(S.dim) if a not in F.indices]


def is_quantizable(f: Poly, F: Polarization, S: PhaseSpace | None = None) -> bool:
    """``[X_f, d/dx_i]`` lies in F for each direction ``x_i`` of F."""
    return not any(_quantizability_defects(f, F, S or F.space))


def _check_adapted(F: Polarization, B: BundleChart):
    for i in F.indices:
        if B.alpha.components[i]:
            raise QuantizationError(
                f"chart not adapted to the polarization: <alpha|d/d{B.space.coords[i]}> = "
                f"{B.alpha.components[i]} != 0")


def polarized_basis(F: Polarization, B: BundleChart, d: int) -> List[Section]:
    """Monomials in the transverse coordinates up to degree ``d`` (ascending)."""
    _check_adapted(F, B)
    vars = B.space.coords
    trans = [i for i in range(len(vars)) if i not in F.indices]
    out = []
    for m in monomials_up_to(len(trans), d):
        full = [0] * len(vars)
        for i, e in zip(trans, m):
            full[i] = e
        out.append(Section(Poly.monomial(vars, tuple(full)), B))
    return out


@dataclass(frozen=True)
class SectionClass:
    psi: Poly
    chart: BundleChart = field(compare=False, repr=False)
    ideal: MomentumIdeal = field(compare=False, repr=False)

    def __str__(self):
        return f"[{Section(self.psi, self.chart)}]"


def section_class(psi: Poly, B: BundleChart, I: MomentumIdeal) -> SectionClass:
    return SectionClass(I.nf(psi), B, I)


def is_invariant_section(c: SectionClass, F: Polarization) -> bool:
    """``Q_{J_xi - mu_xi} psi`` lies in the ideal for every generator."""
    B, I = c.chart, c.ideal
    return all(I.contains(prequant_operator(g, B).restrict(F)(c.psi)) for g in I.generators)


def _coords(p: Poly, monos) -> List[Scalar]:
    return [p.coeff(m) for m in monos]


def invariant_reduced_sections(J: MomentumMap, I: MomentumIdeal, F: Polarization,
                               B: BundleChart, d: int) -> List[SectionClass]:
    """Basis of invariant classes of polarized sections of degree <= d."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    basis = polarized_basis(F, B, d)
    ops = [prequant_operator(g, B).restrict(F) for g in I.generators]
    images = [[I.nf(op(s.psi)) for op in ops] for s in basis]
    rows: Dict[tuple, Dict[int, Scalar]] = {}
    for t, imgs in enumerate(images):
        for j, img in enumerate(imgs):
            for m, c in img.terms.items():
                rows.setdefault((j, m), {})[t] = c
    keys = sorted(rows, key=lambda k: (k[0], grlex_key(k[1])))
    M = [[rows[k].get(t, ZERO) for t in range(len(basis))] for k in keys]
    kernel = linalg.kernel_basis(M, ncols=len(basis))
    nfs = []
    for v in kernel:
        psi = Poly.zero(B.space.coords)
        for x, s in zip(v, basis):
            if x:
                psi = psi + s.psi.scale(x)
        nfs.append(I.nf(psi))
    monos = sorted({m for p in nfs for m in p.terms}, key=grlex_key)
    vecs = [_coords(p, monos) for p in nfs if p]
    out = []
    for row in linalg.row_basis(vecs):
        out.append(SectionClass(Poly(B.space.coords, {m: x for m, x in zip(monos, row) if x}),
                                B, I))
    return out


def quantizable_invariant_classes(J: MomentumMap, I: MomentumIdeal, F: Polarization,
                                  d: int) -> List[Tuple[Poly, QuotientClass]]:
    """Pairs (quantizable representative, class) spanning quantizable invariant classes.

    Representatives range over all polynomials of degree <= d, so a class may
    be listed with a representative that is not its normal form.
    """
    S = I.space
    vars = S.coords
    monos = monomials_up_to(len(vars), d)
    rows: Dict[tuple, Dict[int, Scalar]] = {}
    for t, m in enumerate(monos):
        f = Poly.monomial(vars, m)
        conds = _quantizability_defects(f, F, S) + [I.nf(lie_derivative(X, f)) for X in J.fields]
        for j, img in enumerate(conds):
            for mm, c in img.terms.items():
                rows.setdefault((j, mm), {})[t] = c
    keys = sorted(rows, key=lambda k: (k[0], grlex_key(k[1])))
    M = [[rows[k].get(t, ZERO) for t in range(len(monos))] for k in keys]
    out: List[Tuple[Poly, QuotientClass]] = []
    kept: List[List[Scalar]] = []
    for v in linalg.kernel_basis(M, ncols=len(monos)):
        f = Poly(vars, {m: x for m, x in zip(monos, v) if x})
        nf = I.nf(f)
        if not nf:
            continue
        vec = _coords(nf, monos)
        if linalg.rank(kept + [vec]) > len(kept):
            kept.append(vec)
            rep = nf if is_quantizable(nf, F, S) else f
            out.append((rep, QuotientClass(nf, I)))
    return out


def _span_coords(basis: Sequence[SectionClass], target: Poly) -> Optional[List[Scalar]]:
    monos = sorted({m for c in basis for m in c.psi.terms} | set(target.terms), key=grlex_key)
    cols = [_coords(c.psi, monos) for c in basis]
    return linalg.solve_in_span(cols, _coords(target, monos))


def reduced_quantization_matrix(c: QuotientClass, basis: Sequence[SectionClass], J: MomentumMap,
                                F: Polarization, B: BundleChart, rep: Poly | None = None,
                                path: str = "Q") -> linalg.Matrix:
    """Matrix of ``[sigma] -> [Q_f sigma]`` in ``basis``; column t is the image of basis[t].

    ``rep`` picks the representative of ``c`` (default: its normal form).
    ``path="P"`` applies the full prequantization operator instead of its
    restriction to polarized sections; on polarized sections both agree.
    """
    I = c.ideal
    f = c.rep if rep is None else rep
    if I.nf(f) != c.rep:
        raise QuantizationError(f"representative {f} does not belong to class {c}")
    if not is_quantizable(f, F, B.space):
        raise QuantizationError(
            f"class representative {f} is not quantizable: its Hamiltonian flow does not "
            f"preserve the polarization")
    if not is_invariant_class(c, J):
        raise QuantizationError(f"class {c} is not invariant: X_J f is not in the momentum ideal")
    op = prequant_operator(f, B)
    if path == "Q":
        op = op.restrict(F)
    elif path != "P":
        raise ValueError("path must be 'Q' or 'P'")
    cols = []
    for s in basis:
        img = I.nf(op(s.psi))
        x = _span_coords(basis, img)
        if x is None:
            raise QuantizationError(
                f"image [{img}] of basis element {s} lies outside the span of the section basis")
        cols.append(x)
    n = len(basis)
    return [[cols[t][s] for t in range(n)] for s in range(n)]


def symbolic_matrix(named: Sequence[Tuple[str, Poly, QuotientClass]], basis: Sequence[SectionClass],
                    J: MomentumMap, F: Polarization, B: BundleChart) -> List[List[Poly]]:
    """Matrix of ``sum_k a_k f_k`` with symbolic coefficients ``a_k``, by linearity."""
    names = tuple(nm for nm, _, _ in named)
    n = len(basis)
    out = [[Poly.zero(names) for _ in range(n)] for _ in range(n)]
    for nm, rep, cls in named:
        M = reduced_quantization_matrix(cls, basis, J, F, B, rep=rep)
        sym = Poly.var(names, nm)
        for s in range(n):
            for t in range(n):
                if M[s][t]:
                    out[s][t] = out[s][t] + sym.scale(M[s][t])
    return out


@dataclass(frozen=True)
class RepresentationGenerator:
    """The operator ``(-i hbar)^-1 * op``."""

    op: SectionOperator
    prefactor: str = "(-i*hbar)^-1"

    def __str__(self):
        return f"{self.prefactor} * [{self.op}]"


def representation_generator(j: int, J: MomentumMap, F: Polarization, B: BundleChart,
                             scale: Scalar | int = 1) -> RepresentationGenerator:
    f = J.components[j]
    if not isinstance(scale, Scalar):
        scale = Scalar.of(scale)
    f = f.scale(scale)
    if not is_quantizable(f, F, B.space):
        raise QuantizationError(
            f"momentum component {J.lie.names[j]} is not quantizable in the polarization")
    return RepresentationGenerator(prequant_operator(f, B).restrict(F))


SIGN_NOTE_REFERENCE = r"$\{ad+(bd+ae-i\hbar ce)p\}\sigma _{1}$"


def sign_note() -> dict:
    return {
        "reference_form": SIGN_NOTE_REFERENCE,
        "computed_form": "{a*d + (b*d + a*e + i*hbar*c*e)*p}*s",
        "note": ("the reference form carries -i*hbar on the c*e term; expanding "
                 "-i*hbar*X_f psi + (f + <alpha|X_f>) psi with X_{q h(p)} = q h'(p) d/dq - h(p) d/dp "
                 "gives +i*hbar*h(p)*psi'(p), so the computed matrix has a + i*hbar*c"),
    }
