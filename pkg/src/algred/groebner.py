"""Buchberger's algorithm (grlex) and normal forms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence, Tuple

from .scalars import ONE
from .poly import (Monomial, Poly, grlex_key, mono_div, mono_divides, mono_lcm,
                   monomials_up_to)


def _monic(f: Poly) -> Poly:
    lc = f.leading_coeff()
    if not lc.is_unit():
        raise ArithmeticError(
            f"leading coefficient {lc} of {f} is not invertible in Q(i)[hbar]")
    return f.scale(lc.inverse())


def _reduce(f: Poly, basis: Sequence[Poly], leads: Sequence[Monomial]) -> Poly:
    """Full reduction of ``f`` by monic ``basis`` (remainder of multivariate division)."""
    vars = f.vars
    rem = {}
    terms = dict(f.terms)
    while terms:
        m = max(terms, key=grlex_key)
        c = terms.pop(m)
        for g, lm in zip(basis, leads):
            if mono_divides(lm, m):
                shift = mono_div(m, lm)
                for gm, gc in g.terms.items():
                    if gm == lm:
                        continue
                    tm = tuple(a + b for a, b in zip(gm, shift))
                    v = terms.get(tm)
                    d = gc * c
                    nv = v - d if v is not None else -d
                    if nv:
                        terms[tm] = nv
                    else:
                        terms.pop(tm, None)
                break
        else:
            rem[m] = c
    return Poly._raw(vars, rem)


def _spoly(f: Poly, g: Poly, lf: Monomial, lg: Monomial) -> Poly:
    l = mono_lcm(lf, lg)
    return f.mul_term(mono_div(l, lf), ONE) - g.mul_term(mono_div(l, lg), ONE)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis under graded lexicographic order."""

    vars: Tuple[str, ...]
    basis: Tuple[Poly, ...]
    order: str = "grlex"

    @cached_property
    def leads(self) -> Tuple[Monomial, ...]:
        return tuple(g.leading_monomial() for g in self.basis)

    def normal_form(self, f: Poly) -> Poly:
        return normal_form(f, self)

    def contains(self, f: Poly) -> bool:
        return not self.normal_form(f)

    def is_standard(self, m: Monomial) -> bool:
        return not any(mono_divides(lm, m) for lm in self.leads)

    def standard_monomials(self, degree: int) -> List[Monomial]:
        """Monomials of degree <= ``degree`` not in the leading-term ideal, ascending."""
        return [m for m in monomials_up_to(len(self.vars), degree) if self.is_standard(m)]

    def __str__(self) -> str:
        return "[" + ", ".join(str(g) for g in self.basis) + "]"


def groebner(gens: Sequence[Poly]) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    if not gens:
        raise ValueError("groebner needs at least one generator")
    vars = gens[0].vars
    for g in gens:
        if g.vars != vars:
            raise ValueError("generators over different variable lists")

    G: List[Poly] = []
    L: List[Monomial] = []
    for g in gens:
        g = _reduce(g, G, L)
        if g:
            G.append(_monic(g))
            L.append(G[-1].leading_monomial())

    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    while pairs:
        pairs.sort(key=lambda ij: grlex_key(mono_lcm(L[ij[0]], L[ij[1]])))
        i, j = pairs.pop(0)
        # product criterion: coprime leading monomials give a zero S-polynomial
        if all(a == 0 or b == 0 for a, b in zip(L[i], L[j])):
            continue
        s = _reduce(_spoly(G[i], G[j], L[i], L[j]), G, L)
        if s:
            G.append(_monic(s))
            L.append(G[-1].leading_monomial())
            k = len(G) - 1
            pairs.extend((a, k) for a in range(k))

    # minimalize, then interreduce
    keep = []
    for idx in sorted(range(len(G)), key=lambda t: grlex_key(L[t])):
        if not any(mono_divides(L[j], L[idx]) for j in keep):
            keep.append(idx)
    minimal = [G[t] for t in keep]
    reduced = []
    for t, g in enumerate(minimal):
        others = minimal[:t] + minimal[t + 1:]
        r = _reduce(g, others, [o.leading_monomial() for o in others])
        reduced.append(_monic(r))
    reduced.sort(key=lambda g: grlex_key(g.leading_monomial()))
    return GroebnerBasis(vars, tuple(reduced))


def normal_form(f: Poly, B: GroebnerBasis) -> Poly:
    """Canonical representative of ``f`` modulo the ideal of ``B``."""
    if f.vars != B.vars:
        raise ValueError(f"variable-list mismatch: {f.vars} vs {B.vars}")
    if not B.basis:
        return f
    return _reduce(f, B.basis, B.leads)
