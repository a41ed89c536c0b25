"""Point-supported jet distributions on the leaf space and the kernel of dual momentum operators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Dict, List, Mapping, Sequence, Tuple

from . import linalg
from .poly import Poly, grlex_key, monomials_up_to
from .scalars import ONE, ZERO, Scalar

Point = Tuple[Scalar, ...]
MultiIndex = Tuple[int, ...]
JetKey = Tuple[Point, MultiIndex]


class DualError(ValueError):
    pass


def _point(values) -> Point:
    return tuple(v if isinstance(v, Scalar) else Scalar.of(v) for v in values)


def _point_key(x: Point):
    return tuple((sorted(s.items())) for s in x)


@dataclass(frozen=True)
class JetDistribution:
    """``sum c * d^beta delta_{x0}`` over the coordinates ``vars``."""

    vars: Tuple[str, ...]
    terms: Mapping[JetKey, Scalar]

    def __post_init__(self):
        clean = {}
        for (x, b), c in self.terms.items():
            x = _point(x)
            if len(x) != len(self.vars) or len(b) != len(self.vars):
                raise DualError("jet point or multi-index has wrong length")
            c = c if isinstance(c, Scalar) else Scalar.of(c)
            if c:
                clean[(x, tuple(b))] = c
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def delta(cls, vars: Sequence[str], point=None, order=None, c=ONE) -> "JetDistribution":
        n = len(vars)
        point = _point(point if point is not None else [0] * n)
        order = tuple(order) if order is not None else (0,) * n
        return cls(tuple(vars), {(point, order): c})

    def __add__(self, other: "JetDistribution") -> "JetDistribution":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return JetDistribution(self.vars, out)

    def scale(self, c: Scalar) -> "JetDistribution":
        return JetDistribution(self.vars, {k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, JetDistribution):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (_point_key(kv[0][0]), grlex_key(kv[0][1])))

    def term_records(self) -> List[dict]:
        return [{"point": [str(x) for x in pt], "order": list(b), "coeff": str(c)}
                for (pt, b), c in self.sorted_terms()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (pt, b), c in self.sorted_terms():
            atom = jet_atom_str(self.vars, pt, b)
            if c == ONE:
                parts.append(atom)
            elif c == -ONE:
                parts.append("-" + atom)
            else:
                cs = str(c)
                if c.term_count() > 1 or " " in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{atom}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def jet_atom_str(vars: Sequence[str], pt: Point, b: MultiIndex) -> str:
    if len(vars) == 1:
        v, x, k = vars[0], pt[0], b[0]
        arg = str(Poly.var((v,), v) - Poly.const((v,), x))
        prime = "'" * k if k <= 3 else f"^({k})"
        return f"delta{prime}({arg})"
    at = ",".join(str(x) for x in pt)
    if any(b):
        return f"D^({','.join(map(str, b))})delta@({at})"
    return f"delta@({at})"


def _restrict(psi: Poly, vars: Tuple[str, ...]) -> Poly:
    if psi.vars == vars:
        return psi
    extra = psi.used_vars() - set(vars)
    if extra:
        raise DualError(
            f"section coefficient {psi} depends on leaf variables {sorted(extra)}; "
            f"jets pair only with polarized (transverse-only) functions")
    return psi.embed(vars)


def _deriv(psi: Poly, beta: MultiIndex) -> Poly:
    for i, k in enumerate(beta):
        for _ in range(k):
            psi = psi.derivative(i)
            if not psi:
                return psi
    return psi


def _value(psi: Poly, pt: Point) -> Scalar:
    return psi.value_at(dict(zip(psi.vars, pt)))


def jet_pair(T: JetDistribution, psi: Poly) -> Scalar:
    """``sum c * (-1)^|beta| * (d^beta psi)(x0)``."""
    psi = _restrict(psi, T.vars)
    out = ZERO
    for (pt, b), c in T.terms.items():
        v = _value(_deriv(psi, b), pt)
        if v:
            out = out + (c * v if sum(b) % 2 == 0 else -(c * v))
    return out


def multiply(k: Poly, T: JetDistribution) -> JetDistribution:
    """The jet ``S`` with ``<S, psi> = <T, k psi>`` (Leibniz expansion at the support)."""
    k = _restrict(k, T.vars)
    out: Dict[JetKey, Scalar] = {}
    for (pt, b), c in T.terms.items():
        for g in product(*(range(x + 1) for x in b)):
            diff = tuple(x - y for x, y in zip(b, g))
            v = _value(_deriv(k, diff), pt)
            if not v:
                continue
            w = 1
            for x, y in zip(b, g):
                w *= comb(x, y)
            if sum(diff) % 2:
                w = -w
            key = (pt, g)
            out[key] = out.get(key, ZERO) + c * v * w
    return JetDistribution(T.vars, out)


def kernel_of_dual(Js: Sequence[Poly], supports: Sequence[Sequence], max_order: int,
                   vars: Sequence[str] | None = None) -> List[JetDistribution]:
    """Basis of jets supported at ``supports`` with order <= max_order killed by every ``J``."""
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    if not Js:
        raise DualError("kernel of the dual needs at least one momentum component")
    vars = tuple(vars) if vars is not None else Js[0].vars
    Js = [_restrict(j, vars) for j in Js]
    pts = [_point(x) for x in supports]
    for pt in pts:
        if len(pt) != len(vars):
            raise DualError(f"support point {list(map(str, pt))} has wrong dimension")
        for j in Js:
            if _value(j, pt):
                raise DualError(
                    f"support point ({', '.join(map(str, pt))}) is not a zero of {j}; "
                    f"jets in the kernel must sit in the common zero set of the momentum")
    unknowns: List[JetKey] = [(pt, b) for pt in pts for b in monomials_up_to(len(vars), max_order)]
    index = {u: t for t, u in enumerate(unknowns)}
    rows: Dict[tuple, Dict[int, Scalar]] = {}
    for t, (pt, b) in enumerate(unknowns):
        T = JetDistribution(vars, {(pt, b): ONE})
        for jn, j in enumerate(Js):
            for key, c in multiply(j, T).terms.items():
                rows.setdefault((jn, index[key]), {})[t] = c
    M = [[rows[r].get(t, ZERO) for t in range(len(unknowns))] for r in sorted(rows)]
    out = []
    for v in linalg.kernel_basis(M, ncols=len(unknowns)):
        out.append(JetDistribution(vars, {u: x for u, x in zip(unknowns, v) if x}))
    return out


def in_kernel(T: JetDistribution, Js: Sequence[Poly]) -> bool:
    return all(multiply(j, T).is_zero() for j in Js)


def pair_with_class(T: JetDistribution, c, Js: Sequence[Poly]) -> Scalar:
    """Pairing of a kernel jet with an invariant section class ``c`` (any object with ``psi``)."""
    if not in_kernel(T, Js):
        raise DualError(f"jet {T} is not in the kernel of the dual momentum operator")
    return jet_pair(T, c.psi)


def pairing_matrix(kernel: Sequence[JetDistribution], classes, Js: Sequence[Poly]) -> linalg.Matrix:
    return [[pair_with_class(T, c, Js) for c in classes] for T in kernel]


def action_matrix(k: Poly, kernel: Sequence[JetDistribution]) -> linalg.Matrix:
    """Matrix of ``T -> k T`` on ``kernel``; column t holds the image of kernel[t]."""
    keys = sorted({key for T in kernel for key in T.terms},
                  key=lambda kv: (_point_key(kv[0]), grlex_key(kv[1])))
    cols = [[T.terms.get(key, ZERO) for key in keys] for T in kernel]
    out_cols = []
    for T in kernel:
        S = multiply(k, T)
        extra = set(S.terms) - set(keys)
        x = None if extra else linalg.solve_in_span(cols, [S.terms.get(key, ZERO) for key in keys])
        if x is None:
            raise DualError(f"multiplication by {k} does not preserve the kernel")
        out_cols.append(x)
    n = len(kernel)
    return [[out_cols[t][s] for t in range(n)] for s in range(n)]


def _rational_roots(f: Poly) -> List[Fraction]:
    coeffs = {m[0]: c for m, c in f.terms.items()}
    fr = {}
    for e, c in coeffs.items():
        if not c.is_real_rational():
            raise DualError("automatic support detection needs rational coefficients")
        fr[e] = c.to_fraction()
    low = min(fr)
    fr = {e - low: c for e, c in fr.items()}
    roots = [Fraction(0)] if low > 0 else []
    deg = max(fr)
    if deg == 0:
        return roots
    den = 1
    for c in fr.values():
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = {e: int(c * den) for e, c in fr.items()}
    a0, an = abs(ints[0]), abs(ints[deg])

    def divisors(n):
        return [d for d in range(1, n + 1) if n % d == 0]

    for pnum in divisors(a0):
        for qden in divisors(an):
            for s in (1, -1):
                r = Fraction(s * pnum, qden)
                if r in roots:
                    continue
                if sum(c * r ** e for e, c in fr.items()) == 0:
                    roots.append(r)
    return sorted(roots)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def detect_supports(Js: Sequence[Poly], vars: Sequence[str]) -> List[Tuple[Scalar]]:
    """Common rational zeros of univariate ``Js``; multivariate input is not supported."""
    vars = tuple(vars)
    if len(vars) != 1:
        raise DualError("support points must be given explicitly for more than one transverse variable")
    Js = [_restrict(j, vars) for j in Js]
    nonzero = [j for j in Js if j]
    if not nonzero:
        raise DualError("momentum vanishes identically on the leaf space: zero set is "
                        "positive-dimensional and cannot be modeled by point jets")
    roots = set(_rational_roots(nonzero[0]))
    for j in nonzero[1:]:
        roots &= set(_rational_roots(j))
    return [(Scalar.of(r),) for r in sorted(roots)]
