"""Seeded property suites over a scenario."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from . import dual, isotypic, linalg
from .groebner import groebner
from .parsing import parse_poly
from .poly import Poly, monomials_up_to
from .quantization import (HOLDING_FACTOR, MINUS_I_HBAR, commutator_defect, invariant_reduced_sections,
                           is_invariant_section, is_quantizable, prequant_operator,
                           quantizable_invariant_classes, reduced_quantization_matrix)
from .reduction import (MomentumIdeal, QuotientClass, class_of, invariant_classes_up_to_degree,
                        is_invariant_class, normalizer_classes_up_to_degree, product_with_orbit,
                        reduced_poisson_bracket)
from .scalars import ONE, Scalar
from .symplectic import (PhaseSpace, hamiltonian_vector_field, poisson_bracket,
                         poisson_bracket_via_omega)

SUITES = ("algebra", "symplectic", "reduction", "quantization", "dual", "isotypic")


class Property:
    def __init__(self, name: str, expected: str = "pass"):
        self.name = name
        self.cases = 0
        self.failed = 0
        self.counterexample: Optional[dict] = None
        self.skipped: Optional[str] = None

    def check(self, ok: bool, payload: Callable[[], dict]):
        self.cases += 1
        if not ok:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = payload()

    def record(self) -> dict:
        out = {"name": self.name, "cases": self.cases, "failed": self.failed,
               "passed": self.failed == 0 and self.skipped is None}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.skipped is not None:
            out["skipped"] = self.skipped
            out["passed"] = True
        return out


def random_scalar(rng: random.Random, gaussian: bool = True) -> Scalar:
    r = rng.randint(-3, 3)
    if rng.random() < 0.2:
        r = Fraction(r, rng.randint(1, 3))
    im = rng.randint(-2, 2) if gaussian and rng.random() < 0.25 else 0
    if r == 0 and im == 0:
        r = 1
    return Scalar.of(r, im)


def random_poly(rng: random.Random, vars, degree: int = 3, terms: int = 4,
                gaussian: bool = True) -> Poly:
    monos = monomials_up_to(len(vars), degree)
    out = {}
    for _ in range(rng.randint(1, terms)):
        out[rng.choice(monos)] = random_scalar(rng, gaussian)
    return Poly(tuple(vars), out)


def _s(x) -> str:
    return str(x)


# -- algebra --------------------------------------------------------------

def suite_algebra(sc, rng: random.Random) -> List[dict]:
    vars = sc.space.coords or ("x", "y")
    ring = Property("ring_laws")
    for _ in range(200):
        a, b, c = (random_poly(rng, vars) for _ in range(3))
        ok = ((a + b) + c == a + (b + c) and a * (b + c) == a * b + a * c
              and a * b == b * a and (a * b) * c == a * (b * c) and a - a == Poly.zero(vars))
        ring.check(ok, lambda: {"a": _s(a), "b": _s(b), "c": _s(c)})
    rt = Property("parse_print_roundtrip")
    for _ in range(1000):
        f = random_poly(rng, vars, terms=5)
        if rng.random() < 0.3:
            f = f.scale(Scalar.hbar(rng.randint(1, 2)) + random_scalar(rng))
        g = parse_poly(str(f), vars)
        rt.check(g == f, lambda: {"poly": _s(f), "reparsed": _s(g)})
    nf = Property("normal_form_laws")
    if sc.momentum is not None:
        I = MomentumIdeal(sc.momentum, sc.mu)
        gens = list(I.generators)
        for _ in range(100):
            f = random_poly(rng, vars)
            h = random_poly(rng, vars, degree=2)
            g = rng.choice(gens)
            r = I.nf(f)
            ok = I.nf(f + h * g) == r and I.nf(r) == r and all(not I.nf(x) for x in gens)
            ok = ok and all(I.basis.is_standard(m) for m in r.terms)
            nf.check(ok, lambda: {"f": _s(f), "h": _s(h), "generator": _s(g)})
    else:
        nf.skipped = "no momentum map in scenario"
    return [ring.record(), rt.record(), nf.record()]


# -- symplectic -----------------------------------------------------------

def _spaces(sc) -> List[PhaseSpace]:
    out = []
    if sc.space.dim:
        out.append(sc.space)
    two = PhaseSpace.canonical([("p1", "q1"), ("p2", "q2")])
    if not out or out[0].coords != two.coords:
        out.append(two)
    return out


def suite_symplectic(sc, rng: random.Random, cases: int = 500) -> List[dict]:
    spaces = _spaces(sc)
    laws = Property("antisymmetry_bilinearity_leibniz_jacobi")
    two_routes = Property("bracket_two_routes")
    anti = Property("anti_homomorphism")
    for k in range(cases):
        S = spaces[k % len(spaces)]
        f, g, h = (random_poly(rng, S.coords, terms=3, gaussian=False) for _ in range(3))
        c = random_scalar(rng)
        fg = poisson_bracket(f, g, S)
        gh = poisson_bracket(g, h, S)
        hf = poisson_bracket(h, f, S)
        ok = fg == -poisson_bracket(g, f, S)
        ok = ok and poisson_bracket(f.scale(c) + h, g, S) == fg.scale(c) - poisson_bracket(g, h, S)
        ok = ok and poisson_bracket(f, g * h, S) == fg * h + g * poisson_bracket(f, h, S)
        jac = (poisson_bracket(f, gh, S) + poisson_bracket(g, hf, S) + poisson_bracket(h, fg, S))
        ok = ok and not jac
        laws.check(ok, lambda: {"f": _s(f), "g": _s(g), "h": _s(h), "jacobi_defect": _s(jac)})
        if k < 100:
            two_routes.check(fg == poisson_bracket_via_omega(f, g, S),
                             lambda: {"f": _s(f), "g": _s(g)})
            Xf, Xg = hamiltonian_vector_field(f, S), hamiltonian_vector_field(g, S)
            lhs = hamiltonian_vector_field(fg, S)
            rhs = Xf.bracket(Xg).scale(-ONE)
            anti.check(lhs == rhs, lambda: {"f": _s(f), "g": _s(g)})
    canon = Property("canonical_relations")
    for S in spaces:
        if S.coords and all(S.omega[2 * i][2 * i + 1] == ONE for i in range(S.dim // 2)):
            n = S.dim // 2
            for i in range(n):
                for j in range(n):
                    pi, qj = Poly.var(S.coords, S.coords[2 * i]), Poly.var(S.coords, S.coords[2 * j + 1])
                    pj, qi = Poly.var(S.coords, S.coords[2 * j]), Poly.var(S.coords, S.coords[2 * i + 1])
                    want = Poly.const(S.coords, -1 if i == j else 0)
                    ok = (poisson_bracket(pi, qj, S) == want and not poisson_bracket(pi, pj, S)
                          and not poisson_bracket(qi, qj, S))
                    canon.check(ok, lambda: {"i": i, "j": j, "space": list(S.coords)})
    return [laws.record(), two_routes.record(), anti.record(), canon.record()]


# -- reduction ------------------------------------------------------------

def _random_combo(rng, classes: List[QuotientClass], vars) -> Poly:
    f = Poly.zero(vars)
    for c in classes:
        if rng.random() < 0.7:
            f = f + c.rep.scale(random_scalar(rng, gaussian=False))
    return f


def shifted_orbit_comparison(sc, max_degree: int) -> Optional[dict]:
    """Invariant, normalizer and point-orbit product bases per degree (abelian, point orbit)."""
    if sc.orbit is None or sc.orbit.space.dim or not sc.lie.is_abelian():
        return None
    J = sc.momentum
    I = MomentumIdeal(J, sc.mu)
    prod = product_with_orbit(J, sc.orbit)
    Ip = MomentumIdeal(prod)
    rows = []
    for d in range(max_degree + 1):
        a = [str(c.rep) for c in invariant_classes_up_to_degree(J, I, d)]
        b = [str(c.rep) for c in normalizer_classes_up_to_degree(I, d)]
        c = [str(x.rep) for x in invariant_classes_up_to_degree(prod, Ip, d)]
        rows.append({"degree": d, "shifted_invariants": a, "normalizer": b, "product": c,
                     "coincide": a == b == c})
    return {"rows": rows, "coincide": all(r["coincide"] for r in rows)}


def suite_reduction(sc, rng: random.Random, cases: int = 100) -> List[dict]:
    wd = Property("bracket_representative_independence")
    closure = Property("invariant_subalgebra_closure")
    norm = Property("normalizer_generator_reduction")
    rep_inv = Property("invariance_representative_independence")
    consistency = Property("shifted_orbit_consistency")
    if sc.momentum is None:
        for p in (wd, closure, norm, rep_inv, consistency):
            p.skipped = "no momentum map in scenario"
        return [p.record() for p in (wd, closure, norm, rep_inv, consistency)]
    J = sc.momentum
    S = J.space
    I = MomentumIdeal(J, sc.mu)
    d = sc.degree
    inv = invariant_classes_up_to_degree(J, I, d)
    gens = list(I.generators)
    for _ in range(cases):
        f1 = _random_combo(rng, inv, S.coords)
        f2 = _random_combo(rng, inv, S.coords)
        h = random_poly(rng, S.coords, degree=2, gaussian=False) * rng.choice(gens)
        c1, c2 = class_of(f1, I), class_of(f2, I)
        base = reduced_poisson_bracket(c1, c2, J)
        shifted = class_of(poisson_bracket(f1 + h, f2, S), I)
        wd.check(base == shifted, lambda: {"f1": _s(f1), "f2": _s(f2), "shift": _s(h)})
        ok = is_invariant_class(class_of(f1 + h, I), J)
        rep_inv.check(ok, lambda: {"f": _s(f1), "shift": _s(h)})
    for a in inv:
        for b in inv:
            ok = is_invariant_class(a * b, J) and is_invariant_class(reduced_poisson_bracket(a, b, J), J)
            closure.check(ok, lambda: {"a": _s(a.rep), "b": _s(b.rep)})
    ncls = normalizer_classes_up_to_degree(I, min(d, 3))
    for _ in range(cases):
        f = _random_combo(rng, ncls, S.coords)
        g = random_poly(rng, S.coords, degree=2, gaussian=False)
        gen = rng.choice(gens)
        norm.check(I.contains(poisson_bracket(f, g * gen, S)),
                   lambda: {"f": _s(f), "multiplier": _s(g), "generator": _s(gen)})
    cmp = shifted_orbit_comparison(sc, 3)
    if cmp is None:
        consistency.skipped = "needs abelian Lie algebra and a point orbit"
    else:
        for row in cmp["rows"]:
            consistency.check(row["coincide"], lambda: row)
    return [wd.record(), rep_inv.record(), closure.record(), norm.record(), consistency.record()]


# -- quantization ---------------------------------------------------------

def suite_quantization(sc, rng: random.Random, cases: int = 200, shifts: int = 100) -> List[dict]:
    stated = Property("commutator_zero_defect_minus_i_hbar")
    holding = Property("commutator_identity_plus_i_hbar")
    indep = Property("matrix_representative_independence")
    module = Property("module_law")
    qp = Property("q_equals_p_on_polarized")
    mult = Property("momentum_acts_by_multiplication")
    props = [stated, holding, indep, module, qp, mult]
    if sc.chart is None:
        for p in props:
            p.skipped = "scenario has no chart"
        return [p.record() for p in props]
    B, S = sc.chart, sc.space
    for _ in range(cases):
        f = random_poly(rng, S.coords, terms=3)
        g = random_poly(rng, S.coords, terms=3)
        d1 = commutator_defect(f, g, B, S)
        stated.check(d1.is_zero(), lambda: {"f": _s(f), "g": _s(g), "defect": _s(d1)})
        d2 = commutator_defect(f, g, B, S, factor=HOLDING_FACTOR)
        holding.check(d2.is_zero(), lambda: {"f": _s(f), "g": _s(g), "defect": _s(d2)})
    F = sc.polarization
    if F is None or sc.momentum is None:
        for p in (indep, module, qp, mult):
            p.skipped = "scenario has no polarization or momentum"
        return [p.record() for p in props]
    J = sc.momentum
    I = MomentumIdeal(J, sc.mu)
    basis = invariant_reduced_sections(J, I, F, B, sc.degree)
    qcls = quantizable_invariant_classes(J, I, F, sc.degree)
    trans_gens = [g for g in I.generators if F.is_polarized(g)]
    for _ in range(shifts):
        if not qcls or not trans_gens:
            break
        f = Poly.zero(S.coords)
        for rep, _c in qcls:
            if rng.random() < 0.7:
                f = f + rep.scale(random_scalar(rng))
        c = class_of(f, I)
        h = random_poly(rng, F.transverse, degree=2).embed(S.coords) * rng.choice(trans_gens)
        f2 = f + h
        if not is_quantizable(f, F, S) or not is_quantizable(f2, F, S):
            continue
        M1 = reduced_quantization_matrix(c, basis, J, F, B, rep=f)
        M2 = reduced_quantization_matrix(c, basis, J, F, B, rep=f2)
        M3 = reduced_quantization_matrix(c, basis, J, F, B, rep=f, path="P")
        ok = M1 == M2
        k = rng.randrange(len(basis))
        psi = basis[k].psi
        psi2 = psi + random_poly(rng, F.transverse, degree=2).embed(S.coords) * rng.choice(trans_gens)
        op = prequant_operator(f, B).restrict(F)
        ok = ok and I.nf(op(psi)) == I.nf(op(psi2))
        indep.check(ok, lambda: {"f": _s(f), "shift": _s(h), "section": _s(psi), "shifted_section": _s(psi2)})
        qp.check(M1 == M3, lambda: {"f": _s(f)})
        prod = type(basis[k])(I.nf(c.rep * psi), B, I)
        module.check(is_invariant_section(prod, F), lambda: {"f": _s(c.rep), "section": _s(psi)})
    for j, comp in enumerate(J.components):
        if all(not comp.depends_on(v) for v in F.leaf):
            op = prequant_operator(comp, B).restrict(F)
            mult.check(op.is_multiplication() and op.mult == comp,
                       lambda: {"component": J.lie.names[j], "operator": _s(op)})
    if not mult.cases:
        mult.skipped = "momentum is not constant along the polarization"
    return [p.record() for p in props]


# -- dual -----------------------------------------------------------------

def suite_dual(sc, rng: random.Random, cases: int = 100) -> List[dict]:
    adj = Property("multiply_adjointness")
    indep = Property("pairing_representative_independence")
    dims = Property("kernel_dimension_power")
    nondeg = Property("pairing_nondegenerate")
    x = ("x",)
    for _ in range(cases):
        k = random_poly(rng, x, degree=3)
        psi = random_poly(rng, x, degree=3)
        T = dual.JetDistribution(x, {((random_scalar(rng, False),), (rng.randint(0, 3),)): random_scalar(rng)
                                     for _ in range(rng.randint(1, 3))})
        lhs = dual.jet_pair(dual.multiply(k, T), psi)
        rhs = dual.jet_pair(T, k * psi)
        adj.check(lhs == rhs, lambda: {"k": _s(k), "psi": _s(psi), "jet": _s(T)})
    for r in range(1, 5):
        for m in range(0, 5):
            K = dual.kernel_of_dual([Poly.var(x, "x") ** r], [(0,)], m)
            dims.check(len(K) == min(m + 1, r), lambda: {"r": r, "max_order": m, "dim": len(K)})
    ctx = dual_context(sc)
    if ctx is None:
        indep.skipped = nondeg.skipped = "scenario has no polarized momentum"
        return [adj.record(), indep.record(), dims.record(), nondeg.record()]
    kernel, classes, Js, I, F = ctx
    for _ in range(cases):
        if not kernel or not classes:
            break
        T = rng.choice(kernel)
        c = rng.choice(classes)
        h = random_poly(rng, F.transverse, degree=2)
        g = rng.choice(Js)
        psi2 = c.psi + (h * g).embed(c.psi.vars)
        a = dual.pair_with_class(T, c, Js)
        b = dual.jet_pair(T, psi2)
        indep.check(a == b, lambda: {"jet": _s(T), "section": _s(c.psi), "shift": _s(h * g)})
    M = dual.pairing_matrix(kernel, classes, Js)
    ok = len(kernel) == len(classes) and (not M or linalg.rank(M) == len(M))
    nondeg.check(ok, lambda: {"kernel": len(kernel), "classes": len(classes)})
    return [adj.record(), indep.record(), dims.record(), nondeg.record()]


def dual_context(sc):
    F = sc.polarization
    if F is None or sc.chart is None or sc.momentum is None:
        return None
    I = MomentumIdeal(sc.momentum, sc.mu)
    trans = F.transverse
    if any(not F.is_polarized(g) for g in I.generators):
        return None
    Js = [g.embed(trans) for g in I.generators]
    from .scenario import resolve_supports
    supports = resolve_supports(sc, Js)
    kernel = dual.kernel_of_dual(Js, supports, sc.max_order, trans)
    classes = invariant_reduced_sections(sc.momentum, I, F, sc.chart, sc.degree)
    return kernel, classes, Js, I, F


# -- isotypic -------------------------------------------------------------

def cg_multiplicity(rep, rep_O) -> int:
    """Multiplicity of rep_O in rep from weights of ``-2i rho(u3)`` (float, su(2) basis)."""

    def weights(R):
        A = -2j * np.array([[x.to_complex() for x in row] for row in R.mat(2)], dtype=complex)
        return sorted(int(round(w.real)) for w in np.linalg.eigvals(A)) if R.dim else []

    def decompose(ws):
        ws = list(ws)
        spins = []
        while ws:
            top = max(ws)
            spins.append(top)
            for w in range(-top, top + 1, 2):
                ws.remove(w)
        return spins

    target = decompose(weights(rep_O))
    if len(target) != 1:
        raise ValueError("rep_O is not irreducible")
    return decompose(weights(rep)).count(target[0])


def builtin_isotypic_cases():
    L = isotypic.su2()
    h, one, tr = isotypic.spin_half(L), isotypic.spin_one(L), isotypic.trivial(L)
    return [("two_halves|half", isotypic.direct_sum(h, h), h),
            ("spin1|half", one, h),
            ("half_x_half|trivial", isotypic.tensor_product(h, h), tr)]


def suite_isotypic(sc, rng: random.Random) -> List[dict]:
    props = Property("projector_laws")
    oracle = Property("multiplicity_matches_weight_oracle")
    inter = Property("intertwiners_verified")
    cases = builtin_isotypic_cases()
    if sc.rep_H is not None:
        cases = [("scenario", sc.rep_H, sc.rep_O)] + cases
    for name, H, O in cases:
        taus = isotypic.tensor_invariants(H, O)
        P = isotypic.build_projector(taus, H, O)
        props.check(isotypic.checks_pass(P.checks), lambda: {"case": name, "checks": P.checks})
        if [n for n in H.lie.names] == ["u1", "u2", "u3"]:
            m = cg_multiplicity(H, O)
            oracle.check(m == P.multiplicity, lambda: {"case": name, "oracle": m, "computed": P.multiplicity})
        for tau in taus:
            th = isotypic.theta_map(tau, (H.dim, O.dim), O.hform())
            rep = isotypic.verify_intertwiner(th, H, O)
            inter.check(rep["passed"], lambda: {"case": name, "defects": rep["defects"]})
    return [props.record(), oracle.record(), inter.record()]


RUNNERS: Dict[str, Callable] = {
    "algebra": suite_algebra,
    "symplectic": suite_symplectic,
    "reduction": suite_reduction,
    "quantization": suite_quantization,
    "dual": suite_dual,
    "isotypic": suite_isotypic,
}


def run_suite(sc, suite: str, seed: int) -> Dict[str, List[dict]]:
    names = SUITES if suite == "all" else (suite,)
    for n in names:
        if n not in RUNNERS:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    out = {}
    for n in names:
        out[n] = RUNNERS[n](sc, random.Random(f"{seed}:{n}"))
    return out
