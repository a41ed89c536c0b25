"""Command line entry point: ``algred <command> --scenario PATH``.

Exit codes: 0 success, 2 validation failure, 3 property failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Tuple

from . import dual, isotypic, linalg
from .groebner import GroebnerBasis
from .parsing import ExpressionError, parse_poly
from .poly import Poly
from .quantization import (QuantizationError, invariant_reduced_sections, is_quantizable,
                           prequant_operator, quantizable_invariant_classes,
                           reduced_quantization_matrix, sign_note, symbolic_matrix)
from .reduction import (MomentumIdeal, ReductionError, bracket_table, check_equivariance, class_of,
                        invariant_classes_up_to_degree, is_invariant_class,
                        normalizer_classes_up_to_degree, product_with_orbit)
from .scenario import Scenario, ScenarioError, load_scenario, resolve_supports
from .verify import SUITES, shifted_orbit_comparison, run_suite

EXIT_OK, EXIT_INVALID, EXIT_PROPERTY = 0, 2, 3


class ValidationError(ValueError):
    pass


def _mono(vars, m) -> str:
    return str(Poly.monomial(vars, m))


def _term(sym: str, p: Poly) -> str:
    if p == Poly.const(p.vars, 1):
        return sym
    return f"{sym}*{p}" if len(p.terms) == 1 and not str(p).startswith("-") else f"{sym}*({p})"


def _mat(M) -> List[List[str]]:
    return [[str(x) for x in row] for row in M]


def _base(command: str, sc: Scenario) -> dict:
    return {"command": command, "scenario": {"name": sc.name, "digest": sc.digest},
            "conventions": [], "checks": {}}


def quotient_identification(B: GroebnerBasis) -> Optional[str]:
    """``h1(free) + m2*h2(free) + ...`` when the standard monomials split as a product."""
    vars = B.vars
    bounded = set()
    for lm in B.leads:
        used = [i for i, e in enumerate(lm) if e]
        if len(used) == 1:
            bounded.add(used[0])
    if any(any(e and i not in bounded for i, e in enumerate(lm)) for lm in B.leads):
        return None
    free = [v for i, v in enumerate(vars) if i not in bounded]
    if not bounded:
        return "h1(" + ",".join(free) + ")"
    maxdeg = sum(max(lm[i] for lm in B.leads if lm[i]) for i in bounded)
    patterns = [m for m in B.standard_monomials(maxdeg) if all(m[i] == 0 for i in range(len(vars))
                                                                 if i not in bounded)]
    parts = []
    for k, m in enumerate(patterns, start=1):
        fn = f"h{k}(" + ",".join(free) + ")" if free else f"c{k}"
        mono = _mono(vars, m)
        parts.append(fn if mono == "1" else f"{mono}*{fn}")
    return " + ".join(parts)


def _need_momentum(sc: Scenario):
    if sc.momentum is None:
        raise ValidationError("scenario declares no momentum map")


def cmd_reduce(sc: Scenario, degree: int) -> Tuple[dict, int]:
    _need_momentum(sc)
    J = sc.momentum
    I = MomentumIdeal(J, sc.mu)
    rep = _base("reduce", sc)
    inv = invariant_classes_up_to_degree(J, I, degree)
    eq = check_equivariance(J)
    result = {
        "degree": degree,
        "lie_basis": list(sc.lie.names),
        "momentum": [str(c) for c in J.components],
        "mu": [str(m) for m in sc.mu],
        "ideal_basis": [str(g) for g in I.basis.basis],
        "quotient_monomials": [_mono(J.vars, m) for m in I.quotient_monomials(degree)],
        "quotient_identification": quotient_identification(I.basis),
        "invariant_basis": [str(c.rep) for c in inv],
        "normalizer_basis": [str(c.rep) for c in normalizer_classes_up_to_degree(I, degree)],
        "bracket_table": bracket_table(inv, J),
    }
    if sc.orbit is not None:
        prod = product_with_orbit(J, sc.orbit)
        Ip = MomentumIdeal(prod)
        result["product"] = {
            "coordinates": list(prod.space.coords),
            "momentum": [str(c) for c in prod.components],
            "ideal_basis": [str(g) for g in Ip.basis.basis],
            "invariant_basis": [str(c.rep) for c in invariant_classes_up_to_degree(prod, Ip, degree)],
        }
        cmp = shifted_orbit_comparison(sc, degree)
        if cmp is not None:
            result["shifted_orbit_consistency"] = cmp
            rep["checks"]["shifted_orbit_consistency"] = cmp["coincide"]
    rep["result"] = result
    rep["checks"]["equivariance"] = eq
    ok = eq["passed"] and rep["checks"].get("shifted_orbit_consistency", True)
    return rep, EXIT_OK if ok else EXIT_PROPERTY


def _need_quant(sc: Scenario):
    _need_momentum(sc)
    if sc.chart is None or sc.polarization is None:
        raise ValidationError("quantization needs a [chart] and a [polarization] section")


def _symbols(n: int) -> List[str]:
    letters = [c for c in "abcdefghjklmnorstuvwxyz"]
    return [letters[k] if k < len(letters) else f"a{k}" for k in range(n)]


def cmd_quantize(sc: Scenario, degree: int, cls: Optional[str]) -> Tuple[dict, int]:
    _need_quant(sc)
    J, B, F = sc.momentum, sc.chart, sc.polarization
    I = MomentumIdeal(J, sc.mu)
    rep = _base("quantize", sc)
    basis = invariant_reduced_sections(J, I, F, B, degree)
    qcls = quantizable_invariant_classes(J, I, F, degree)
    syms = _symbols(len(qcls))
    named = [(s, r, c) for s, (r, c) in zip(syms, qcls)]
    result = {
        "degree": degree,
        "polarization": list(F.leaf),
        "section_label": B.label,
        "section_basis": [str(c.psi) for c in basis],
        "quantizable_classes": [{"symbol": s, "representative": str(r), "class": str(c.rep),
                                 "operator": str(prequant_operator(r, B).restrict(F))}
                                for s, r, c in named],
        "symbolic_class": " + ".join(_term(s, c.rep) for s, _, c in named),
        "symbolic_matrix": _mat(symbolic_matrix(named, basis, J, F, B)) if basis and named else [],
        "momentum_operators": {n: str(prequant_operator(c, B).restrict(F))
                               for n, c in zip(sc.lie.names, J.components)},
    }
    if any(not prequant_operator(r, B).restrict(F).is_multiplication() for _, r, _ in named):
        rep["conventions"].append(sign_note())
    if cls is not None:
        try:
            f = parse_poly(cls, sc.space.coords)
        except ExpressionError as x:
            raise ValidationError(f"--class: {x}") from None
        c = class_of(f, I)
        if not is_invariant_class(c, J):
            raise ValidationError(f"class [{c.rep}] rejected: not invariant (X_J f is not in the "
                                  f"momentum ideal)")
        use = f if is_quantizable(f, F, sc.space) else c.rep
        M = reduced_quantization_matrix(c, basis, J, F, B, rep=use)
        result["class"] = {"input": str(f), "class": str(c.rep), "representative": str(use),
                           "matrix": _mat(M)}
    rep["result"] = result
    return rep, EXIT_OK


def cmd_kernel(sc: Scenario, degree: int) -> Tuple[dict, int]:
    _need_quant(sc)
    J, B, F = sc.momentum, sc.chart, sc.polarization
    I = MomentumIdeal(J, sc.mu)
    for g in I.generators:
        if not F.is_polarized(g):
            raise ValidationError(
                f"momentum component {g} is not constant along the polarization leaves "
                f"(J must be constant along D for the dual kernel)")
    trans = F.transverse
    Js = [g.embed(trans) for g in I.generators]
    supports = resolve_supports(sc, Js)
    kernel = dual.kernel_of_dual(Js, supports, sc.max_order, trans)
    classes = invariant_reduced_sections(J, I, F, B, degree)
    M = dual.pairing_matrix(kernel, classes, Js)
    rep = _base("kernel", sc)
    actions = {}
    for k in sc.actions:
        kk = k.embed(trans) if F.is_polarized(k) else None
        if kk is None:
            raise ValidationError(f"dual action of {k}: multiplier must depend on transverse "
                                  f"coordinates only")
        actions[str(kk)] = {"images": [str(dual.multiply(kk, T)) for T in kernel],
                            "matrix": _mat(dual.action_matrix(kk, kernel))}
    square = len(kernel) == len(classes)
    nondeg = square and (not M or linalg.rank(M) == len(M))
    rep["result"] = {
        "transverse": list(trans),
        "supports": [[str(x) for x in pt] for pt in supports],
        "max_order": sc.max_order,
        "kernel": [str(T) for T in kernel],
        "kernel_terms": [T.term_records() for T in kernel],
        "section_basis": [str(c.psi) for c in classes],
        "pairing_matrix": _mat(M),
        "actions": actions,
    }
    rep["checks"]["pairing_nondegenerate"] = nondeg
    rep["conventions"].append({"note": "compact-closure hypothesis on the zero level set is not "
                                       "checked at the polynomial level"})
    return rep, EXIT_OK if nondeg else EXIT_PROPERTY


def cmd_isotypic(sc: Scenario) -> Tuple[dict, int]:
    if sc.rep_H is None:
        raise ValidationError("isotypic mode needs [rep H] and [rep HO] sections")
    H, O = sc.rep_H, sc.rep_O
    taus = isotypic.tensor_invariants(H, O)
    try:
        P = isotypic.build_projector(taus, H, O)
    except isotypic.IsotypicError as x:
        raise ValidationError(str(x)) from None
    rep = _base("isotypic", sc)
    inter = []
    for tau in taus:
        th = isotypic.theta_map(tau, (H.dim, O.dim), O.hform())
        inter.append(isotypic.verify_intertwiner(th, H, O))
    rep["result"] = {
        "dim_H": H.dim,
        "dim_HO": O.dim,
        "invariant_tensors": [[str(x) for x in t] for t in taus],
        "multiplicity": P.multiplicity,
        "projector": _mat(P.matrix),
        "lambdas": [str(l) for l in P.lambdas],
        "normalization_backend": ["exact" if t.exact else "float" for t in P.normalized],
        "intertwiners": inter,
    }
    rep["checks"] = dict(P.checks)
    rep["conventions"].append({"note": "the Lagrangian-subspace hypothesis for the orbit is a "
                                       "user assertion and is not checked"})
    ok = isotypic.checks_pass(P.checks) and all(i["passed"] for i in inter)
    return rep, EXIT_OK if ok else EXIT_PROPERTY


def cmd_verify(sc: Scenario, suite: str, seed: int) -> Tuple[dict, int]:
    if suite not in SUITES + ("all",):
        raise ValidationError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    res = run_suite(sc, suite, seed)
    rep = _base("verify", sc)
    rep["result"] = {"suite": suite, "seed": seed, "properties": res}
    failed = [f"{s}.{p['name']}" for s, ps in res.items() for p in ps if not p["passed"]]
    rep["checks"] = {"failed": failed, "passed": not failed}
    if any(n.endswith("commutator_zero_defect_minus_i_hbar") for n in failed):
        rep["conventions"].append({"note": "with {p,q} = -1 and the chart d(alpha) = -omega the "
                                           "commutator identity holds as [P_f,P_g] = +i*hbar*P_{f,g}; "
                                           "the -i*hbar form is reported as failing"})
    return rep, EXIT_OK if not failed else EXIT_PROPERTY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="algred", description="Algebraic reduction and quantization workbench")
    ap.add_argument("command", choices=["reduce", "quantize", "kernel", "isotypic", "verify"])
    ap.add_argument("--scenario", required=True, help="scenario file")
    ap.add_argument("--degree", type=int, default=None, help="truncation degree (default from scenario)")
    ap.add_argument("--class", dest="cls", default=None, help="class expression for quantize")
    ap.add_argument("--seed", type=int, default=None, help="RNG seed for verify")
    ap.add_argument("--suite", default="all", help="property suite for verify")
    ap.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    return ap


def run(argv=None) -> Tuple[Optional[dict], int]:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
        degree = sc.degree if args.degree is None else args.degree
        if degree < 0:
            raise ValidationError("--degree must be nonnegative")
        seed = sc.seed if args.seed is None else args.seed
        if args.command == "reduce":
            rep, code = cmd_reduce(sc, degree)
        elif args.command == "quantize":
            rep, code = cmd_quantize(sc, degree, args.cls)
        elif args.command == "kernel":
            rep, code = cmd_kernel(sc, degree)
        elif args.command == "isotypic":
            rep, code = cmd_isotypic(sc)
        else:
            rep, code = cmd_verify(sc, args.suite, seed)
    except (ScenarioError, ValidationError, ReductionError, QuantizationError,
            dual.DualError, isotypic.IsotypicError) as x:
        print(f"algred: error: {x}", file=sys.stderr)
        return None, EXIT_INVALID
    text = json.dumps(rep, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return rep, code


def main(argv=None) -> int:
    return run(argv)[1]


if __name__ == "__main__":
    sys.exit(main())
