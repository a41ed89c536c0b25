"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion."""

import random
import time
from contextlib import contextmanager

import pytest

from algred import verify
from algred.cli import cmd_kernel, cmd_quantize, cmd_reduce
from algred.dual import jet_pair, kernel_of_dual, pair_with_class
from algred.isotypic import (build_projector, direct_sum, spin_half, spin_one, su2, tensor_invariants,
                             tensor_product, trivial)
from algred.parsing import parse_poly
from algred.poly import Poly
from algred.quantization import (invariant_reduced_sections, prequant_operator, quantizable_invariant_classes,
                                 reduced_quantization_matrix, section_class)
from algred.reduction import (MomentumIdeal, check_equivariance, invariant_classes_up_to_degree,
                              normalizer_classes_up_to_degree, product_with_orbit, reduced_poisson_bracket)
from algred.scalars import Scalar
from algred.scenario import bundled, load_scenario
from algred.symplectic import poisson_bracket
from conftest import ACCEPTANCE_LINES
from oracles import character_multiplicity

SEED = 42


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(label):
        t0 = time.perf_counter()
        status, detail = "FAIL", ""
        try:
            yield lambda: time.perf_counter() - t0
            status = "PASS"
        except AssertionError as e:
            detail = " | " + (str(e).splitlines() or ["assertion failed"])[0][:160]
            raise
        finally:
            line = f"[{status}] {label} ({time.perf_counter() - t0:.3f} s){detail}"
            ACCEPTANCE_LINES.append(line)
            with capsys.disabled():
                print("\n" + line)
    return run


def free():
    return load_scenario(bundled("free_particle"))


def test_criterion_1_free_particle_reduction(criterion):
    with criterion("1 free-particle reduction, d=3") as elapsed:
        sc = free()
        rep, code = cmd_reduce(sc, 3)
        r = rep["result"]
        assert code == 0
        assert r["invariant_basis"] == ["1", "p", "p*q", "p*q^2"], r["invariant_basis"]
        assert r["quotient_identification"] == "h1(q) + p*h2(q)"
        assert r["quotient_monomials"] == ["1", "q", "p", "q^2", "p*q", "q^3", "p*q^2"]
        assert elapsed() < 1.0, f"runtime {elapsed():.3f} s"


def test_criterion_2_reduced_quantization_matrix(criterion):
    with criterion("2 reduced quantization matrix [[a,0],[b,a+i*hbar*c]] with sign note"):
        sc = free()
        rep, code = cmd_quantize(sc, 3, None)
        r = rep["result"]
        assert r["symbolic_class"] == "a + b*p + c*p*q"
        assert r["section_basis"] == ["1", "p"]
        assert r["symbolic_matrix"] == [["a", "0"], ["b", "a + i*hbar*c"]], r["symbolic_matrix"]
        refs = [c.get("reference_form") for c in rep["conventions"]]
        assert r"$\{ad+(bd+ae-i\hbar ce)p\}\sigma _{1}$" in refs
        # multiplication operators on polarized sections: h1(p) and J itself
        F, B = sc.polarization, sc.chart
        h1 = parse_poly("2 - p/3 + 5*p^4", sc.space.coords)
        op = prequant_operator(h1, B).restrict(F)
        assert op.is_multiplication() and op.mult == h1
        opJ = prequant_operator(sc.momentum.components[0], B).restrict(F)
        assert opJ.is_multiplication() and opJ.mult == sc.momentum.components[0]
        assert r["momentum_operators"] == {"t": "(1/2*p^2)"}


def test_criterion_3_dual_kernel_and_pairing(criterion):
    with criterion("3 dual kernel {delta, delta'}, pairing [[1,0],[0,-1]], dual action") as elapsed:
        sc = free()
        rep, code = cmd_kernel(sc, 3)
        r = rep["result"]
        assert r["kernel"] == ["delta(p)", "delta'(p)"]
        assert r["pairing_matrix"] == [["1", "0"], ["0", "-1"]]
        v = ("p",)
        for text in ("1", "p", "2+3*p"):
            k = parse_poly(text, v)
            k0 = k.value_at({"p": Scalar.of(0)})
            dk0 = k.derivative("p").value_at({"p": Scalar.of(0)})
            # (A k(0) - B k'(0)) delta + B k(0) delta' in the basis (delta, delta')
            want = [[str(k0), str(-dk0)], ["0", str(k0)]]
            assert r["actions"][str(k)]["matrix"] == want, (text, r["actions"][str(k)])
        assert elapsed() < 1.0, f"runtime {elapsed():.3f} s"


def _records(sc, name, suite):
    rng = random.Random(f"{SEED}:{name}")
    return {p["name"]: p for p in suite(sc, rng)}


def test_criterion_4a_poisson_law_suite(criterion):
    with criterion("4a 500-case antisymmetry/Leibniz/Jacobi suite") as elapsed:
        recs = _records(free(), "symplectic", verify.suite_symplectic)
        laws = recs["antisymmetry_bilinearity_leibniz_jacobi"]
        assert laws["cases"] == 500 and laws["failed"] == 0, laws
        assert recs["anti_homomorphism"]["failed"] == 0
        assert elapsed() < 30.0, f"runtime {elapsed():.3f} s"


@pytest.mark.xfail(strict=True, reason="[P_f,P_g] = +i*hbar*P_{f,g} under {p,q} = -1 and d(alpha) = -omega; "
                                       "the -i*hbar form has a nonzero defect")
def test_criterion_4b_commutator_minus_i_hbar(criterion):
    with criterion("4b 200-case commutator zero-defect with [P_f,P_g] = -i*hbar*P_{f,g}") as elapsed:
        recs = _records(free(), "quantization", verify.suite_quantization)
        stated = recs["commutator_zero_defect_minus_i_hbar"]
        assert elapsed() < 30.0, f"runtime {elapsed():.3f} s"
        assert stated["cases"] == 200
        assert stated["failed"] == 0, f"{stated['failed']}/200 pairs have a nonzero defect"


def test_criterion_4b_holding_identity(criterion):
    with criterion("4b' 200-case commutator zero-defect with [P_f,P_g] = +i*hbar*P_{f,g}") as elapsed:
        recs = _records(free(), "quantization", verify.suite_quantization)
        holding = recs["commutator_identity_plus_i_hbar"]
        assert holding["cases"] == 200 and holding["failed"] == 0, holding
        assert elapsed() < 30.0, f"runtime {elapsed():.3f} s"


def test_criterion_5_sl2_equivariance(criterion):
    with criterion("5 sl2 momentum on R^4 equivariance, 3 pairs"):
        sc = load_scenario(bundled("sl2_plane"))
        report = check_equivariance(sc.momentum)
        assert report["passed"] and report["pairs_checked"] == 3, report
        S = sc.space
        J = dict(zip(sc.lie.names, sc.momentum.components))
        assert poisson_bracket(J["h"], J["e"], S) == J["e"].scale(Scalar.of(2))
        assert poisson_bracket(J["h"], J["f"], S) == J["f"].scale(Scalar.of(-2))
        assert poisson_bracket(J["e"], J["f"], S) == J["h"]


def test_criterion_6_well_definedness(criterion):
    with criterion("6 100 ideal-shift perturbations leave brackets, matrices, pairings unchanged"):
        sc = free()
        J, F, B = sc.momentum, sc.polarization, sc.chart
        I = MomentumIdeal(J, sc.mu)
        gen = I.generators[0]
        vars = sc.space.coords
        inv = invariant_classes_up_to_degree(J, I, 3)
        quant = [c for _, c in quantizable_invariant_classes(J, I, F, 2)]
        basis = invariant_reduced_sections(J, I, F, B, 3)
        Js = [gen.embed(F.transverse)]
        kernel = kernel_of_dual(Js, [[0]], 3, F.transverse)
        rng = random.Random(SEED)
        changed = 0
        for _ in range(100):
            h = Poly(vars, {(rng.randint(0, 2), rng.randint(0, 2)): Scalar.of(rng.randint(-5, 5), rng.randint(-2, 2))
                            for _ in range(3)})
            hp = Poly(vars, {(rng.randint(0, 3), 0): Scalar.of(rng.randint(-5, 5)) for _ in range(2)})
            c1, c2 = rng.choice(inv), rng.choice(inv)
            if I.nf(poisson_bracket(c1.rep + h * gen, c2.rep, sc.space)) != reduced_poisson_bracket(c1, c2, J).rep:
                changed += 1
            c = rng.choice(quant)
            base = reduced_quantization_matrix(c, basis, J, F, B)
            moved = [section_class(s.psi + hp * gen, B, I) for s in basis]
            if reduced_quantization_matrix(c, moved, J, F, B, rep=c.rep + hp * gen) != base:
                changed += 1
            s = rng.choice(basis)
            for T in kernel:
                shifted = (s.psi + hp * gen).embed(F.transverse)
                if jet_pair(T, shifted) != pair_with_class(T, s, Js):
                    changed += 1
        assert changed == 0, f"{changed} perturbations changed a result"


CASES = [("spin-1/2 + spin-1/2 | spin-1/2", 2), ("spin-1 | spin-1/2", 0), ("spin-1/2 x spin-1/2 | trivial", 1)]


def test_criterion_7_isotypic_projector(criterion):
    with criterion("7 isotypic multiplicities (2, 0, 1) with exact projector laws") as elapsed:
        L = su2()
        h, one, tr = spin_half(L), spin_one(L), trivial(L)
        pairs = [(direct_sum(h, h), h), (one, h), (tensor_product(h, h), tr)]
        got = []
        for (label, want), (H, O) in zip(CASES, pairs):
            oracle = character_multiplicity(H, O)
            P = build_projector(tensor_invariants(H, O), H, O)
            ch = P.checks
            assert oracle == want, (label, oracle)
            assert P.multiplicity == oracle, (label, P.multiplicity)
            assert ch["idempotent"] and ch["commutes_with_generators"] and ch["self_adjoint"], (label, ch)
            assert ch["float_self_adjoint_defect"] <= 1e-10, (label, ch)
            got.append(P.multiplicity)
        assert got == [2, 0, 1]
        assert elapsed() < 5.0, f"runtime {elapsed():.3f} s"


def test_criterion_8_shifted_orbit_consistency(criterion):
    with criterion("8 shifted orbit mu=1/2: invariant, normalizer, product bases agree for d<=3"):
        sc = load_scenario(bundled("shifted_orbit"))
        J = sc.momentum
        I = MomentumIdeal(J, sc.mu)
        prod = product_with_orbit(J, sc.orbit)
        Ip = MomentumIdeal(prod)
        for d in range(4):
            a = [str(c.rep) for c in invariant_classes_up_to_degree(J, I, d)]
            b = [str(c.rep) for c in normalizer_classes_up_to_degree(I, d)]
            c = [str(x.rep) for x in invariant_classes_up_to_degree(prod, Ip, d)]
            assert a == b == c, (d, a, b, c)
            assert a == (["1"] if d == 0 else ["1", "p"]), a
