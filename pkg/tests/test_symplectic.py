import pytest
from hypothesis import given, settings

from algred.parsing import parse_poly
from algred.poly import Poly
from algred.scalars import ONE, Scalar
from algred.symplectic import (PhaseSpace, PolyVectorField, SymplecticError, hamiltonian_vector_field,
                               lie_derivative, poisson_bracket, poisson_bracket_via_omega)
from strategies import polys

S1 = PhaseSpace.canonical([("p", "q")])
S2 = PhaseSpace.canonical([("p1", "q1"), ("p2", "q2")])


def P(text, S=S1):
    return parse_poly(text, S.coords)


def test_free_particle_field():
    X = hamiltonian_vector_field(P("p^2/2"), S1)
    assert X.components == (P("0"), P("p"))


def test_field_of_q_times_h():
    X = hamiltonian_vector_field(P("q*(1 + 2*p + p^3)"), S1)
    assert X.components == (-P("1 + 2*p + p^3"), P("q*(2 + 3*p^2)"))


def test_constant_gives_zero_field():
    assert hamiltonian_vector_field(P("7 - 2*i"), S1).is_zero()


def test_bracket_examples():
    assert poisson_bracket(P("p"), P("q"), S1) == P("-1")
    f = P("p^2*q + 3*q")
    assert poisson_bracket(f, f, S1).is_zero()
    assert poisson_bracket(P("p^2/2"), P("q"), S1) == P("-p")


def test_lie_derivative_examples():
    X = PolyVectorField(S1.coords, (P("0"), P("p")))
    assert lie_derivative(X, P("q")) == P("p")
    assert lie_derivative(X, P("p*q")) == P("p^2")
    assert lie_derivative(X, P("5")).is_zero()


def test_canonical_relations_two_pairs():
    c = S2.coords
    for a in ("p1", "p2"):
        for b in ("q1", "q2"):
            want = -ONE if a[1] == b[1] else Scalar.of(0)
            assert poisson_bracket(Poly.var(c, a), Poly.var(c, b), S2) == Poly.const(c, want)
    assert poisson_bracket(Poly.var(c, "p1"), Poly.var(c, "p2"), S2).is_zero()
    assert poisson_bracket(Poly.var(c, "q1"), Poly.var(c, "q2"), S2).is_zero()


def test_construction_errors():
    with pytest.raises(SymplecticError, match="antisymmetric"):
        PhaseSpace(("p", "q"), ((0, 1), (1, 0)))
    with pytest.raises(SymplecticError, match="degenerate"):
        PhaseSpace(("a", "b", "c", "d"), ((0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)))
    with pytest.raises(SymplecticError, match="even"):
        PhaseSpace(("x",), ((0,),))
    with pytest.raises(ValueError, match="mismatch"):
        poisson_bracket(P("p"), parse_poly("p1", S2.coords), S1)


def test_noncanonical_omega_brackets_match_inverse():
    S = PhaseSpace(("x", "y"), ((0, 2), (-2, 0)))
    x, y = Poly.var(S.coords, "x"), Poly.var(S.coords, "y")
    assert poisson_bracket(x, y, S) == Poly.const(S.coords, Scalar.of(-1) / 2)


four = polys(S2.coords, max_degree=3, max_terms=4)


@settings(max_examples=150, deadline=None)
@given(four, four, four)
def test_poisson_laws(f, g, h):
    br = lambda a, b: poisson_bracket(a, b, S2)
    assert br(f, g) == -br(g, f)
    assert br(f, g + h) == br(f, g) + br(f, h)
    assert br(f, g * h) == br(f, g) * h + g * br(f, h)
    assert (br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))).is_zero()


@settings(max_examples=100, deadline=None)
@given(four, four)
def test_two_routes_and_anti_homomorphism(f, g):
    assert poisson_bracket(f, g, S2) == poisson_bracket_via_omega(f, g, S2)
    Xf, Xg = hamiltonian_vector_field(f, S2), hamiltonian_vector_field(g, S2)
    assert hamiltonian_vector_field(poisson_bracket(f, g, S2), S2) == Xf.bracket(Xg).scale(-ONE)
    assert hamiltonian_vector_field(f + g, S2) == Xf + Xg
