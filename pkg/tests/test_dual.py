import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algred.dual import (DualError, JetDistribution, action_matrix, detect_supports, in_kernel, jet_pair,
                         kernel_of_dual, multiply, pair_with_class, pairing_matrix)
from algred.parsing import parse_poly
from algred.quantization import invariant_reduced_sections, section_class
from algred.scalars import ONE, ZERO, Scalar
from models import P, free_particle
from strategies import polys

V = ("p",)


def L(text):
    return parse_poly(text, V)


def d(order=0, point=0, c=1):
    return JetDistribution.delta(V, [point], [order], Scalar.of(c))


def test_pairing_examples():
    A, Bc, dd, e = 3, 5, 7, 11
    T = d(0, c=A) + d(1, c=Bc)
    assert jet_pair(T, L(f"{dd} + {e}*p")) == Scalar.of(A * dd - Bc * e)
    assert jet_pair(JetDistribution.delta(V, [Scalar.of(2)]), L("1")) == ONE
    assert jet_pair(d(2), L("p^2")) == Scalar.of(2)


def test_pairing_rejects_leaf_dependence():
    with pytest.raises(DualError, match="leaf"):
        jet_pair(d(0), P("q"))


def test_multiply_examples():
    A, Bc = Scalar.of(2), Scalar.of(-3)
    T = d(0).scale(A) + d(1).scale(Bc)
    k = L("4 - 5*p + p^2")
    want = d(0).scale(A * 4 - Bc * -5) + d(1).scale(Bc * 4)
    assert multiply(k, T) == want
    assert multiply(L("1"), T) == T
    assert multiply(L("p^2"), d(2)) == d(0, c=2)


def test_kernel_examples():
    assert [str(T) for T in kernel_of_dual([L("p^2/2")], [[0]], 3)] == ["delta(p)", "delta'(p)"]
    assert [str(T) for T in kernel_of_dual([L("p")], [[0]], 2)] == ["delta(p)"]
    assert [str(T) for T in kernel_of_dual([L("p^2/2")], [[0]], 0)] == ["delta(p)"]


def test_kernel_support_must_be_a_zero():
    with pytest.raises(DualError, match="not a zero"):
        kernel_of_dual([L("p^2/2")], [[1]], 2)


def test_pair_with_class():
    J, I, B, F = free_particle()
    Js = [L("p^2/2")]
    ker = kernel_of_dual(Js, [[0]], 3)
    basis = invariant_reduced_sections(J, I, F, B, 3)
    assert pairing_matrix(ker, basis, Js) == [[ONE, ZERO], [ZERO, -ONE]]
    assert pair_with_class(ker[0], section_class(P("0"), B, I), Js) == ZERO
    assert pair_with_class(ker[1], section_class(P("p + 5*p^2"), B, I), Js) == -ONE
    with pytest.raises(DualError, match="not in the kernel"):
        pair_with_class(d(2), basis[0], Js)


def test_action_matrices():
    ker = kernel_of_dual([L("p^2/2")], [[0]], 3)
    assert action_matrix(L("1"), ker) == [[ONE, ZERO], [ZERO, ONE]]
    assert action_matrix(L("p"), ker) == [[ZERO, -ONE], [ZERO, ZERO]]
    assert action_matrix(L("2 + 3*p"), ker) == [[Scalar.of(2), Scalar.of(-3)], [ZERO, Scalar.of(2)]]


def test_printing_shifted_points():
    T = JetDistribution.delta(V, [Scalar.of(-1)]) + JetDistribution.delta(V, [Scalar.of(1)], [1])
    assert str(T) == "delta(p + 1) + delta'(p - 1)"
    assert str(d(0, c=-9) + d(1, c=10)) == "-9*delta(p) + 10*delta'(p)"


def test_detect_supports():
    assert detect_supports([L("p^2/2")], V) == [(ZERO,)]
    half = Scalar.of(1) / 2
    assert detect_supports([L("p^2/2 - 1/2")], V) == [(-ONE,), (ONE,)]
    assert detect_supports([L("p^3 - p/4")], V) == [(-half,), (ZERO,), (half,)]
    assert detect_supports([L("p^2 + 1")], V) == []
    with pytest.raises(DualError, match="positive-dimensional"):
        detect_supports([L("0")], V)
    with pytest.raises(DualError):
        detect_supports([parse_poly("x*y", ("x", "y"))], ("x", "y"))


@pytest.mark.parametrize("r", range(1, 5))
@pytest.mark.parametrize("m", range(0, 5))
def test_kernel_dimension_of_power(r, m):
    ker = kernel_of_dual([L(f"p^{r}")], [[0]], m)
    assert len(ker) == min(m + 1, r)
    assert all(in_kernel(T, [L(f"p^{r}")]) for T in ker)


@st.composite
def jets(draw):
    T = JetDistribution(V, {})
    for _ in range(draw(st.integers(1, 3))):
        T = T + JetDistribution.delta(V, [draw(st.integers(-2, 2))], [draw(st.integers(0, 3))],
                                      Scalar.of(draw(st.integers(-5, 5)), draw(st.integers(-2, 2))))
    return T


@settings(max_examples=100, deadline=None)
@given(polys(V), jets(), polys(V))
def test_multiply_is_adjoint(k, T, psi):
    assert jet_pair(multiply(k, T), psi) == jet_pair(T, k * psi)


def test_pairing_representative_independence():
    rng = random.Random(9)
    Js = [L("p^2/2")]
    ker = kernel_of_dual(Js, [[0]], 3)
    for _ in range(50):
        psi = L(f"{rng.randint(-5, 5)} + {rng.randint(-5, 5)}*p")
        h = L(f"{rng.randint(-5, 5)} + {rng.randint(-5, 5)}*p + {rng.randint(-5, 5)}*p^3")
        for T in ker:
            assert jet_pair(T, psi + h * Js[0]) == jet_pair(T, psi)
