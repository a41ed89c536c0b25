import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from algred import linalg
from algred.scalars import HBAR, I, ONE, ZERO, Scalar


def S(x, y=0):
    return Scalar.of(x, y)


def test_identity_has_trivial_kernel():
    assert linalg.kernel_basis(linalg.identity(2)) == []


def test_zero_matrix_kernel_is_everything():
    ker = linalg.kernel_basis(linalg.zeros(2, 3))
    assert ker == [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]


def test_gaussian_rank_one_kernel():
    M = [[ONE, I], [-I, ONE]]
    (v,) = linalg.kernel_basis(M)
    assert linalg.is_zero_matrix([[x] for x in linalg.matvec(M, v)])


def test_hbar_entries_use_fraction_free_elimination():
    M = [[HBAR, ONE], [HBAR * HBAR, HBAR]]
    (v,) = linalg.kernel_basis(M)
    assert all(x == ZERO for x in linalg.matvec(M, v))
    assert linalg.rank(M) == 1


def test_inverse_and_determinant():
    M = [[S(2), S(1)], [S(1), S(1)]]
    assert linalg.matmul(M, linalg.inverse(M)) == linalg.identity(2)
    assert linalg.determinant(M) == ONE
    with pytest.raises(ZeroDivisionError):
        linalg.inverse([[ONE, ONE], [ONE, ONE]])


def test_kernel_is_canonical_under_row_operations():
    rng = random.Random(7)
    M = [[S(rng.randint(-2, 2)) for _ in range(5)] for _ in range(3)]
    mixed = [[M[0][j] + M[1][j].__mul__(S(3)) for j in range(5)], M[1], M[2]]
    assert linalg.kernel_basis(M) == linalg.kernel_basis(mixed)


def test_solve_in_span():
    cols = [[ONE, ZERO], [ONE, ONE]]
    assert linalg.solve_in_span(cols, [S(3), S(2)]) == [S(1), S(2)]
    assert linalg.solve_in_span([[ONE, ZERO]], [ZERO, ONE]) is None


def test_leading_minors():
    assert linalg.leading_minors_positive([[S(2), I], [-I, S(1)]])
    assert not linalg.leading_minors_positive([[S(1), S(2)], [S(2), S(1)]])


entries = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@settings(deadline=None, max_examples=60)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_kernel_matches_sympy_nullity(n, m, data):
    raw = [[data.draw(entries) for _ in range(m)] for _ in range(n)]
    M = [[S(a, b) for a, b in row] for row in raw]
    ref = sympy.Matrix([[a + b * sympy.I for a, b in row] for row in raw])
    ker = linalg.kernel_basis(M)
    assert len(ker) == m - ref.rank()
    assert linalg.rank(M) == ref.rank()
    for v in ker:
        assert all(x == ZERO for x in linalg.matvec(M, v))
