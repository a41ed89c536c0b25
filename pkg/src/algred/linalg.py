"""Exact matrices over Q(i)[hbar], with kernels taken over the fraction field Q(i)(hbar).

Matrices are plain lists of rows of :class:`Scalar`.  When every entry is
hbar-free the elimination runs over the field Q(i) directly; otherwise a
fraction-free Gauss-Jordan sweep keeps all entries polynomial in hbar.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .scalars import ONE, ZERO, Scalar, scalar_gcd

Matrix = List[List[Scalar]]
Vector = List[Scalar]


def as_matrix(rows) -> Matrix:
    return [[x if isinstance(x, Scalar) else Scalar.of(x) for x in row] for row in rows]


def zeros(n: int, m: int) -> Matrix:
    return [[ZERO] * m for _ in range(n)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def shape(M: Matrix) -> Tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise ValueError(f"shape mismatch {shape(A)} x {shape(B)}")
    out = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if not a:
                continue
            Bt = B[t]
            for j in range(m):
                if Bt[j]:
                    row[j] = row[j] + a * Bt[j]
    return out


def matvec(A: Matrix, v: Vector) -> Vector:
    return [sum((a * x for a, x in zip(row, v)), ZERO) for row in A]


def add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(A: Matrix, c: Scalar) -> Matrix:
    return [[c * a for a in row] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def conj(A: Matrix) -> Matrix:
    return [[a.conj() for a in row] for row in A]


def dagger(A: Matrix) -> Matrix:
    return transpose(conj(A))


def kron(A: Matrix, B: Matrix) -> Matrix:
    n, m = shape(A)
    p, q = shape(B)
    out = zeros(n * p, m * q)
    for i in range(n):
        for j in range(m):
            a = A[i][j]
            if not a:
                continue
            for k in range(p):
                for l in range(q):
                    out[i * p + k][j * q + l] = a * B[k][l]
    return out


def is_zero_matrix(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


def trace(A: Matrix) -> Scalar:
    return sum((A[i][i] for i in range(len(A))), ZERO)


def _all_constant(M: Matrix) -> bool:
    return all(x.is_constant() for row in M for x in row)


def rref(M: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns.

    Over Q(i) the pivots are 1.  With hbar-dependent entries every pivot
    equals a common polynomial D (fraction-free Gauss-Jordan) and the
    returned rows are not divided through.
    """
    A = [list(r) for r in M]
    n, m = shape(A)
    field = _all_constant(A)
    pivots: List[int] = []
    r = 0
    prev = ONE
    for c in range(m):
        if r == n:
            break
        sel = None
        for i in range(r, n):
            if A[i][c]:
                if sel is None or (A[i][c].is_unit() and not A[sel][c].is_unit()):
                    sel = i
                if A[i][c].is_unit():
                    break
        if sel is None:
            continue
        A[r], A[sel] = A[sel], A[r]
        piv = A[r][c]
        if field:
            inv = piv.inverse()
            A[r] = [x * inv for x in A[r]]
            for i in range(n):
                if i != r and A[i][c]:
                    f = A[i][c]
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        else:
            for i in range(n):
                if i == r:
                    continue
                a = A[i][c]
                A[i] = [(piv * x - a * y).exact_div(prev) for x, y in zip(A[i], A[r])]
            prev = piv
        pivots.append(c)
        r += 1
    return A, pivots


def _normalize(v: Vector, anchor: int) -> Vector:
    """Scale to primitive form with a monic entry at ``anchor``."""
    if all(x.is_constant() for x in v):
        inv = v[anchor].inverse()
        return [x * inv for x in v]
    g = ZERO
    for x in v:
        if x:
            g = scalar_gcd(g, x)
    v = [x.exact_div(g) for x in v]
    lead = v[anchor].leading()
    u = Scalar.of(lead[0], lead[1]).inverse()
    return [x * u for x in v]


def kernel_basis(M: Matrix, ncols: int | None = None) -> List[Vector]:
    """Basis of the right kernel over Q(i)(hbar); one vector per free column.

    Vector for free column j has a monic entry at j and nonzero entries
    only at j and at pivot columns, so the basis is canonical.
    """
    m = ncols if ncols is not None else shape(M)[1]
    if not M:
        return [[ONE if t == j else ZERO for t in range(m)] for j in range(m)]
    A, pivots = rref(M)
    D = A[len(pivots) - 1][pivots[-1]] if pivots else ONE
    free = [j for j in range(m) if j not in pivots]
    out = []
    for j in free:
        v = [ZERO] * m
        v[j] = D
        for row, pc in enumerate(pivots):
            v[pc] = -A[row][j]
        out.append(_normalize(v, j))
    return out


def row_basis(vectors: Sequence[Vector]) -> List[Vector]:
    """Canonical basis (reduced echelon rows) of the span of ``vectors``."""
    if not vectors:
        return []
    A, pivots = rref([list(v) for v in vectors])
    return [_normalize(A[r], pc) for r, pc in enumerate(pivots)]


def rank(M: Matrix) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def inverse(M: Matrix) -> Matrix:
    n, m = shape(M)
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    if not _all_constant(M):
        raise ValueError("inverse needs hbar-free entries")
    aug = [list(r) + idr for r, idr in zip(M, identity(n))]
    A, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in A]


def solve_in_span(columns: Sequence[Vector], target: Vector) -> Vector | None:
    """Coefficients x with sum x_k columns_k = target, or None (hbar-free columns)."""
    k = len(columns)
    n = len(target)
    aug = [[columns[c][r] for c in range(k)] + [target[r]] for r in range(n)]
    A, piv = rref(aug)
    if k in piv:
        return None
    D = A[len(piv) - 1][piv[-1]] if piv else ONE
    x = [ZERO] * k
    for row, pc in enumerate(piv):
        x[pc] = A[row][k].exact_div(D)
    return x


def leading_minors_positive(H: Matrix) -> bool:
    """Sylvester test for a Hermitian matrix (exact, hbar-free)."""
    n = len(H)
    for k in range(1, n + 1):
        sub_m = [row[:k] for row in H[:k]]
        d = determinant(sub_m)
        if not d.is_constant() or d.constant_term()[1] != 0 or d.constant_term()[0] <= 0:
            return False
    return True


def determinant(M: Matrix) -> Scalar:
    A = [list(r) for r in M]
    n = len(A)
    det = ONE
    for c in range(n):
        sel = next((i for i in range(c, n) if A[i][c]), None)
        if sel is None:
            return ZERO
        if sel != c:
            A[c], A[sel] = A[sel], A[c]
            det = -det
        piv = A[c][c]
        det = det * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            f = A[i][c] * inv
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return det
