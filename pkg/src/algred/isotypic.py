"""Invariant tensors, intertwiners, Schur normalization and isotypic projectors.

Representations are given infinitesimally by generator matrices.  The map
built from an invariant tensor ``tau`` in ``H (x) conj(H_O)`` is
``Theta = T K`` where ``T`` is ``tau`` reshaped to ``dim H x dim H_O`` and
``K`` is the Hermitian form of ``H_O``.  It intertwines when the generators
of ``H_O`` are anti-Hermitian for ``K``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence

import numpy as np

from . import linalg
from .linalg import Matrix
from .reduction import LieAlgebraData
from .scalars import ZERO, Scalar

FLOAT_TOL = 1e-10


class IsotypicError(ValueError):
    pass


def _exact(M) -> Matrix:
    return linalg.as_matrix(M)


def _to_numpy(M: Matrix) -> np.ndarray:
    return np.array([[x.to_complex() for x in row] for row in M], dtype=complex)


@dataclass(frozen=True)
class RepData:
    lie: LieAlgebraData
    mats: tuple
    form: Optional[tuple] = None
    unitary: bool = False
    irreducible: bool = False
    name: str = ""

    def __post_init__(self):
        mats = tuple(tuple(tuple(r) for r in _exact(m)) for m in self.mats)
        object.__setattr__(self, "mats", mats)
        k = self.lie.dim
        if len(mats) != k:
            raise IsotypicError(f"representation {self.name} needs {k} generator matrices, got {len(mats)}")
        n = self.dim
        for m in mats:
            if len(m) != n or any(len(r) != n for r in m):
                raise IsotypicError(f"representation {self.name}: generator matrices must be {n}x{n}")
            if any(not x.is_constant() for r in m for x in r):
                raise IsotypicError(f"representation {self.name}: generator entries must be hbar-free")
        c = self.lie.structure
        for j in range(k):
            for l in range(j + 1, k):
                lhs = linalg.sub(linalg.matmul(self.mat(j), self.mat(l)),
                                 linalg.matmul(self.mat(l), self.mat(j)))
                rhs = linalg.zeros(n, n)
                for m in range(k):
                    if c[j][l][m]:
                        rhs = linalg.add(rhs, linalg.scale(self.mat(m), c[j][l][m]))
                if linalg.sub(lhs, rhs) != linalg.zeros(n, n):
                    raise IsotypicError(
                        f"representation {self.name} violates the bracket relation "
                        f"[rho({self.lie.names[j]}),rho({self.lie.names[l]})] = rho([..])")
        if self.form is not None:
            H = _exact(self.form)
            object.__setattr__(self, "form", tuple(tuple(r) for r in H))
            if len(H) != n or any(len(r) != n for r in H):
                raise IsotypicError(f"representation {self.name}: form must be {n}x{n}")
            if H != linalg.dagger(H):
                raise IsotypicError(f"representation {self.name}: form is not Hermitian")
            if not linalg.leading_minors_positive(H):
                raise IsotypicError(f"representation {self.name}: form is not positive definite")
        if self.unitary:
            H = self.hform()
            for j in range(k):
                A = self.mat(j)
                if not linalg.is_zero_matrix(linalg.add(linalg.matmul(linalg.dagger(A), H),
                                                        linalg.matmul(H, A))):
                    raise IsotypicError(
                        f"representation {self.name} is not unitary for its form: "
                        f"rho({self.lie.names[j]})*H + H rho({self.lie.names[j]}) != 0")

    @property
    def dim(self) -> int:
        return len(self.mats[0]) if self.mats else 0

    def mat(self, j: int) -> Matrix:
        return [list(r) for r in self.mats[j]]

    def hform(self) -> Matrix:
        return [list(r) for r in self.form] if self.form is not None else linalg.identity(self.dim)

    def is_invariant_form(self) -> bool:
        H = self.hform()
        return all(linalg.is_zero_matrix(linalg.add(linalg.matmul(linalg.dagger(self.mat(j)), H),
                                                     linalg.matmul(H, self.mat(j))))
                   for j in range(self.lie.dim))


def direct_sum(a: RepData, b: RepData, name: str = "") -> RepData:
    n, m = a.dim, b.dim
    mats = []
    for j in range(a.lie.dim):
        M = linalg.zeros(n + m, n + m)
        for r in range(n):
            M[r][:n] = a.mat(j)[r]
        for r in range(m):
            M[n + r][n:] = b.mat(j)[r]
        mats.append(M)
    H = linalg.zeros(n + m, n + m)
    for r in range(n):
        H[r][:n] = a.hform()[r]
    for r in range(m):
        H[n + r][n:] = b.hform()[r]
    return RepData(a.lie, tuple(mats), tuple(map(tuple, H)), a.unitary and b.unitary, False, name)


def tensor_product(a: RepData, b: RepData, name: str = "") -> RepData:
    Ia, Ib = linalg.identity(a.dim), linalg.identity(b.dim)
    mats = [linalg.add(linalg.kron(a.mat(j), Ib), linalg.kron(Ia, b.mat(j))) for j in range(a.lie.dim)]
    H = linalg.kron(a.hform(), b.hform())
    return RepData(a.lie, tuple(mats), tuple(map(tuple, H)), a.unitary and b.unitary, False, name)


def tensor_invariants(rep: RepData, rep_O: RepData) -> List[List[Scalar]]:
    """Kernel basis of ``rho(xi) (x) I + I (x) conj(rho_O(xi))`` over all generators."""
    if rep.lie != rep_O.lie:
        raise IsotypicError("representations belong to different Lie algebra data")
    n, m = rep.dim, rep_O.dim
    rows = []
    for j in range(rep.lie.dim):
        A = linalg.add(linalg.kron(rep.mat(j), linalg.identity(m)),
                       linalg.kron(linalg.identity(n), linalg.conj(rep_O.mat(j))))
        rows.extend(A)
    return linalg.kernel_basis(rows, ncols=n * m)


@dataclass(frozen=True)
class IntertwinerMap:
    """Linear map H_O -> H; ``matrix`` is exact (lists of Scalar) or a numpy array."""

    matrix: object
    lam: object = None
    exact: bool = True

    def as_numpy(self) -> np.ndarray:
        return _to_numpy(self.matrix) if self.exact else np.asarray(self.matrix)


def theta_map(tau: Sequence[Scalar], dims, form_O: Matrix | None = None) -> IntertwinerMap:
    n, m = dims
    if len(tau) != n * m:
        raise IsotypicError(f"tensor of length {len(tau)} does not match dimensions {n}x{m}")
    T = [list(tau[a * m:(a + 1) * m]) for a in range(n)]
    K = _exact(form_O) if form_O is not None else linalg.identity(m)
    return IntertwinerMap(linalg.matmul(T, K))


def verify_intertwiner(theta: IntertwinerMap, rep: RepData, rep_O: RepData) -> dict:
    defects = []
    if theta.exact:
        for j in range(rep.lie.dim):
            D = linalg.sub(linalg.matmul(rep.mat(j), theta.matrix),
                           linalg.matmul(theta.matrix, rep_O.mat(j)))
            defects.append(0.0 if linalg.is_zero_matrix(D) else
                           max(abs(x.to_complex()) for r in D for x in r))
        passed = all(d == 0 for d in defects)
    else:
        Th = theta.as_numpy()
        for j in range(rep.lie.dim):
            D = _to_numpy(rep.mat(j)) @ Th - Th @ _to_numpy(rep_O.mat(j))
            defects.append(float(np.max(np.abs(D))) if D.size else 0.0)
        passed = all(d <= FLOAT_TOL for d in defects)
    return {"passed": passed, "max_defect": max(defects) if defects else 0.0,
            "defects": {rep.lie.names[j]: d for j, d in enumerate(defects)}}


def adjoint(theta: Matrix, form: Matrix, form_O: Matrix) -> Matrix:
    """``Theta* = K^-1 Theta^dagger H`` for ``Theta: (H_O, K) -> (H, H)``."""
    return linalg.matmul(linalg.matmul(linalg.inverse(form_O), linalg.dagger(theta)), form)


def _np_adjoint(theta: np.ndarray, form: Matrix, form_O: Matrix) -> np.ndarray:
    return np.linalg.inv(_to_numpy(form_O)) @ theta.conj().T @ _to_numpy(form)


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def schur_scalar(theta: Matrix, rep: RepData, rep_O: RepData) -> Fraction:
    G = linalg.matmul(adjoint(theta, rep.hform(), rep_O.hform()), theta)
    m = len(G)
    lam = G[0][0] if m else ZERO
    scalar = all(G[r][c] == (lam if r == c else ZERO) for r in range(m) for c in range(m))
    if not scalar:
        raise IsotypicError("rep_O not irreducible or invalid form: Theta*Theta is not a scalar "
                            "multiple of the identity (non-scalar)")
    if not lam:
        raise IsotypicError("zero intertwiner: Theta*Theta = 0")
    if not lam.is_real_rational() or lam.to_fraction() < 0:
        raise IsotypicError(f"invalid form: Schur scalar {lam} is not a positive rational")
    return lam.to_fraction()


def schur_normalize(theta: IntertwinerMap, rep: RepData, rep_O: RepData) -> IntertwinerMap:
    """``lambda^(-1/2) Theta``; exact when lambda is a rational square, float otherwise."""
    lam = schur_scalar(theta.matrix, rep, rep_O)
    root = _rational_sqrt(lam)
    if root is not None:
        return IntertwinerMap(linalg.scale(theta.matrix, Scalar.of(1 / root)), lam, True)
    return IntertwinerMap(_to_numpy(theta.matrix) / np.sqrt(float(lam)), lam, False)


def inner(t1: Matrix, t2: Matrix, rep: RepData, rep_O: RepData) -> Scalar:
    """``trace(Theta_2* Theta_1) / dim H_O``."""
    G = linalg.matmul(adjoint(t2, rep.hform(), rep_O.hform()), t1)
    return linalg.trace(G) / rep_O.dim


@dataclass
class Projector:
    matrix: Matrix
    multiplicity: int
    lambdas: List[Fraction] = field(default_factory=list)
    normalized: List[IntertwinerMap] = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    def as_numpy(self) -> np.ndarray:
        return _to_numpy(self.matrix)


def build_projector(taus: Sequence[Sequence[Scalar]], rep: RepData, rep_O: RepData) -> Projector:
    """``Pi = sum Theta_i Theta_i* / lambda_i`` over Gram-Schmidt orthogonalized intertwiners."""
    n, m = rep.dim, rep_O.dim
    if taus and linalg.rank([list(t) for t in taus]) < len(taus):
        raise IsotypicError("invariant tensors are linearly dependent")
    K = rep_O.hform()
    if taus and not rep_O.is_invariant_form():
        raise IsotypicError("rep_O not irreducible or invalid form: generators of H_O are not "
                            "anti-Hermitian for its form, so Theta = T K does not intertwine")
    thetas: List[Matrix] = []
    for tau in taus:
        th = theta_map(tau, (n, m), K).matrix
        for prev in thetas:
            c = inner(th, prev, rep, rep_O) / inner(prev, prev, rep, rep_O)
            th = linalg.sub(th, linalg.scale(prev, c))
        thetas.append(th)
    P = linalg.zeros(n, n)
    lams, normed = [], []
    for th in thetas:
        lam = schur_scalar(th, rep, rep_O)
        lams.append(lam)
        P = linalg.add(P, linalg.scale(linalg.matmul(th, adjoint(th, rep.hform(), K)),
                                       Scalar.of(1 / lam)))
        normed.append(schur_normalize(IntertwinerMap(th), rep, rep_O))
    proj = Projector(P, len(thetas), lams, normed)
    proj.checks = projector_checks(proj, rep, rep_O)
    return proj


def projector_checks(proj: Projector, rep: RepData, rep_O: RepData) -> dict:
    P = proj.matrix
    H = rep.hform()
    n = rep.dim
    idem = linalg.matmul(P, P) == P
    Pstar = linalg.matmul(linalg.matmul(linalg.inverse(H), linalg.dagger(P)), H)
    selfadj = Pstar == P
    commutes = all(linalg.matmul(P, rep.mat(j)) == linalg.matmul(rep.mat(j), P)
                   for j in range(rep.lie.dim))
    rank = linalg.rank(P) if n else 0
    # float path through the normalized intertwiners
    Pf = np.zeros((n, n), dtype=complex)
    range_defect = 0.0
    for th in proj.normalized:
        T = th.as_numpy()
        Pf = Pf + T @ _np_adjoint(T, H, rep_O.hform())
    Pe = _to_numpy(P) if n else Pf
    for th in proj.normalized:
        T = th.as_numpy()
        if T.size:
            range_defect = max(range_defect, float(np.max(np.abs(Pe @ T - T))))
    Hn = _to_numpy(H) if n else np.zeros((0, 0))
    float_sa = float(np.max(np.abs(np.linalg.inv(Hn) @ Pf.conj().T @ Hn - Pf))) if n else 0.0
    float_match = float(np.max(np.abs(Pf - Pe))) if n else 0.0
    isometry = 0.0
    for th in proj.normalized:
        T = th.as_numpy()
        G = _np_adjoint(T, H, rep_O.hform()) @ T
        isometry = max(isometry, float(np.max(np.abs(G - np.eye(rep_O.dim)))))
    return {
        "idempotent": idem,
        "self_adjoint": selfadj,
        "commutes_with_generators": commutes,
        "rank": rank,
        "rank_matches": rank == proj.multiplicity * rep_O.dim,
        "trace": str(linalg.trace(P)) if n else "0",
        "float_self_adjoint_defect": float_sa,
        "float_exact_defect": float_match,
        "isometry_defect": isometry,
        "range_defect": range_defect,
    }


def checks_pass(checks: dict) -> bool:
    return (checks["idempotent"] and checks["self_adjoint"] and checks["commutes_with_generators"]
            and checks["rank_matches"] and checks["float_self_adjoint_defect"] <= FLOAT_TOL
            and checks["float_exact_defect"] <= FLOAT_TOL and checks["isometry_defect"] <= FLOAT_TOL
            and checks["range_defect"] <= FLOAT_TOL)


# Compact real form of sl2: u_a = (i/2) sigma_a, [u_a, u_b] = -eps_abc u_c.
def su2() -> LieAlgebraData:
    return LieAlgebraData.from_brackets(
        ["u1", "u2", "u3"],
        {("u1", "u2"): {"u3": -1}, ("u2", "u3"): {"u1": -1}, ("u3", "u1"): {"u2": -1}})


def spin_half(lie: LieAlgebraData | None = None, name: str = "spin-1/2") -> RepData:
    i2 = Scalar.of(0, Fraction(1, 2))
    h = Scalar.of(Fraction(1, 2))
    mats = (
        [[ZERO, i2], [i2, ZERO]],
        [[ZERO, h], [-h, ZERO]],
        [[i2, ZERO], [ZERO, -i2]],
    )
    return RepData(lie or su2(), mats, None, True, True, name)


def spin_one(lie: LieAlgebraData | None = None, name: str = "spin-1") -> RepData:
    eps = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
    mats = tuple([[Scalar.of(eps.get((a, b, c), 0)) for c in range(3)] for b in range(3)]
                 for a in range(3))
    return RepData(lie or su2(), mats, None, True, True, name)


def trivial(lie: LieAlgebraData | None = None, dim: int = 1, name: str = "trivial") -> RepData:
    lie = lie or su2()
    return RepData(lie, tuple(linalg.zeros(dim, dim) for _ in range(lie.dim)), None, True, dim == 1, name)
