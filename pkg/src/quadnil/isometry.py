"""Automorphisms tau(Q, X) of the free 2-step nilpotent algebra and the
isometric-isomorphism test B_E == Q^t B_A hat(Q).

Hall-basis coordinates are column vectors ordered v_1..v_d, then v_i ^ v_j
with pairs in lexicographic order. Q sends v_i to sum_r Q[r, i] v_r.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .family import QuadraticReport, assemble_B, check_conditions
from .linalg import Matrix, ShapeError, exterior_square, pair_order, rank_exact


class SingularQ(ValueError):
    """The proposed change of generators is not invertible."""


def _require_regular(Q: Matrix):
    if not Q.is_square():
        raise ShapeError(f"Q must be square, got {Q.shape}")
    if rank_exact(Q) != Q.rows:
        raise SingularQ("Q is singular")


def hat(Q: Matrix) -> Matrix:
    """Induced action of Q on the wedge pairs (the second compound of Q)."""
    return exterior_square(Q)


@dataclass(frozen=True)
class AutoSpec:
    """Data of a candidate automorphism tau(Q, X).

    ``Qhat`` defaults to hat(Q); passing another matrix builds a block matrix
    that is generally *not* an automorphism, which is what the checker is for.
    """

    Q: Matrix
    X: Matrix | None = None
    Qhat: Matrix | None = field(default=None)

    def __post_init__(self):
        d = self.Q.rows
        D = comb(d, 2)
        if not self.Q.is_square():
            raise ShapeError(f"Q must be square, got {self.Q.shape}")
        if self.X is None:
            object.__setattr__(self, "X", Matrix.zeros(D, d))
        if self.X.shape != (D, d):
            raise ShapeError(f"X must be {D}x{d}, got {self.X.shape}")
        if self.Qhat is None:
            object.__setattr__(self, "Qhat", hat(self.Q))
        if self.Qhat.shape != (D, D):
            raise ShapeError(f"Qhat must be {D}x{D}, got {self.Qhat.shape}")

    @property
    def d(self) -> int:
        return self.Q.rows


def tau(spec: AutoSpec) -> Matrix:
    """Block lower-triangular [[Q, 0], [X, Qhat]]."""
    _require_regular(spec.Q)
    d = spec.d
    D = comb(d, 2)
    return Matrix.block([[spec.Q, Matrix.zeros(d, D)], [spec.X, spec.Qhat]])


def _wedge(u: tuple, w: tuple, d: int) -> list[Fraction]:
    return [u[r] * w[s] - u[s] * w[r] for (r, s) in ((a - 1, b - 1) for a, b in pair_order(d))]


def is_automorphism(spec: "AutoSpec | Matrix", d: int) -> bool:
    """Check tau(v_i ^ v_j) == tau(v_i) ^ tau(v_j) on the Hall basis, the central
    block mapping into the wedge part, and invertibility."""
    T = tau(spec) if isinstance(spec, AutoSpec) else spec
    D = comb(d, 2)
    if T.shape != (d + D, d + D) or rank_exact(T) != d + D:
        return False
    # images of wedge vectors must have no generator component
    if any(T[r, c] for r in range(d) for c in range(d, d + D)):
        return False
    for n, (i, j) in enumerate(pair_order(d)):
        image = [T[d + m, d + n] for m in range(D)]
        if image != _wedge(T.column(i - 1)[:d], T.column(j - 1)[:d], d):
            return False
    return True


def compose(a: AutoSpec, b: AutoSpec) -> AutoSpec:
    """Spec of tau(a) @ tau(b): tau(Q1 Q2, X1 Q2 + hat(Q1) X2)."""
    return AutoSpec(a.Q @ b.Q, a.X @ b.Q + a.Qhat @ b.X)


def cal_Q(B: Matrix) -> Matrix:
    """Gram matrix [[0, B], [B^t, 0]] of the invariant form on the free algebra."""
    d, D = B.shape
    return Matrix.block([[Matrix.zeros(d, d), B], [B.T, Matrix.zeros(D, D)]])


def transform(B: Matrix, Q: Matrix) -> Matrix:
    """Q^t B hat(Q)."""
    _require_regular(Q)
    if B.rows != Q.rows or B.cols != comb(Q.rows, 2):
        raise ShapeError(f"B {B.shape} does not match Q {Q.shape}")
    return Q.T @ B @ hat(Q)


@dataclass(frozen=True)
class IsoReport:
    match: bool
    residual_nonzeros: int

    def to_json(self) -> dict:
        return {"match": self.match, "residual_nonzeros": self.residual_nonzeros}


def verify_iso(B_A: Matrix, B_E: Matrix, Q: Matrix) -> IsoReport:
    """Does Q carry the family of B_A onto that of B_E?

    Only Q enters: the X block of tau(Q, X) drops out of the criterion.
    """
    if B_A.shape != B_E.shape:
        raise ShapeError(f"B_A {B_A.shape} and B_E {B_E.shape} differ in shape")
    residual = B_E - transform(B_A, Q)
    nz = residual.nonzero_count()
    return IsoReport(nz == 0, nz)


def reinterpret_as_family(B: Matrix) -> tuple[list[Matrix], QuadraticReport]:
    """Slice a rational structure matrix back into matrices A'_1..A'_d.

    Column j > i of A'_i is the column (i, j) of B, column i is zero and
    column j < i is minus the column (j, i). The report checks the family
    conditions on the result and the rank of B.
    """
    d = B.rows
    if B.cols != comb(d, 2):
        raise ShapeError(f"B must be {d}x{comb(d, 2)}, got {B.shape}")
    col = {p: n for n, p in enumerate(pair_order(d))}
    mats = []
    for i in range(1, d + 1):
        rows = []
        for k in range(d):
            row = []
            for j in range(1, d + 1):
                if j == i:
                    row.append(0)
                elif i < j:
                    row.append(B[k, col[(i, j)]])
                else:
                    row.append(-B[k, col[(j, i)]])
            rows.append(row)
        mats.append(Matrix(rows, d))
    c1, c2, c3 = check_conditions(mats)
    r = rank_exact(assemble_B(mats))
    return mats, QuadraticReport(c1, c2, c3, r == d, r)
