"""The quadratic 2-step nilpotent Lie algebra n(A_1, ..., A_d), optionally with
an orthogonal abelian summand, and its structural invariants.

Basis order is v_1..v_d, z_1..z_d, w_1..w_pad. Brackets: [v_i, v_j] is the
column (i, j) of the evaluated structure matrix read as z-coordinates; every
other basis bracket vanishes.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Sequence

from .arith import format_rational
from .family import (
    Assignment,
    SymbolicFamily,
    build_B,
    is_d_quadratic,
    structure_matrix,
)
from .linalg import Matrix, ShapeError, entry_str, nullspace, pair_order, rank_exact, rref


class RankDeficientWarning(UserWarning):
    """The structure matrix has rank below d, so the derived algebra is smaller than d."""


@dataclass(frozen=True)
class AlgElement:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    def __len__(self):
        return len(self.coords)

    def __add__(self, other: "AlgElement") -> "AlgElement":
        return AlgElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return AlgElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, c) -> "AlgElement":
        return AlgElement(tuple(c * a for a in self.coords))

    def __bool__(self):
        return any(self.coords)


@dataclass(frozen=True)
class TwoStepAlgebra:
    d: int
    structure: Matrix  # d x d(d-1)/2, column (i, j) = z-coordinates of [v_i, v_j]
    pad: int = 0

    def __post_init__(self):
        if self.structure.shape != (self.d, self.d * (self.d - 1) // 2):
            raise ShapeError(f"structure matrix {self.structure.shape} does not fit d={self.d}")
        if self.pad < 0:
            raise ValueError("abelian summand dimension must be >= 0")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_family(cls, fam: SymbolicFamily, asg: Assignment, pad: int = 0) -> "TwoStepAlgebra":
        report = is_d_quadratic(fam, asg)
        if not (report.cond1 and report.cond2 and report.cond3):
            raise ValueError(f"family fails the structural conditions: {report.to_json()}")
        if not report.cond4:
            warnings.warn(
                f"structure matrix has rank {report.rank} < d={fam.d}", RankDeficientWarning
            )
        return cls(fam.d, structure_matrix(fam).evaluate(asg), pad)

    @classmethod
    def from_assignment(cls, d: int, asg: Assignment, pad: int = 0) -> "TwoStepAlgebra":
        if asg.d != d:
            raise ShapeError(f"assignment for d={asg.d} used with d={d}")
        B = build_B(d).evaluate(asg)
        r = rank_exact(B)
        if r < d:
            warnings.warn(f"structure matrix has rank {r} < d={d}", RankDeficientWarning)
        return cls(d, B, pad)

    # -- basis ------------------------------------------------------------
    @property
    def dim(self) -> int:
        return 2 * self.d + self.pad

    def labels(self) -> list[str]:
        return (
            [f"v{i}" for i in range(1, self.d + 1)]
            + [f"z{i}" for i in range(1, self.d + 1)]
            + [f"w{i}" for i in range(1, self.pad + 1)]
        )

    def basis(self, n: int) -> AlgElement:
        """The n-th basis vector, 0-based in the order v, z, w."""
        return AlgElement(tuple(int(k == n) for k in range(self.dim)))

    def v(self, i: int) -> AlgElement:
        return self.basis(i - 1)

    def z(self, i: int) -> AlgElement:
        return self.basis(self.d + i - 1)

    def w(self, i: int) -> AlgElement:
        return self.basis(2 * self.d + i - 1)

    def element(self, coords: Sequence) -> AlgElement:
        if len(coords) != self.dim:
            raise ShapeError(f"element of length {len(coords)} in a {self.dim}-dimensional algebra")
        return AlgElement(tuple(coords))

    # -- operations -------------------------------------------------------
    def adjoint_block(self, i: int) -> Matrix:
        """A_i with entry (k, j) = z_k-coordinate of [v_i, v_j]."""
        d = self.d
        cols = {p: n for n, p in enumerate(pair_order(d))}
        rows = []
        for k in range(d):
            row = []
            for j in range(1, d + 1):
                if j == i:
                    row.append(0)
                elif i < j:
                    row.append(self.structure[k, cols[(i, j)]])
                else:
                    row.append(-self.structure[k, cols[(j, i)]])
            rows.append(row)
        return Matrix(rows, d)

    @cached_property
    def _columns(self) -> list:
        # per pair (i, j): 0-based i, j and the nonzero (k, coefficient) of [v_i, v_j]
        S = self.structure
        return [
            (i - 1, j - 1, [(k, S[k, n]) for k in range(self.d) if S[k, n]])
            for n, (i, j) in enumerate(pair_order(self.d))
        ]

    def bracket(self, x: AlgElement, y: AlgElement) -> AlgElement:
        d = self.d
        xs, ys = x.coords, y.coords
        z = [Fraction(0)] * d
        if any(xs[:d]) and any(ys[:d]):
            for i, j, col in self._columns:
                c = xs[i] * ys[j] - xs[j] * ys[i]
                if c:
                    for k, b in col:
                        z[k] += c * b
        return AlgElement(tuple([Fraction(0)] * d + z + [Fraction(0)] * self.pad))

    def form_matrix(self) -> Matrix:
        d, n = self.d, self.dim
        rows = [[0] * n for _ in range(n)]
        for i in range(d):
            rows[i][d + i] = 1
            rows[d + i][i] = 1
        for m in range(2 * d, n):
            rows[m][m] = 1
        return Matrix(rows, n)

    def phi0(self, x: AlgElement, y: AlgElement) -> Fraction:
        d = self.d
        xs, ys = x.coords, y.coords
        total = Fraction(0)
        for n, a in enumerate(xs):
            if not a:
                continue
            # v_i pairs with z_i, z_i with v_i, w_m with itself
            partner = n + d if n < d else (n - d if n < 2 * d else n)
            b = ys[partner]
            if b:
                total += a * b
        return total

    def ad_matrix(self, i: int) -> Matrix:
        """Matrix of ad v_i (images as columns); only the lower-left block A_i is nonzero."""
        if not 1 <= i <= self.d:
            raise IndexError(f"generator index {i} outside 1..{self.d}")
        d, n = self.d, self.dim
        A = self.adjoint_block(i)
        rows = [[0] * n for _ in range(n)]
        for k in range(d):
            for j in range(d):
                rows[d + k][j] = A[k, j]
        return Matrix(rows, n)


def check_invariance(alg: TwoStepAlgebra) -> bool:
    """phi([b_p, b_q], b_r) == phi(b_p, [b_q, b_r]) for every ordered basis triple."""
    basis = [alg.basis(n) for n in range(alg.dim)]
    table = [[alg.bracket(x, y) for y in basis] for x in basis]
    for p in range(alg.dim):
        for q in range(alg.dim):
            for r in range(alg.dim):
                if alg.phi0(table[p][q], basis[r]) != alg.phi0(basis[p], table[q][r]):
                    return False
    return True


# -- subspaces ------------------------------------------------------------

def _span(rows: list, n: int) -> Matrix:
    if not rows:
        return Matrix([], n)
    return rref(Matrix(rows, n))[0]


def derived(alg: TwoStepAlgebra) -> Matrix:
    """Basis (rows, RREF) of [n, n]: the column space of the structure matrix in the z-block."""
    d = alg.d
    rows = [[0] * d + list(col) + [0] * alg.pad for col in alg.structure.T]
    return _span(rows, alg.dim)


def center(alg: TwoStepAlgebra) -> Matrix:
    """Basis (rows, RREF) of Z(n): kernel of the v-part plus the z- and w-blocks."""
    d = alg.d
    blocks = [alg.adjoint_block(i) for i in range(1, d + 1)]
    # x = sum x_i v_i is central iff sum_i x_i A_i[:, j] = 0 for every j
    conditions = [
        [blocks[i][k, j] for i in range(d)] for j in range(d) for k in range(d)
    ]
    vpart = nullspace(Matrix(conditions, d)) if d else Matrix([], 0)
    rows = [list(v) + [0] * (d + alg.pad) for v in vpart]
    rows += [list(alg.basis(n).coords) for n in range(d, alg.dim)]
    return _span(rows, alg.dim)


def _dim(M: Matrix) -> int:
    return M.rows


def _intersection_dim(U: Matrix, W: Matrix) -> int:
    if not U.rows or not W.rows:
        return 0
    both = Matrix(list(U) + list(W), U.cols)
    return U.rows + W.rows - rank_exact(both)


def bi_type(alg: TwoStepAlgebra) -> tuple[int, int]:
    return _dim(derived(alg)), _dim(center(alg))


def isotropic_index(alg: TwoStepAlgebra) -> int:
    return _intersection_dim(center(alg), derived(alg))


def is_reduced(alg: TwoStepAlgebra) -> bool:
    Z = center(alg)
    return _intersection_dim(Z, derived(alg)) == Z.rows


# -- multiplication tables -------------------------------------------------

def _coeff_str(c, latex: bool) -> str:
    if isinstance(c, Fraction):
        return entry_str(c, latex=latex)
    return c.latex() if latex else str(c)


def _render_term(c, k: int, first: bool, latex: bool) -> str:
    s = _coeff_str(c, latex)
    neg = s.startswith("-")
    mag = s[1:] if neg else s
    z = f"z_{{{k}}}" if latex else f"z{k}"
    body = z if mag == "1" else f"{mag} {z}"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def _table(d: int, columns: list, fmt: str, json_entry) -> str | dict:
    if fmt == "json":
        return {
            "d": d,
            "brackets": [
                {"i": i, "j": j, "z": [json_entry(c) for c in col]}
                for (i, j), col in zip(pair_order(d), columns)
                if any(col)
            ],
        }
    lines = []
    for (i, j), col in zip(pair_order(d), columns):
        terms = [(c, k) for k, c in enumerate(col, start=1) if c]
        if not terms:
            continue
        rhs = "".join(_render_term(c, k, n == 0, fmt == "latex") for n, (c, k) in enumerate(terms))
        if fmt == "latex":
            lines.append(f"v_{{{i}}} \\wedge v_{{{j}}} &= {rhs}")
        else:
            lines.append(f"v{i} ∧ v{j} = {rhs}")
    if fmt == "latex":
        return "\\begin{alignat*}{1}\n" + " \\\\\n".join(lines) + "\n\\end{alignat*}"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    return "\n".join(lines)


def mult_table(alg: TwoStepAlgebra, fmt: str = "text") -> str | dict:
    """Nonzero brackets [v_i, v_j], i < j, with rational coefficients."""
    return _table(alg.d, [tuple(c) for c in alg.structure.T], fmt, format_rational)


def mult_table_symbolic(d: int, fmt: str = "text") -> str | dict:
    """Multiplication table of the canonical family with the parameters a_t left free."""
    C = build_B(d)
    columns = [tuple(r[n] for r in C.entries) for n in range(len(C.column_labels))]
    return _table(d, columns, fmt, str)
