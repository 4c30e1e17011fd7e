"""Dense matrices over Q or Z[a1..aN]: exact rank, determinants, minors and
second compounds.

Indices in this module are 0-based, as usual for Python containers.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import kernels
from .arith import SparsePoly, format_rational, lcm_of_denominators, parse_rational


class ShapeError(ValueError):
    """Operands have incompatible shapes."""


def _coerce(x):
    if isinstance(x, SparsePoly):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"unsupported matrix entry {x!r}")


class Matrix:
    """Immutable row-major matrix of ring elements (Fraction or SparsePoly)."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        e = tuple(tuple(_coerce(x) for x in row) for row in entries)
        self.rows = len(e)
        if self.rows:
            self.cols = len(e[0])
            if any(len(r) != self.cols for r in e):
                raise ShapeError("ragged rows")
            if cols is not None and cols != self.cols:
                raise ShapeError(f"expected {cols} columns")
        else:
            self.cols = cols or 0
        self._e = e

    @classmethod
    def _wrap(cls, e: tuple, cols: int) -> "Matrix":
        m = cls.__new__(cls)
        m._e = e
        m.rows = len(e)
        m.cols = cols
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._wrap(
            tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._wrap(tuple((Fraction(0),) * cols for _ in range(rows)), cols)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(
            [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix from a grid of conformable blocks."""
        out = []
        for brow in blocks:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise ShapeError("block row heights differ")
            for i in range(h):
                out.append(tuple(x for b in brow for x in b._e[i]))
        width = sum(b.cols for b in blocks[0])
        return cls._wrap(tuple(out), width)

    # -- access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._e)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._e]

    def __iter__(self) -> Iterator[tuple]:
        return iter(self._e)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._wrap(tuple(tuple(self._e[i][j] for j in cols) for i in rows), len(cols))

    def map(self, f) -> "Matrix":
        return Matrix([[f(x) for x in r] for r in self._e], self.cols)

    def nonzero_count(self) -> int:
        return sum(1 for r in self._e for x in r if x)

    def is_zero(self) -> bool:
        return not any(x for r in self._e for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic ---------------------------------------------------
    @property
    def T(self) -> "Matrix":
        if not self.rows:
            return Matrix._wrap(tuple(() for _ in range(self.cols)), 0)
        return Matrix._wrap(tuple(zip(*self._e)), self.rows)

    def transpose(self) -> "Matrix":
        return self.T

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Matrix._wrap(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self.cols
        )

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(tuple(tuple(-a for a in r) for r in self._e), self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.T._e if other.rows else tuple(() for _ in range(other.cols))
        out = []
        for r in self._e:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for c in ocols:
                acc = 0
                for k, a in nz:
                    b = c[k]
                    if b:
                        acc = a * b + acc
                row.append(acc if not isinstance(acc, int) else Fraction(acc))
            out.append(tuple(row))
        return Matrix._wrap(tuple(out), other.cols)

    def scale(self, c) -> "Matrix":
        return Matrix._wrap(tuple(tuple(c * a for a in r) for r in self._e), self.cols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})\n{to_text(self)}"


# -- exact rank and determinants ----------------------------------------------

def _integer_rows(A: Matrix) -> list[list[int]]:
    rows = []
    for r in A:
        m = lcm_of_denominators(r)
        rows.append([int(x * m) for x in r])
    return rows


def _require_rational(A: Matrix):
    for r in A:
        for x in r:
            if isinstance(x, SparsePoly):
                raise TypeError("rank_exact needs rational entries; evaluate first")


def rank_exact(A: Matrix) -> int:
    """Rank over Q by Bareiss elimination with full pivoting.

    Rows are first scaled to integers, which does not change the rank.
    """
    _require_rational(A)
    if A.rows == 0 or A.cols == 0:
        return 0
    return kernels.bareiss_rank(_integer_rows(A))


def det(A: Matrix):
    """Exact determinant; Bareiss for rationals, cofactor expansion for polynomials."""
    if not A.is_square():
        raise ShapeError(f"determinant of non-square {A.shape} matrix")
    if any(isinstance(x, SparsePoly) for r in A for x in r):
        return det_cofactor(A)
    if A.rows == 0:
        return Fraction(1)
    scales = [lcm_of_denominators(r) for r in A]
    rows = [[int(x * m) for x in r] for r, m in zip(A, scales)]
    d = Fraction(kernels.bareiss_det(rows))
    for m in scales:
        d /= m
    return d


def det_cofactor(A: Matrix):
    """Determinant by Laplace expansion along the sparsest row or column."""
    if not A.is_square():
        raise ShapeError(f"determinant of non-square {A.shape} matrix")
    E = A._e
    memo: dict = {}

    def rec(rows: tuple, cols: tuple):
        n = len(rows)
        if n == 0:
            return 1
        if n == 1:
            return E[rows[0]][cols[0]]
        key = (rows, cols)
        if key in memo:
            return memo[key]
        best = None
        for pos, i in enumerate(rows):
            nz = [q for q, j in enumerate(cols) if E[i][j]]
            if best is None or len(nz) < len(best[2]):
                best = ("r", pos, nz)
                if not nz:
                    break
        if best[2]:
            for q, j in enumerate(cols):
                nz = [pos for pos, i in enumerate(rows) if E[i][j]]
                if len(nz) < len(best[2]):
                    best = ("c", q, nz)
                    if not nz:
                        break
        kind, pos, nz = best
        total = 0
        for q in nz:
            if kind == "r":
                i, j = rows[pos], cols[q]
                sub = rec(rows[:pos] + rows[pos + 1:], cols[:q] + cols[q + 1:])
            else:
                i, j = rows[q], cols[pos]
                sub = rec(rows[:q] + rows[q + 1:], cols[:pos] + cols[pos + 1:])
            if not sub:
                continue
            term = E[i][j] * sub
            total = total - term if (pos + q) % 2 else total + term
        memo[key] = total
        return total

    out = rec(tuple(range(A.rows)), tuple(range(A.cols)))
    return Fraction(out) if isinstance(out, int) else out


def minor(A: Matrix, row_set: Sequence[int], col_set: Sequence[int]):
    if len(row_set) != len(col_set):
        raise ShapeError("row and column index sets differ in size")
    for i in row_set:
        if not 0 <= i < A.rows:
            raise IndexError(f"row {i} out of range")
    for j in col_set:
        if not 0 <= j < A.cols:
            raise IndexError(f"column {j} out of range")
    return det(A.submatrix(sorted(row_set), sorted(col_set)))


def all_minors(A: Matrix, k: int) -> list[tuple[tuple, tuple, object]]:
    """Every k x k minor as ``(rows, cols, value)``, row subsets outermost, lexicographic."""
    return [
        (rs, cs, det(A.submatrix(rs, cs)))
        for rs in itertools.combinations(range(A.rows), k)
        for cs in itertools.combinations(range(A.cols), k)
    ]


# -- compounds ----------------------------------------------------------------

def pair_order(d: int) -> list[tuple[int, int]]:
    """Lexicographic pairs (i, j), 1 <= i < j <= d; the Hall-basis column order."""
    return list(itertools.combinations(range(1, d + 1), 2))


def exterior_square(Q: Matrix) -> Matrix:
    """Second compound: entry ((r,s),(i,j)) is det [[q_ri, q_rj], [q_si, q_sj]]."""
    if not Q.is_square():
        raise ShapeError(f"exterior square of non-square {Q.shape} matrix")
    pairs = list(itertools.combinations(range(Q.rows), 2))
    E = Q._e
    return Matrix(
        [
            [E[r][i] * E[s][j] - E[r][j] * E[s][i] for (i, j) in pairs]
            for (r, s) in pairs
        ],
        len(pairs),
    )


# -- echelon forms ------------------------------------------------------------

def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form over Q, with zero rows dropped, and pivot columns."""
    _require_rational(A)
    M = [list(r) for r in A]
    pivots = []
    r = 0
    for c in range(A.cols):
        piv = next((i for i in range(r, A.rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(A.rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == A.rows:
            break
    return Matrix(M[:r], A.cols), pivots


def nullspace(A: Matrix) -> Matrix:
    """Basis (as rows, in RREF) of {x : A x = 0}."""
    R, pivots = rref(A)
    free = [c for c in range(A.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * A.cols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    if not basis:
        return Matrix([], A.cols)
    return rref(Matrix(basis, A.cols))[0]


# -- serialization ------------------------------------------------------------

def entry_str(x, latex: bool = False) -> str:
    if isinstance(x, SparsePoly):
        return x.to_string(latex=latex)
    s = format_rational(x)
    if latex and "/" in s:
        num, den = s.lstrip("-").split("/")
        return ("-" if s.startswith("-") else "") + f"\\frac{{{num}}}{{{den}}}"
    return s


def to_json(A: Matrix) -> dict:
    return {"rows": A.rows, "cols": A.cols, "entries": [[entry_str(x) for x in r] for r in A]}


def from_json(doc: dict, num_vars: int | None = None) -> Matrix:
    """Parse ``{"rows": r, "cols": c, "entries": [[...]]}``.

    Entries mentioning ``aN`` become polynomials over ``num_vars`` variables
    (inferred from the largest index when not given).
    """
    for key in ("rows", "cols", "entries"):
        if key not in doc:
            raise ValueError(f"matrix JSON is missing field {key!r}")
    rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    if not isinstance(entries, list) or len(entries) != rows:
        raise ValueError("matrix JSON field 'entries' does not have 'rows' rows")
    for r in entries:
        if not isinstance(r, list) or len(r) != cols:
            raise ValueError("matrix JSON field 'entries' has a row of the wrong length")
    flat = [str(x) for r in entries for x in r]
    if any("a" in s for s in flat):
        if num_vars is None:
            import re

            num_vars = max((int(v) for s in flat for v in re.findall(r"a(\d+)", s)), default=0)
        conv = lambda s: SparsePoly.parse(str(s), num_vars)  # noqa: E731
    else:
        conv = lambda s: parse_rational(str(s))  # noqa: E731
    try:
        return Matrix([[conv(x) for x in r] for r in entries], cols)
    except ValueError as exc:
        raise ValueError(f"matrix JSON field 'entries': {exc}") from None


def to_text(A: Matrix) -> str:
    cells = [[entry_str(x) for x in r] for r in A]
    if not cells:
        return ""
    width = max(len(c) for r in cells for c in r)
    return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)


def to_latex(A: Matrix) -> str:
    body = " \\\\\n".join(" & ".join(entry_str(x, latex=True) for x in r) for r in A)
    return "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}"
