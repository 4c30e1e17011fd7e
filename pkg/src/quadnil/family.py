"""Symbolic d-quadratic families {A_1, ..., A_d} and the structure matrix
C[d] = B(A_1, ..., A_d).

Indices here are 1-based (rows, columns, generators and parameters a_t), to
line up with the usual printed notation. Internally grids are tuples of
tuples, so ``grid[r - 1][c - 1]`` is entry (r, c).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .arith import SparsePoly, format_rational, parse_rational
from .linalg import Matrix, pair_order, rank_exact


# -- parameter labels -----------------------------------------------------

class TripleIndexer:
    """Lexicographic numbering of the triples i < j < k <= d as 1..C(d,3)."""

    def __init__(self, d: int):
        self.d = d
        self._triples = list(itertools.combinations(range(1, d + 1), 3))
        self._index = {t: n for n, t in enumerate(self._triples, start=1)}

    def __len__(self) -> int:
        return len(self._triples)

    def idx(self, i: int, j: int, k: int) -> int:
        return self._index[tuple(sorted((i, j, k)))]

    def triple(self, t: int) -> tuple[int, int, int]:
        if not 1 <= t <= len(self._triples):
            raise IndexError(f"a{t} is not a parameter for d={self.d}")
        return self._triples[t - 1]


@lru_cache(maxsize=None)
def indexer(d: int) -> TripleIndexer:
    return TripleIndexer(d)


def num_params(d: int) -> int:
    return comb(d, 3)


@dataclass(frozen=True)
class SymEntry:
    """An entry 0, +a_t or -a_t."""

    coeff: int = 0
    var: int | None = None

    def __post_init__(self):
        if self.coeff not in (-1, 0, 1):
            raise ValueError(f"coefficient must be -1, 0 or 1, got {self.coeff}")
        if (self.coeff == 0) != (self.var is None):
            raise ValueError("zero entries carry no variable and vice versa")

    def __bool__(self):
        return self.coeff != 0

    def __neg__(self):
        return self if not self.coeff else SymEntry(-self.coeff, self.var)

    def __str__(self):
        if not self.coeff:
            return "0"
        return f"{'-' if self.coeff < 0 else ''}a{self.var}"

    def label(self) -> str:
        """JSON form: ``"+aN"``, ``"-aN"`` or ``"0"``."""
        if not self.coeff:
            return "0"
        return f"{'-' if self.coeff < 0 else '+'}a{self.var}"

    def latex(self) -> str:
        if not self.coeff:
            return "0"
        return f"{'-' if self.coeff < 0 else ''}a_{{{self.var}}}"

    @classmethod
    def parse(cls, text: str) -> "SymEntry":
        s = str(text).strip()
        if s == "0":
            return ZERO
        m = re.fullmatch(r"([+-]?)a(\d+)", s)
        if not m or int(m.group(2)) < 1:
            raise ValueError(f"bad family entry {text!r}; expected '+aN', '-aN' or '0'")
        return cls(-1 if m.group(1) == "-" else 1, int(m.group(2)))

    def value(self, values: Mapping[int, Fraction]) -> Fraction:
        if not self.coeff:
            return Fraction(0)
        return self.coeff * Fraction(values.get(self.var, 0))

    def poly(self, num_vars: int) -> SparsePoly:
        if not self.coeff:
            return SparsePoly.zero(num_vars)
        return SparsePoly.var(self.var, num_vars, self.coeff)


ZERO = SymEntry()
Grid = tuple  # tuple of row tuples of SymEntry


def _freeze(rows: Sequence[Sequence[SymEntry]]) -> Grid:
    return tuple(tuple(r) for r in rows)


def grid_to_text(grid: Grid) -> str:
    cells = [[str(x) for x in r] for r in grid]
    if not cells:
        return ""
    width = max(len(c) for r in cells for c in r)
    return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)


def grid_to_latex(grid: Grid) -> str:
    body = " \\\\\n".join(" & ".join(x.latex() for x in r) for r in grid)
    return "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}"


# -- construction ---------------------------------------------------------

def var_in(k: int) -> int:
    """Fresh parameters consumed by the (k+1) x (k+1) trailing block: k(k+1)/2."""
    if k < 0:
        raise ValueError("var_in needs k >= 0")
    return k * (k + 1) // 2


def var_until(a: int, b: int) -> int:
    """Sum of var_in(k) for a <= k <= b (0 when a > b)."""
    return sum(var_in(k) for k in range(a, b + 1))


def skewsymmetric(d: int, s: int) -> Grid:
    """Generic d x d skew-symmetric grid; upper triangle a_s, a_{s+1}, ... row by row."""
    A = [[ZERO] * d for _ in range(d)]
    num = s
    for i in range(d):
        for j in range(i + 1, d):
            A[i][j] = SymEntry(1, num)
            A[j][i] = SymEntry(-1, num)
            num += 1
    return _freeze(A)


def _perm_sign(seq: Sequence[int]) -> int:
    sign = 1
    s = list(seq)
    for a in range(len(s)):
        for b in range(a + 1, len(s)):
            if s[a] > s[b]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def adjoint(d: int, i: int) -> Grid:
    """Matrix A_i of the canonical family: entry (j, k) is sgn(i,j,k) * a_idx({i,j,k})."""
    if not 1 <= i <= d:
        raise IndexError(f"adjoint index {i} outside 1..{d}")
    ix = indexer(d)
    rows = []
    for j in range(1, d + 1):
        row = []
        for k in range(1, d + 1):
            if len({i, j, k}) < 3:
                row.append(ZERO)
            else:
                row.append(SymEntry(_perm_sign((i, j, k)), ix.idx(i, j, k)))
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def adjoint_recursive(d: int, i: int) -> Grid:
    """Step-by-step construction: columns inherited from earlier matrices, then a
    fresh skew-symmetric trailing block starting at a_{1 + var_until(d-i, d-2)}."""
    if not 1 <= i <= d:
        raise IndexError(f"adjoint index {i} outside 1..{d}")
    A = [[ZERO] * d for _ in range(d)]
    for j in range(1, i + 1):
        if j < i:
            earlier = adjoint_recursive(d, j)
            for r in range(d):
                A[r][j - 1] = -earlier[r][i - 1]
        else:
            for r in range(d):
                A[r][j - 1] = ZERO
        for c in range(j, d + 1):
            A[j - 1][c - 1] = -A[c - 1][j - 1]
    block = skewsymmetric(d - i, 1 + var_until(d - i, d - 2))
    for r in range(d - i):
        for c in range(d - i):
            A[i + r][i + c] = block[r][c]
    return _freeze(A)


# -- families and their structure matrix ----------------------------------

@dataclass(frozen=True)
class StructureMatrix:
    """C[d]: a d x d(d-1)/2 grid whose column (i, j) is column j of A_i."""

    d: int
    entries: Grid
    column_labels: tuple = field(default=())

    def __post_init__(self):
        if not self.column_labels:
            object.__setattr__(self, "column_labels", tuple(pair_order(self.d)))

    @property
    def num_vars(self) -> int:
        return num_params(self.d)

    @property
    def shape(self) -> tuple[int, int]:
        return self.d, len(self.column_labels)

    def column(self, i: int, j: int) -> tuple:
        c = self.column_labels.index((i, j))
        return tuple(r[c] for r in self.entries)

    def variables(self) -> set[int]:
        return {x.var for r in self.entries for x in r if x}

    def nonzeros(self) -> list[tuple[int, int, int, int]]:
        """(row, col, sign, var), 0-based row/col, in row-major order."""
        return [
            (r, c, x.coeff, x.var)
            for r, row in enumerate(self.entries)
            for c, x in enumerate(row)
            if x
        ]

    def restrict(self, support: Iterable[int]) -> "StructureMatrix":
        keep = set(support)
        return StructureMatrix(
            self.d,
            tuple(tuple(x if x and x.var in keep else ZERO for x in r) for r in self.entries),
            self.column_labels,
        )

    def to_poly_matrix(self) -> Matrix:
        n = self.num_vars
        return Matrix([[x.poly(n) for x in r] for r in self.entries], len(self.column_labels))

    def evaluate(self, asg: "Assignment | Mapping[int, Fraction]") -> Matrix:
        values = asg.values if isinstance(asg, Assignment) else asg
        return Matrix([[x.value(values) for x in r] for r in self.entries], len(self.column_labels))

    def to_text(self) -> str:
        return grid_to_text(self.entries)

    def to_latex(self) -> str:
        return grid_to_latex(self.entries)

    def to_json(self) -> dict:
        return {
            "rows": self.d,
            "cols": len(self.column_labels),
            "entries": [[str(x) for x in r] for r in self.entries],
        }


@dataclass(frozen=True)
class SymbolicFamily:
    d: int
    matrices: tuple

    def __post_init__(self):
        if len(self.matrices) != self.d:
            raise ValueError(f"family for d={self.d} needs {self.d} matrices")
        for n, A in enumerate(self.matrices, start=1):
            if len(A) != self.d or any(len(r) != self.d for r in A):
                raise ValueError(f"matrix A{n} is not {self.d}x{self.d}")

    @classmethod
    def canonical(cls, d: int) -> "SymbolicFamily":
        return cls(d, tuple(adjoint(d, i) for i in range(1, d + 1)))

    def evaluate(self, asg: "Assignment | Mapping[int, Fraction]") -> list[Matrix]:
        values = asg.values if isinstance(asg, Assignment) else asg
        return [Matrix([[x.value(values) for x in r] for r in A], self.d) for A in self.matrices]

    def structural_conditions(self) -> tuple[bool, bool, bool]:
        return check_conditions(self.matrices, neg=lambda x: -x)

    def to_json(self) -> dict:
        return {"d": self.d, "matrices": [[[x.label() for x in r] for r in A] for A in self.matrices]}

    @classmethod
    def from_json(cls, doc: dict) -> "SymbolicFamily":
        if not isinstance(doc, dict) or "d" not in doc:
            raise ValueError("family JSON is missing field 'd'")
        if "matrices" not in doc:
            raise ValueError("family JSON is missing field 'matrices'")
        d = doc["d"]
        if not isinstance(d, int) or d < 2:
            raise ValueError("family JSON field 'd' must be an integer >= 2")
        mats = doc["matrices"]
        if not isinstance(mats, list) or len(mats) != d:
            raise ValueError(f"family JSON field 'matrices' must hold {d} matrices")
        out = []
        for n, A in enumerate(mats, start=1):
            if not isinstance(A, list) or len(A) != d or any(
                not isinstance(r, list) or len(r) != d for r in A
            ):
                raise ValueError(f"family JSON field 'matrices[{n - 1}]' is not {d}x{d}")
            try:
                grid = _freeze([[SymEntry.parse(x) for x in r] for r in A])
            except ValueError as exc:
                raise ValueError(f"family JSON field 'matrices[{n - 1}]': {exc}") from None
            for r in grid:
                for x in r:
                    if x and x.var > num_params(d):
                        raise ValueError(
                            f"family JSON field 'matrices[{n - 1}]': a{x.var} exceeds "
                            f"a{num_params(d)}"
                        )
            out.append(grid)
        return cls(d, tuple(out))


def check_conditions(mats: Sequence, neg=lambda x: -x) -> tuple[bool, bool, bool]:
    """Skew-symmetry, null own column, and column compatibility of a family.

    ``mats`` may hold SymEntry grids or rational Matrices (anything indexable
    as ``m[r][c]`` or ``m[r, c]``).
    """
    d = len(mats)

    def at(A, r, c):
        return A[r, c] if isinstance(A, Matrix) else A[r][c]

    cond1 = all(at(A, r, c) == neg(at(A, c, r)) for A in mats for r in range(d) for c in range(d))
    cond2 = all(not at(mats[i], r, i) for i in range(d) for r in range(d))
    cond3 = all(
        at(mats[i], r, j) == neg(at(mats[j], r, i))
        for i in range(d)
        for j in range(i + 1, d)
        for r in range(d)
    )
    return cond1, cond2, cond3


def structure_matrix(fam: SymbolicFamily) -> StructureMatrix:
    d = fam.d
    cols = pair_order(d)
    entries = tuple(
        tuple(fam.matrices[i - 1][r][j - 1] for (i, j) in cols) for r in range(d)
    )
    return StructureMatrix(d, entries, tuple(cols))


@lru_cache(maxsize=None)
def build_B(d: int) -> StructureMatrix:
    """C[d] for the canonical family."""
    if d < 2:
        raise ValueError("C[d] needs d >= 2")
    return structure_matrix(SymbolicFamily.canonical(d))


def assemble_B(mats: Sequence[Matrix]) -> Matrix:
    """B(A_1, ..., A_d) from rational matrices: columns j > i of each A_i."""
    d = len(mats)
    return Matrix([[mats[i - 1][r, j - 1] for (i, j) in pair_order(d)] for r in range(d)], comb(d, 2))


# -- assignments ----------------------------------------------------------

@dataclass(frozen=True)
class Assignment:
    """Values for some parameters a_t; unlisted parameters are 0."""

    d: int
    values: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        n = num_params(self.d)
        clean = {}
        for t, v in dict(self.values).items():
            if not isinstance(t, int) or not 1 <= t <= n:
                raise ValueError(f"a{t} is not a parameter for d={self.d} (valid: a1..a{n})")
            clean[t] = Fraction(v)
        object.__setattr__(self, "values", dict(sorted(clean.items())))

    def support(self) -> frozenset:
        return frozenset(t for t, v in self.values.items() if v)

    @classmethod
    def ones(cls, d: int, support: Iterable[int]) -> "Assignment":
        return cls(d, {t: Fraction(1) for t in support})

    @classmethod
    def parse(cls, text: str, d: int) -> "Assignment":
        """Parse ``"a1=1,a10=2/3"``."""
        values = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            m = re.fullmatch(r"a(\d+)\s*=\s*(\S+)", part)
            if not m:
                raise ValueError(f"bad assignment item {part!r}; expected aN=rational")
            values[int(m.group(1))] = parse_rational(m.group(2))
        return cls(d, values)

    def to_json(self) -> dict:
        return {"d": self.d, "values": {f"a{t}": format_rational(v) for t, v in self.values.items()}}

    @classmethod
    def from_json(cls, doc: dict) -> "Assignment":
        if not isinstance(doc, dict) or "d" not in doc:
            raise ValueError("assignment JSON is missing field 'd'")
        if "values" not in doc or not isinstance(doc["values"], dict):
            raise ValueError("assignment JSON is missing object field 'values'")
        values = {}
        for k, v in doc["values"].items():
            m = re.fullmatch(r"a(\d+)", k)
            if not m:
                raise ValueError(f"assignment JSON field 'values.{k}': keys must look like aN")
            try:
                values[int(m.group(1))] = parse_rational(v)
            except ValueError as exc:
                raise ValueError(f"assignment JSON field 'values.{k}': {exc}") from None
        return cls(doc["d"], values)

    def __str__(self):
        return ",".join(f"a{t}={format_rational(v)}" for t, v in self.values.items())


def evaluate(C: StructureMatrix, asg: Assignment) -> Matrix:
    if asg.d != C.d:
        raise ValueError(f"assignment for d={asg.d} applied to C[{C.d}]")
    return C.evaluate(asg)


@dataclass(frozen=True)
class QuadraticReport:
    cond1: bool
    cond2: bool
    cond3: bool
    cond4: bool
    rank: int

    @property
    def ok(self) -> bool:
        return self.cond1 and self.cond2 and self.cond3 and self.cond4

    def to_json(self) -> dict:
        return {
            "cond1": self.cond1,
            "cond2": self.cond2,
            "cond3": self.cond3,
            "cond4": self.cond4,
            "rank": self.rank,
            "d_quadratic": self.ok,
        }


def check_rational_family(mats: Sequence[Matrix]) -> QuadraticReport:
    c1, c2, c3 = check_conditions(mats)
    d = len(mats)
    r = rank_exact(assemble_B(mats))
    return QuadraticReport(c1, c2, c3, r == d, r)


def is_d_quadratic(fam: SymbolicFamily, asg: Assignment) -> QuadraticReport:
    if asg.d != fam.d:
        raise ValueError(f"assignment for d={asg.d} applied to a family with d={fam.d}")
    return check_rational_family(fam.evaluate(asg))
