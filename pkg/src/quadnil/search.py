"""Supports of the parameters a_t that make C[d] reach rank d.

Positive verdicts carry a rational witness whose rank is recomputed
exactly. Negative verdicts carry a symbolic proof: every order-d minor of
C[d] restricted to the support is the zero polynomial. A randomized filter
(rank modulo a prime at random integer points) only decides which route to
take first; it never decides a verdict on its own, since a rank-d reading
modulo p already implies rank d over Q at that integer point.
"""
from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from . import kernels
from .arith import SparsePoly, format_rational
from .family import Assignment, StructureMatrix, build_B, indexer, num_params
from .linalg import Matrix, det_cofactor, rank_exact

ACHIEVES = "ACHIEVES_RANK_d"
CANNOT = "CANNOT"
IMPOSSIBLE = "IMPOSSIBLE"

RANDOM_BOUND = 10**6
FILTER_TRIALS = 2
DEFAULT_SIZE_CAP = 4
DEFAULT_LISTING_CAP = 100
MAX_DEFAULT_D = 8


@dataclass(frozen=True)
class MinorProof:
    order: int
    minors_total: int
    minors_expanded: int
    minors_structural: int

    @property
    def statement(self) -> str:
        return (
            f"all order-{self.order} minors restricted to this support are the zero polynomial"
        )

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "minors_total": self.minors_total,
            "minors_expanded": self.minors_expanded,
            "minors_structural": self.minors_structural,
            "statement": self.statement,
        }


@dataclass(frozen=True)
class SupportCertificate:
    d: int
    support: tuple
    verdict: str
    witness: Assignment | None = None
    proof: MinorProof | None = None

    def __post_init__(self):
        if self.verdict == ACHIEVES and self.witness is None:
            raise ValueError("a positive certificate needs a witness")
        if self.verdict == CANNOT and self.proof is None:
            raise ValueError("a negative certificate needs a minor proof")

    def to_json(self) -> dict:
        out = {"support": [f"a{t}" for t in self.support], "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = {f"a{t}": format_rational(v) for t, v in self.witness.values.items()}
        if self.proof is not None:
            out["proof"] = self.proof.to_json()
        return out


# -- restricted structure matrices -----------------------------------------

class _Restricted:
    """C[d] restricted to a support, kept as its nonzero rows and columns."""

    def __init__(self, C: StructureMatrix, support: Iterable[int]):
        by_var = _cells_by_var(C)
        self.d = C.d
        self.support = tuple(sorted(set(support)))
        nz = [cell for t in self.support for cell in by_var.get(t, ())]
        self.rows = sorted({r for r, _, _, _ in nz})
        self.cols = sorted({c for _, c, _, _ in nz})
        rpos = {r: n for n, r in enumerate(self.rows)}
        cpos = {c: n for n, c in enumerate(self.cols)}
        self.cells = [(rpos[r], cpos[c], s, v) for (r, c, s, v) in nz]

    def integer_rows(self, values: dict) -> list[list[int]]:
        M = [[0] * len(self.cols) for _ in self.rows]
        for r, c, s, v in self.cells:
            M[r][c] = s * values[v]
        return M

    def poly_matrix(self) -> Matrix:
        n = num_params(self.d)
        M = [[SparsePoly.zero(n)] * len(self.cols) for _ in self.rows]
        for r, c, s, v in self.cells:
            M[r][c] = SparsePoly.var(v, n, s)
        return Matrix(M, len(self.cols))


_CELLS: dict = {}


def _cells_by_var(C: StructureMatrix) -> dict:
    hit = _CELLS.get(id(C))
    if hit is None or hit[0] is not C:
        table: dict = {}
        for cell in C.nonzeros():
            table.setdefault(cell[3], []).append(cell)
        hit = _CELLS[id(C)] = (C, table)
    return hit[1]


def _rng(seed: int, d: int, support: Sequence[int]) -> random.Random:
    return random.Random(f"{seed}|{d}|{','.join(map(str, support))}")


def _random_values(rng: random.Random, support: Sequence[int]) -> dict:
    values = {}
    for t in support:
        x = 0
        while x == 0:
            x = rng.randint(-RANDOM_BOUND, RANDOM_BOUND)
        values[t] = x
    return values


def _filter_rank(R: _Restricted, seed: int, trials: int = FILTER_TRIALS) -> int:
    """Largest rank modulo p seen at random points; a lower bound for the generic rank."""
    if not R.cells:
        return 0
    rng = _rng(seed, R.d, R.support)
    best = 0
    for _ in range(trials):
        M = R.integer_rows(_random_values(rng, R.support))
        best = max(best, kernels.rank_mod_p(M, kernels.PRIME))
        if best == min(len(R.rows), len(R.cols)):
            break
    return best


def _zero_minor_scan(R: _Restricted, k: int, full_rows: int, full_cols: int):
    """Expand every k x k minor of the restricted matrix.

    Returns ``(proof, None)`` when all vanish, or ``(None, (rows, cols, poly))``
    for the first nonzero one. Minors of the full d x d(d-1)/2 matrix that
    touch a zero row or column are counted as structural zeros.
    """
    total = comb(full_rows, k) * comb(full_cols, k)
    nr, nc = len(R.rows), len(R.cols)
    if k > nr or k > nc:
        return MinorProof(k, total, 0, total), None
    P = R.poly_matrix()
    expanded = 0
    for rs in itertools.combinations(range(nr), k):
        for cs in itertools.combinations(range(nc), k):
            expanded += 1
            value = det_cofactor(P.submatrix(rs, cs))
            if value:
                return None, (rs, cs, value)
    return MinorProof(k, total, expanded, total - expanded), None


def generic_rank(C: StructureMatrix, support: Iterable[int], seed: int = 0, symbolic: bool = False) -> int:
    """Maximum rank of C restricted to ``support`` over all assignments.

    The random filter proposes a lower bound r; the bound is then confirmed
    by showing that every (r+1)-minor is the zero polynomial, and raised
    whenever a nonzero minor turns up. With ``symbolic=True`` the search
    starts from r = 0.
    """
    R = _Restricted(C, support)
    r = 0 if symbolic else _filter_rank(R, seed)
    cap = min(len(R.rows), len(R.cols))
    while r < cap:
        proof, hit = _zero_minor_scan(R, r + 1, C.shape[0], C.shape[1])
        if proof is not None:
            break
        r += 1
    return r


def _rank_at(C: StructureMatrix, values: dict) -> int:
    return rank_exact(C.evaluate(values))


def find_witness(C: StructureMatrix, support: Sequence[int]) -> Assignment | None:
    """First point of {1..d+1}^|support| (lexicographic, all-ones first) where C has rank d.

    When the generic rank on the support is d some order-d minor is a
    nonzero polynomial of degree <= d in each parameter, so such a point exists.
    """
    d = C.d
    support = tuple(sorted(support))
    for point in itertools.product(range(1, d + 2), repeat=len(support)):
        values = dict(zip(support, point))
        if _rank_at(C, values) == d:
            return Assignment(d, values)
    return None


def certify_support(
    C: StructureMatrix, support: Iterable[int], seed: int = 0, symbolic: bool = False
) -> SupportCertificate:
    """Decide whether the support admits rank d, with a witness or a zero-minor proof."""
    d = C.d
    R = _Restricted(C, support)
    if len(R.rows) == d and not symbolic and _filter_rank(R, seed) == d:
        return SupportCertificate(d, R.support, ACHIEVES, witness=find_witness(C, R.support))
    proof, hit = _zero_minor_scan(R, d, d, C.shape[1])
    if proof is not None:
        return SupportCertificate(d, R.support, CANNOT, proof=proof)
    return SupportCertificate(d, R.support, ACHIEVES, witness=find_witness(C, R.support))


def _achieves(C: StructureMatrix, support: tuple, seed: int, symbolic: bool) -> bool:
    """Verdict only; same decision procedure as certify_support without building the witness."""
    d = C.d
    R = _Restricted(C, support)
    if len(R.rows) < d:
        return False
    if not symbolic and _filter_rank(R, seed) == d:
        return True
    proof, _ = _zero_minor_scan(R, d, d, C.shape[1])
    return proof is None


def _achieves_job(args) -> bool:
    d, support, seed, symbolic = args
    return _achieves(build_B(d), support, seed, symbolic)


def _verdicts(d: int, supports: list, seed: int, symbolic: bool, workers: int) -> list[bool]:
    jobs = [(d, s, seed, symbolic) for s in supports]
    if workers > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_achieves_job, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    C = build_B(d)
    return [_achieves(C, s, seed, symbolic) for s in supports]


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("QUADNIL_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class SearchResult:
    d: int
    min_support: int | str | None
    achieving: list = field(default_factory=list)
    achieving_total: int = 0
    certificates: list = field(default_factory=list)
    refuted: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "min_support": self.min_support,
            "achieving": [[f"a{t}" for t in s] for s in self.achieving],
            "achieving_total": self.achieving_total,
            "refuted": {str(k): v for k, v in self.refuted.items()},
            "certificates": [c.to_json() for c in self.certificates],
        }


def _check_d(d: int, allow_large: bool):
    if d < 2:
        raise ValueError("search needs d >= 2")
    if d > MAX_DEFAULT_D and not allow_large:
        raise ValueError(f"d={d} exceeds {MAX_DEFAULT_D}; pass allow_large=True to search it")


def min_support(
    d: int,
    size_cap: int = DEFAULT_SIZE_CAP,
    *,
    listing_cap: int | None = DEFAULT_LISTING_CAP,
    seed: int = 0,
    symbolic: bool = False,
    workers: int | None = None,
    allow_large: bool = False,
) -> SearchResult:
    """Smallest m <= size_cap for which some m-element support reaches rank d.

    Every smaller support is refuted with a symbolic proof. When no support up
    to the cap works, the full support is certified: IMPOSSIBLE if it cannot
    reach rank d either, otherwise ``min_support`` is None (beyond the cap).
    """
    _check_d(d, allow_large)
    if size_cap < 1:
        raise ValueError("size_cap must be >= 1")
    workers = default_workers() if workers is None else workers
    C = build_B(d)
    n = num_params(d)
    result = SearchResult(d, None)
    for m in range(1, min(size_cap, n) + 1):
        supports = list(itertools.combinations(range(1, n + 1), m))
        verdicts = _verdicts(d, supports, seed, symbolic, workers)
        good = [s for s, ok in zip(supports, verdicts) if ok]
        result.refuted[m] = len(supports) - len(good)
        if good:
            result.min_support = m
            result.achieving_total = len(good)
            shown = good if listing_cap is None else good[:listing_cap]
            result.achieving = shown
            result.certificates = [certify_support(C, s, seed, symbolic) for s in shown]
            return result
    full = certify_support(C, range(1, n + 1), seed, symbolic)
    if full.verdict == CANNOT:
        result.min_support = IMPOSSIBLE
        result.certificates = [full]
    return result


def achieving_pairs(d: int, seed: int = 0, symbolic: bool = False, workers: int | None = None) -> list[tuple]:
    """Every two-element support on which C[d] reaches rank d."""
    workers = default_workers() if workers is None else workers
    supports = list(itertools.combinations(range(1, num_params(d) + 1), 2))
    verdicts = _verdicts(d, supports, seed, symbolic, workers)
    return [s for s, ok in zip(supports, verdicts) if ok]


@dataclass(frozen=True)
class ImpossibilityCertificate:
    d: int
    minors: tuple  # ((column labels), polynomial) for every d x d column minor
    all_zero: bool

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "minors_total": len(self.minors),
            "all_zero": self.all_zero,
            "verdict": CANNOT if self.all_zero else ACHIEVES,
            "minors": [
                {"columns": [f"{i},{j}" for i, j in cols], "value": str(p)}
                for cols, p in self.minors
            ],
        }


def impossibility_certificate(d: int) -> ImpossibilityCertificate:
    """All d x d column minors of the symbolic C[d]; rank d is impossible iff all vanish."""
    C = build_B(d)
    P = C.to_poly_matrix()
    rows = tuple(range(d))
    minors = []
    for cs in itertools.combinations(range(P.cols), d):
        value = det_cofactor(P.submatrix(rows, cs))
        if isinstance(value, Fraction):
            value = SparsePoly.constant(int(value), C.num_vars)
        minors.append((tuple(C.column_labels[c] for c in cs), value))
    return ImpossibilityCertificate(d, tuple(minors), all(not p for _, p in minors))


def triple_of(d: int, t: int) -> tuple:
    return indexer(d).triple(t)
