import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import bracket_coeff
from quadnil.family import (
    ZERO,
    Assignment,
    StructureMatrix,
    SymbolicFamily,
    SymEntry,
    adjoint,
    adjoint_recursive,
    assemble_B,
    build_B,
    check_conditions,
    check_rational_family,
    evaluate,
    indexer,
    is_d_quadratic,
    num_params,
    skewsymmetric,
    var_in,
    var_until,
)
from quadnil.linalg import Matrix


@pytest.mark.parametrize("d", range(3, 10))
def test_triple_numbering_round_trip(d):
    ix = indexer(d)
    assert len(ix) == num_params(d)
    triples = list(itertools.combinations(range(1, d + 1), 3))
    for t, triple in enumerate(triples, start=1):
        assert ix.idx(*triple) == t
        assert ix.triple(t) == triple


def test_var_counts():
    assert [var_in(k) for k in range(5)] == [0, 1, 3, 6, 10]
    assert var_until(3, 2) == 0
    assert var_until(1, 3) == 10
    # the fresh blocks of A_1..A_d use up every parameter exactly once
    for d in range(3, 10):
        assert sum(var_in(d - i - 1) for i in range(1, d)) == num_params(d)
    with pytest.raises(ValueError):
        var_in(-1)


def test_skewsymmetric():
    S = skewsymmetric(3, 4)
    assert [[str(x) for x in r] for r in S] == [["0", "a4", "a5"], ["-a4", "0", "a6"], ["-a5", "-a6", "0"]]


@pytest.mark.parametrize("d", range(2, 9))
def test_adjoint_against_bracket_oracle(d):
    for i in range(1, d + 1):
        A = adjoint(d, i)
        for k in range(1, d + 1):
            for j in range(1, d + 1):
                expected = bracket_coeff(d, i, j, k)
                entry = A[k - 1][j - 1]
                assert (entry.coeff, entry.var) == (expected if expected else (0, None))


@pytest.mark.parametrize("d", range(2, 9))
def test_recursive_construction_agrees(d):
    for i in range(1, d + 1):
        assert adjoint_recursive(d, i) == adjoint(d, i)


@pytest.mark.parametrize("d", range(2, 9))
def test_canonical_family_conditions(d):
    assert SymbolicFamily.canonical(d).structural_conditions() == (True, True, True)


def test_adjoint_index_errors():
    with pytest.raises(IndexError):
        adjoint(5, 0)
    with pytest.raises(IndexError):
        adjoint_recursive(5, 6)
    with pytest.raises(ValueError):
        build_B(1)


def test_structure_matrix_is_alternating():
    # B[k, (i, j)] = B[i, (j, k)]: the z_k-coefficient of [v_i, v_j] is cyclic
    for d in range(3, 8):
        C = build_B(d)
        col = {p: n for n, p in enumerate(C.column_labels)}
        for i, j, k in itertools.permutations(range(1, d + 1), 3):
            if i < j and j < k:
                assert C.entries[k - 1][col[(i, j)]] == C.entries[i - 1][col[(j, k)]]


def test_structure_matrix_views():
    C = build_B(4)
    assert C.shape == (4, 6) and C.num_vars == 4
    assert [str(x) for x in C.column(1, 2)] == ["0", "0", "-a1", "-a2"]
    R = C.restrict([1])
    assert R.variables() == {1}
    assert R.to_poly_matrix().shape == (4, 6)
    assert len(C.nonzeros()) == 3 * num_params(4)  # one entry per pair of the triple
    assert C.to_json()["entries"][0][:3] == ["0", "0", "0"]
    assert "a_{1}" in C.to_latex()


def test_sym_entry():
    e = SymEntry.parse("-a7")
    assert (e.coeff, e.var) == (-1, 7)
    assert str(e) == "-a7" and e.label() == "-a7" and (-e).label() == "+a7"
    assert e.latex() == "-a_{7}" and str(ZERO) == "0" and ZERO.label() == "0"
    assert SymEntry.parse("a3") == SymEntry(1, 3)
    assert e.value({7: Fraction(2)}) == -2
    with pytest.raises(ValueError):
        SymEntry.parse("2*a1")
    with pytest.raises(ValueError):
        SymEntry(2, 1)


def test_family_json_round_trip():
    fam = SymbolicFamily.canonical(5)
    doc = fam.to_json()
    assert doc["matrices"][0][1][2] == "+a1"
    assert SymbolicFamily.from_json(doc) == fam
    assert SymbolicFamily.from_json(doc).to_json() == doc


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda doc: doc.pop("d"), "'d'"),
        (lambda doc: doc.pop("matrices"), "'matrices'"),
        (lambda doc: doc["matrices"].pop(), "'matrices'"),
        (lambda doc: doc["matrices"][2][0].pop(), r"'matrices\[2\]'"),
        (lambda doc: doc["matrices"][1][0].__setitem__(0, "x"), r"'matrices\[1\]'"),
        (lambda doc: doc["matrices"][1][0].__setitem__(0, "+a99"), r"'matrices\[1\]'"),
    ],
)
def test_family_json_errors_name_the_field(mutate, field):
    doc = SymbolicFamily.canonical(4).to_json()
    mutate(doc)
    with pytest.raises(ValueError, match=field):
        SymbolicFamily.from_json(doc)


def test_conditions_catch_a_tampered_family():
    doc = SymbolicFamily.canonical(4).to_json()
    doc["matrices"][0][1][2] = "+a2"  # breaks skew-symmetry of A_1
    assert SymbolicFamily.from_json(doc).structural_conditions()[0] is False
    doc = SymbolicFamily.canonical(4).to_json()
    doc["matrices"][1][0][1] = "+a1"  # nonzero own column of A_2
    assert SymbolicFamily.from_json(doc).structural_conditions()[1] is False
    doc = SymbolicFamily.canonical(4).to_json()
    for r, c in ((2, 3), (3, 2)):  # A_1 skew-symmetric still, but no longer matching A_3, A_4
        doc["matrices"][0][r][c] = "+a4" if r < c else "-a4"
    c1, c2, c3 = SymbolicFamily.from_json(doc).structural_conditions()
    assert (c1, c2, c3) == (True, True, False)


def test_assignment_parsing():
    asg = Assignment.parse("a10=2/3, a1=1", 5)
    assert asg.values == {1: Fraction(1), 10: Fraction(2, 3)}
    assert list(asg.values) == [1, 10]
    assert str(asg) == "a1=1,a10=2/3"
    assert asg.support() == frozenset({1, 10})
    assert Assignment.from_json(asg.to_json()) == asg
    assert Assignment.ones(5, [3, 2]).values == {2: 1, 3: 1}
    with pytest.raises(ValueError, match="a11"):
        Assignment.parse("a11=1", 5)
    with pytest.raises(ValueError):
        Assignment.parse("b1=1", 5)
    with pytest.raises(ValueError, match="values.a2"):
        Assignment.from_json({"d": 5, "values": {"a2": "0.5"}})
    with pytest.raises(ValueError, match="'values'"):
        Assignment.from_json({"d": 5})


@given(st.lists(st.integers(-9, 9), min_size=num_params(5), max_size=num_params(5)))
def test_evaluation_is_assemble_of_evaluated_family(vals):
    asg = Assignment(5, {t: v for t, v in enumerate(vals, start=1)})
    mats = SymbolicFamily.canonical(5).evaluate(asg)
    assert assemble_B(mats) == evaluate(build_B(5), asg)
    assert check_conditions(mats) == (True, True, True)


def test_quadratic_report():
    fam = SymbolicFamily.canonical(5)
    good = is_d_quadratic(fam, Assignment.parse("a1=1,a10=1", 5))
    assert good.ok and good.rank == 5 and good.to_json()["d_quadratic"] is True
    bad = is_d_quadratic(fam, Assignment.parse("a1=1", 5))
    assert not bad.ok and bad.rank == 3 and bad.cond1 and not bad.cond4
    with pytest.raises(ValueError):
        is_d_quadratic(fam, Assignment.parse("a1=1", 6))
    with pytest.raises(ValueError):
        evaluate(build_B(5), Assignment(6, {}))


def test_rational_family_not_skew():
    mats = [Matrix([[0, 1], [1, 0]]), Matrix.zeros(2, 2)]
    report = check_rational_family(mats)
    assert not report.cond1 and not report.ok


def test_custom_structure_matrix_labels_default():
    C = StructureMatrix(3, build_B(3).entries)
    assert C.column_labels == ((1, 2), (1, 3), (2, 3))
