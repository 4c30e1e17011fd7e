import itertools
import random

import pytest

from oracles import leibniz_det
from quadnil.arith import SparsePoly
from quadnil.family import Assignment, build_B, num_params
from quadnil.linalg import rank_exact
from quadnil.search import (
    ACHIEVES,
    CANNOT,
    IMPOSSIBLE,
    SupportCertificate,
    certify_support,
    find_witness,
    generic_rank,
    impossibility_certificate,
    min_support,
)


def restricted_poly_rows(d, support):
    C = build_B(d)
    n = num_params(d)
    return [
        [x.poly(n) if x and x.var in support else SparsePoly.zero(n) for x in row]
        for row in C.entries
    ]


def all_d_minors_vanish(d, support):
    """Independent re-check of a CANNOT proof via Leibniz expansion of each minor."""
    rows = restricted_poly_rows(d, set(support))
    if any(not any(r) for r in rows):
        return True  # every d-minor uses all d rows, including a zero one
    live = [c for c in range(len(rows[0])) if any(r[c] for r in rows)]
    for cols in itertools.combinations(live, d):
        if leibniz_det([[r[c] for c in cols] for r in rows]):
            return False
    return True


@pytest.mark.parametrize(
    "d, support, expected",
    [(4, range(1, 5), 3), (5, [1], 3), (6, [1, 20], 6), (3, [1], 3), (7, [1, 10, 15], 7), (5, [], 0)],
)
def test_generic_rank_examples(d, support, expected):
    C = build_B(d)
    assert generic_rank(C, support) == expected
    assert generic_rank(C, support, symbolic=True) == expected


@pytest.mark.parametrize("d", range(3, 9))
def test_single_variable_locality(d):
    C = build_B(d)
    for t in range(1, num_params(d) + 1):
        assert generic_rank(C, [t]) == 3


def test_generic_rank_is_max_over_random_points():
    rng = random.Random(1)
    for d in (5, 6):
        C = build_B(d)
        for _ in range(20):
            support = rng.sample(range(1, num_params(d) + 1), rng.randint(1, 4))
            g = generic_rank(C, support)
            for _ in range(5):
                values = {t: rng.randint(-3, 3) for t in support}
                assert rank_exact(C.evaluate(values)) <= g


@pytest.mark.parametrize("d", [4, 5, 6])
def test_certificates_are_sound(d):
    C = build_B(d)
    for m in (1, 2):
        for support in itertools.combinations(range(1, num_params(d) + 1), m):
            cert = certify_support(C, support)
            if cert.verdict == ACHIEVES:
                assert cert.witness.support() == set(support)
                assert rank_exact(C.evaluate(cert.witness)) == d
            else:
                assert cert.proof.order == d
                assert all_d_minors_vanish(d, support)


def test_full_support_d4_proof_rechecked():
    cert = certify_support(build_B(4), range(1, 5))
    assert cert.verdict == CANNOT
    assert cert.proof.minors_total == 15 and cert.proof.minors_expanded == 15
    assert all_d_minors_vanish(4, range(1, 5))


def test_monotonicity():
    rng = random.Random(2)
    for d, support in ((6, (1, 20)), (7, (1, 10, 15)), (5, (1, 10))):
        C = build_B(d)
        witness = certify_support(C, support).witness
        for _ in range(5):
            extra = set(rng.sample(range(1, num_params(d) + 1), 3)) | set(support)
            # the witness extended by zeros keeps rank d on every superset
            extended = Assignment(d, {**{t: 0 for t in extra}, **witness.values})
            assert rank_exact(C.evaluate(extended)) == d
            assert certify_support(C, sorted(extra)).verdict == ACHIEVES


def test_results_do_not_depend_on_seed_or_filter():
    for d in (5, 6, 7):
        base = min_support(d, 3, seed=0).to_json()
        assert min_support(d, 3, seed=12345).to_json() == base
        assert min_support(d, 3, symbolic=True).to_json() == base


def test_parallel_matches_sequential():
    assert min_support(7, 3, workers=3).to_json() == min_support(7, 3, workers=1).to_json()


def test_listing_cap_and_totals():
    r = min_support(7, 3, listing_cap=5)
    assert r.min_support == 3 and len(r.achieving) == 5 and r.achieving_total > 5
    assert r.achieving == sorted(r.achieving)
    assert (1, 10, 15) in min_support(7, 3, listing_cap=None).achieving
    assert r.refuted == {1: 35, 2: 595, 3: 6545 - r.achieving_total}


def test_beyond_cap_is_not_impossible():
    r = min_support(7, 2)
    assert r.min_support is None and r.achieving == []
    assert min_support(3, 3).achieving == [(1,)]


def test_search_guards():
    with pytest.raises(ValueError, match="allow_large"):
        min_support(9, 2)
    with pytest.raises(ValueError):
        min_support(1, 2)
    with pytest.raises(ValueError):
        min_support(5, 0)


def test_impossibility_certificates():
    c3 = impossibility_certificate(3)
    assert [str(p) for _, p in c3.minors] == ["-a1^3"] and not c3.all_zero
    c4 = impossibility_certificate(4)
    assert len(c4.minors) == 15 and c4.all_zero
    assert c4.to_json()["verdict"] == CANNOT
    c5 = impossibility_certificate(5)
    assert len(c5.minors) == 252 and not c5.all_zero
    # spot-check a few d=5 minors against Leibniz expansion
    rows = restricted_poly_rows(5, set(range(1, 11)))
    labels = build_B(5).column_labels
    for cols, value in c5.minors[:: 50]:
        idx = [labels.index(c) for c in cols]
        assert leibniz_det([[r[c] for c in idx] for r in rows]) == value


def test_certificate_invariants():
    with pytest.raises(ValueError):
        SupportCertificate(5, (1,), ACHIEVES)
    with pytest.raises(ValueError):
        SupportCertificate(5, (1,), CANNOT)


def test_find_witness_none_when_impossible():
    assert find_witness(build_B(4), [1, 2]) is None


def test_min_support_d4_is_impossible_with_proof():
    r = min_support(4, 6)
    assert r.min_support == IMPOSSIBLE
    assert r.certificates[0].verdict == CANNOT
    assert r.refuted == {1: 4, 2: 6, 3: 4, 4: 1}
