import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from oracles import leibniz_det, naive_rank
from quadnil import _kernels_py, kernels

BACKENDS = [pytest.param(_kernels_py, id="python")]
try:
    from quadnil import _kernels
except ImportError:
    pass
else:
    BACKENDS.append(pytest.param(_kernels, id="cython"))

ints = st.integers(-20, 20)
big = st.integers(-(10**30), 10**30)


@st.composite
def int_matrices(draw, square=False, entries=ints):
    r = draw(st.integers(1, 6))
    c = r if square else draw(st.integers(1, 7))
    return [[draw(st.one_of(st.just(0), entries)) for _ in range(c)] for _ in range(r)]


@pytest.mark.parametrize("mod", BACKENDS)
@settings(max_examples=100, deadline=None)
@given(rows=int_matrices())
def test_bareiss_rank(mod, rows):
    assert mod.bareiss_rank([r[:] for r in rows]) == naive_rank(rows)


@pytest.mark.parametrize("mod", BACKENDS)
@settings(max_examples=100, deadline=None)
@given(rows=int_matrices(entries=big))
def test_bareiss_rank_big_integers(mod, rows):
    assert mod.bareiss_rank([r[:] for r in rows]) == naive_rank(rows)


@pytest.mark.parametrize("mod", BACKENDS)
@settings(max_examples=100, deadline=None)
@given(rows=int_matrices(square=True))
def test_bareiss_det(mod, rows):
    assert mod.bareiss_det([r[:] for r in rows]) == leibniz_det(rows)


@pytest.mark.parametrize("mod", BACKENDS)
@settings(max_examples=100, deadline=None)
@given(rows=int_matrices(entries=big))
def test_rank_mod_p_never_exceeds_rank(mod, rows):
    assert mod.rank_mod_p([r[:] for r in rows], kernels.PRIME) <= naive_rank(rows)


@pytest.mark.parametrize("mod", BACKENDS)
def test_rank_mod_p_sees_small_prime_collapse(mod):
    assert mod.rank_mod_p([[1, 2], [3, 6 + 7]], 7) == 1
    assert mod.rank_mod_p([[1, 2], [3, 6 + 7]], kernels.PRIME) == 2


@pytest.mark.parametrize("mod", BACKENDS)
def test_edge_cases(mod):
    assert mod.bareiss_rank([[0, 0], [0, 0]]) == 0
    assert mod.bareiss_det([[0, 1], [1, 0]]) == -1
    assert mod.bareiss_det([[2]]) == 2
    assert mod.rank_mod_p([[-1]], kernels.PRIME) == 1


def test_backends_agree_on_structure_matrices():
    from quadnil.family import build_B

    rows = [[int(x) for x in r] for r in build_B(6).evaluate({t: t * (-1) ** t for t in range(1, 21)})]
    results = {m.values[0].__name__: m.values[0].bareiss_rank([r[:] for r in rows]) for m in BACKENDS}
    assert set(results.values()) == {naive_rank(rows)}


def test_pure_python_switch():
    env = dict(os.environ, QUADNIL_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import quadnil.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("python", "cython")
