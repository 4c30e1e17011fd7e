import json
import pathlib
import random
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from quadnil.family import Assignment, build_B, num_params  # noqa: E402
from quadnil.linalg import rank_exact  # noqa: E402

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def printed():
    """Matrices and tables as printed, transcribed token by token."""
    return json.loads((DATA / "printed.json").read_text())


def random_full_rank_assignment(d, rng, lo=-5, hi=5):
    """Dense random assignment of nonzero integers, resampled until C[d] has rank d."""
    C = build_B(d)
    while True:
        values = {t: rng.choice([x for x in range(lo, hi + 1) if x]) for t in range(1, num_params(d) + 1)}
        asg = Assignment(d, values)
        if rank_exact(C.evaluate(asg)) == d:
            return asg


def random_rational(rng, bound=9):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


@pytest.fixture
def rng():
    return random.Random(20240611)


# -- acceptance summary -----------------------------------------------------

ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE_RESULTS[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        outcome = ACCEPTANCE_RESULTS.get(f"test_criterion_{n:02d}")
        if outcome is None:
            continue
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  {title}")
