import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from pslat.lattice import Evaluator

DIM = 8

# -- strategies -----------------------------------------------------------------

small_int = st.integers(min_value=-2, max_value=2)
nonzero_ray = st.lists(small_int, min_size=DIM, max_size=DIM).filter(any).map(tuple)
ray_sets = st.lists(nonzero_ray, min_size=1, max_size=12)
# for laws mixing three cones: intersections of 12-ray cones can have thousands of rays
small_ray_sets = st.lists(nonzero_ray, min_size=1, max_size=8)
# nonnegative directions give pointed cones more often, which exercises the DD
# adjacency path rather than the lineality path
nonneg_ray = st.lists(st.integers(0, 3), min_size=DIM, max_size=DIM).filter(any).map(tuple)
nonneg_ray_sets = st.lists(nonneg_ray, min_size=1, max_size=12)

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=6)
rat_vec = st.lists(rationals, min_size=DIM, max_size=DIM).map(tuple)


def random_point(rng: random.Random, lo=-2, hi=4, nonneg=False) -> tuple:
    lo = 0 if nonneg else lo
    return tuple(Fraction(rng.randint(lo * 6, hi * 6), rng.randint(1, 6)) for _ in range(DIM))


@pytest.fixture(scope="session")
def evaluator():
    return Evaluator()


# -- acceptance summary -----------------------------------------------------------

_criteria: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for kw in report.keywords:
        if kw.startswith("criterion_"):
            _criteria.setdefault(int(kw.split("_")[1]), []).append(report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            item.keywords[f"criterion_{m.args[0]}"] = True


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcomes = _criteria[n]
        verdict = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict} ({len(outcomes)} checks)")
