import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from hopf_chern.exact import Poly, Q
from hopf_chern.hopf import set_dimension

settings.register_profile(
    "exact", max_examples=30, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")

VARS = ("x1", "x2", "y1_1", "t1")

rationals = st.builds(lambda a, b: Q(a, b), st.integers(-9, 9), st.integers(1, 5))


@st.composite
def polys(draw, names=VARS, max_terms=4, max_exp=2):
    out = Poly.const(draw(rationals))
    for _ in range(draw(st.integers(0, max_terms))):
        term = Poly.const(draw(rationals))
        for name in names:
            e = draw(st.integers(0, max_exp))
            if e:
                term = term * Poly.var(name, e)
        out = out + term
    return out


@pytest.fixture(autouse=True)
def _reset_dimension():
    yield
    set_dimension(1)


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for text in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(text)
