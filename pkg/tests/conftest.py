from fractions import Fraction

import pytest

from homaloid.cayley_dickson import builtin_catalog, catalog_entry
from homaloid.cli import cached_analyze

SEED = 42
HERM3 = ("herm3_R", "herm3_C", "herm3_H", "herm3_O")
EKP_ENTRIES = ("triple_product", "linear_times_quadric") + HERM3


def F(*xs):
    return [Fraction(x) for x in xs]


@pytest.fixture(scope="session")
def catalog():
    return {e.name: e for e in builtin_catalog()}


@pytest.fixture(scope="session")
def verdict():
    """Memoized ``analyze`` per catalog entry name (herm3_O takes minutes)."""

    def get(name):
        return cached_analyze(catalog_entry(name).form, SEED)

    return get


@pytest.fixture(scope="session")
def severi_for():
    """Memoized ``severi_report`` per catalog entry name."""
    from homaloid.severi import severi_report

    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = severi_report(catalog_entry(name), cached_analyze(catalog_entry(name).form, SEED).fstar,
                                        seed=0, samples=10, fiber_points=3)
        return cache[name]

    return get


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    def rec(number: int, ok: bool, detail: str):
        ACCEPTANCE[number] = (ok, detail)

    return rec


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
