import pytest
from hypothesis import settings

from lbw.interface import load_corpus

settings.register_profile("lbw", deadline=None, max_examples=60)
settings.load_profile("lbw")

CORPUS = ["a4", "bilattices", "constant", "implication", "joins", "lattices", "semilattices"]


@pytest.fixture(scope="session")
def corpus():
    return {n: load_corpus(n) for n in CORPUS}


# -- acceptance reporting ----------------------------------------------------------

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit): acceptance criterion with a time limit in seconds")
    config.stash[_RESULTS] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title, limit = mark.args
    line = f"criterion {number:>2}: {'PASS' if rep.passed else 'FAIL'}  {title}  ({rep.duration:.1f}s, limit {limit}s)"
    item.config.stash[_RESULTS][number] = line


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_RESULTS]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
