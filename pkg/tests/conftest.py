import pytest

from hkrlab.graded_algebra import GradedAlgebra

ALGEBRAS = {
    "Q[x]": ([("x", 1)], []),
    "Q[x,y]": ([("x", 1), ("y", 1)], []),
    "Q[x]/(x^2)": ([("x", 1)], ["x^2"]),
    "Q[x]/(x^3)": ([("x", 1)], ["x^3"]),
    "Q[x,y]/(x^2,y^2)": ([("x", 1), ("y", 1)], ["x^2", "y^2"]),
    "Q[x,y]/(y^2-x^3)": ([("x", 2), ("y", 3)], ["y^2 - x^3"]),
}


def make(name):
    gens, rels = ALGEBRAS[name]
    return GradedAlgebra.from_strings(gens, rels)


@pytest.fixture
def qx():
    return make("Q[x]")


@pytest.fixture
def qxy():
    return make("Q[x,y]")


@pytest.fixture
def dual_numbers():
    return make("Q[x]/(x^2)")


# --- acceptance summary: one line per criterion --------------------------------------------

_verdicts = []


def criterion(label):
    def mark(fn):
        fn.criterion = label
        return fn
    return mark


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = getattr(getattr(item, "function", None), "criterion", None)
    if label and (rep.when == "call" or (rep.when == "setup" and not rep.passed)):
        _verdicts.append((label, rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, secs in _verdicts:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  ({secs:.2f} s)")
