import pytest

from phoml.frontend.parser import parse_expr
from phoml.syntax import Sort

# filled by tests/test_acceptance.py, echoed at the end of the run
ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: one acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"CRITERION {n:>2} {'PASS' if ok else 'FAIL'}  {detail}")


SORTS = {"t": Sort.TERM, "p": Sort.PROOF, "e": Sort.PATH}


def read(text, **free):
    """Parse ``text``; keyword arguments give free names as ``name="t"|"p"|"e"``."""
    return parse_expr(text, {k: SORTS[v] for k, v in free.items()}).expr


@pytest.fixture
def rd():
    return read
