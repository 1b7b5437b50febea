import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import corpus  # noqa: E402

# criterion number -> (status, description); filled in by test_acceptance
ACCEPTANCE_LINES: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def corpora():
    return {c.name: c for c in corpus.all_corpora()}


@pytest.fixture(scope="session")
def f2(corpora):
    return corpora["F2[x]/(x^2)"]


@pytest.fixture(scope="session")
def f3(corpora):
    return corpora["F3[x]/(x^3)"]


@pytest.fixture(scope="session")
def a2(corpora):
    return corpora["A2 quiver over F2"]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        status, text = ACCEPTANCE_LINES[n]
        terminalreporter.write_line(f"{status} criterion {n}: {text}")
