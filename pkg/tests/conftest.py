from pathlib import Path

import pytest

from refmon.config import build_representations, load_config

FIXTURES = Path(__file__).parent / "fixtures"

# Filled by test_acceptance; printed once at the end of the run.
ACCEPTANCE_RESULTS: dict[str, tuple[str, str]] = {}


@pytest.fixture
def f1_path():
    return FIXTURES / "f1.conf"


@pytest.fixture
def f2_path():
    return FIXTURES / "f2.conf"


@pytest.fixture
def events_path():
    return FIXTURES / "f1_events.log"


@pytest.fixture
def f1():
    return load_config(FIXTURES / "f1.conf")


@pytest.fixture
def f2():
    return load_config(FIXTURES / "f2.conf")


@pytest.fixture
def f1_reps(f1):
    return build_representations(f1)


@pytest.fixture
def f2_reps(f2):
    return build_representations(f2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (status, detail) in sorted(ACCEPTANCE_RESULTS.items()):
        terminalreporter.write_line(f"{status:<4}  {name}  {detail}")
