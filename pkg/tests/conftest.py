import pytest

from auditlab.backend import get_suite
from auditlab.rng import RandomStream


@pytest.fixture(scope="session")
def real():
    return get_suite("real")


@pytest.fixture(scope="session")
def mock():
    return get_suite("mock")


@pytest.fixture(params=["mock", "real"], scope="session")
def suite(request):
    return get_suite(request.param)


@pytest.fixture
def stream():
    return RandomStream(b"test-stream")


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
