import mpmath
import pytest
from hypothesis import settings

settings.register_profile("qiw", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("qiw")


@pytest.fixture(autouse=True)
def working_precision():
    """Run every test at 256 bits so helper arithmetic in tests is not done at 53."""
    with mpmath.workprec(256):
        yield



ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
