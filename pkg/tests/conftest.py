import numpy as np
import pytest

from fastce import GrayImage, _kernels

_ACCEPTANCE_LINES = []


def pytest_configure(config):
    _kernels.warmup()


@pytest.fixture
def criterion():
    """Record one pass/fail line for the acceptance summary."""

    def report(number, passed, detail):
        status = "PASS" if passed else "FAIL"
        _ACCEPTANCE_LINES.append((number, f"[{status}] criterion {number:>2}: {detail}"))
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20170515)


def ramp_image(height, width):
    """Row-major 0..M*N-1 (mod 256) test pattern."""
    return GrayImage((np.arange(height * width) % 256).reshape(height, width).astype(np.uint8))
