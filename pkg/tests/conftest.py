from __future__ import annotations

import contextlib
import time

import numpy as np
import pytest

from lpcodes import AlgMatrix, GroupSpec, parse_matrix

TANNER_155 = """\
group: C31
x, x^2, x^4, x^8, x^16
x^5, x^10, x^20, x^9, x^18
x^25, x^19, x^7, x^14, x^28
"""

# (number, title, status, seconds) collected from the acceptance suite
_ACCEPTANCE: list[tuple[int, str, str, float]] = []


@pytest.fixture
def tanner_matrix() -> AlgMatrix:
    return parse_matrix(TANNER_155)


@pytest.fixture
def criterion():
    """Context manager that records and prints one PASS/FAIL line per criterion."""

    @contextlib.contextmanager
    def run(number: int, title: str):
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            _ACCEPTANCE.append((number, title, status, elapsed))
            print(f"criterion {number:2d} {status}: {title} ({elapsed:.2f} s)")

    return run


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, elapsed in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:2d} {status}: {title} ({elapsed:.2f} s)")


def random_alg_matrix(rng: np.random.Generator, ell: int, rows: int, cols: int, density: float = 0.3) -> AlgMatrix:
    data = (rng.random((rows, cols, ell)) < density).astype(np.uint8)
    return AlgMatrix(GroupSpec.cyclic(ell), data)
