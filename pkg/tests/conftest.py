import numpy as np
import pytest


def haar_rotation(rng, d):
    """Haar-distributed element of SO(d) via QR with sign correction."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def brute_index_count(d, n):
    """Count chains n >= k1 >= ... >= |k_{d-2}| by direct nesting."""
    if d == 3:
        return 2 * n + 1
    return sum(brute_index_count(d - 1, k) for k in range(n + 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
