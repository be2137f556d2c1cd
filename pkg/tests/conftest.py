import random
from fractions import Fraction

import numpy as np
import pytest

_ACCEPTANCE = []


def random_rational(rng, nonzero=False):
    while True:
        v = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if v or not nonzero:
            return v


def random_lower(rng, n=5):
    L = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            L[i, j] = Fraction(0) if j > i else random_rational(rng, nonzero=(i == j))
    return L


def random_invertible(rng, n, lo=-3, hi=3):
    while True:
        A = np.array([[Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)],
                     dtype=object)
        from liecontract.linalg import det

        if det(A) != 0:
            return A


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def criterion():
    """Record an acceptance-criterion outcome for the terminal summary."""

    def record(label, ok, detail=""):
        _ACCEPTANCE.append((label, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
