from fractions import Fraction
from itertools import product

import pytest


def pascal_rows(n_max):
    """Binomials by additive recurrence only."""
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


def outcome_weight_prob(n, d, x):
    """P(all of boxes 1..d hit) by walking every outcome with exact weights."""
    x = Fraction(x)
    weights = [1 - d / x] + [1 / x] * d
    total = Fraction(0)
    for seq in product(range(d + 1), repeat=n):
        if set(range(1, d + 1)) <= set(seq):
            w = Fraction(1)
            for b in seq:
                w *= weights[b]
            total += w
    return total


@pytest.fixture(scope="session")
def pascal():
    return pascal_rows(64)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
