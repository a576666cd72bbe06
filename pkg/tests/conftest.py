"""Shared fixtures: the worked examples as collections, random generators,
and a terminal-summary hook that prints one line per acceptance criterion."""

import random

import pytest

from foldbetti import normalize


@pytest.fixture
def example_2_5():
    """Seven forms in k=3: (x1, x1, x2, x3, x1-x3, x2+x3, x1+2x2+5x3)."""
    raw = [
        ((1, 0, 0), 1),
        ((1, 0, 0), 1),
        ((0, 1, 0), 1),
        ((0, 0, 1), 1),
        ((1, 0, -1), 1),
        ((0, 1, 1), 1),
        ((1, 2, 5), 1),
    ]
    return normalize(raw, 3)


@pytest.fixture
def example_4_3():
    """(x1, x1, x1, x2, x2) in k=2."""
    return normalize([((1, 0), 3), ((0, 1), 2)], 2)


@pytest.fixture
def example_3_6():
    """The eight-line arrangement with two 4-fold points on the line x1."""
    raw = [
        ((1, 0, 0), 1),
        ((1, 0, -1), 1),
        ((1, 0, -2), 1),
        ((1, 0, -3), 1),
        ((0, 1, 0), 1),
        ((1, -1, 0), 1),
        ((1, -2, 0), 1),
        ((1, 1, -2), 1),
    ]
    return normalize(raw, 3)


def make_random_collection(rng, max_k=3, max_n=8, coeff_bound=3, max_mult=3):
    """Random collection: k <= max_k, total multiplicity <= max_n."""
    k = rng.randint(1, max_k)
    while True:
        raw = []
        total = 0
        for _ in range(rng.randint(1, 4)):
            coeffs = tuple(rng.randint(-coeff_bound, coeff_bound) for _ in range(k))
            mult = rng.randint(1, max_mult)
            mult = min(mult, max_n - total)
            if mult < 1:
                break
            raw.append((coeffs, mult))
            total += mult
        try:
            return normalize(raw, k)
        except ValueError:
            continue


def make_random_arrangement(rng, n, k=3, coeff_bound=3, require_rank=3):
    """Random simple arrangement: n pairwise non-proportional forms."""
    while True:
        raw = []
        for _ in range(4 * n):
            coeffs = tuple(rng.randint(-coeff_bound, coeff_bound) for _ in range(k))
            raw.append((coeffs, 1))
        try:
            sigma = normalize(raw, k)
        except ValueError:
            continue
        if sigma.t < n:
            continue
        picked = [(form.coeffs, 1) for form, _ in rng.sample(list(sigma.groups), n)]
        candidate = normalize(picked, k)
        from foldbetti.matroid import full_rank

        if candidate.t == n and full_rank(candidate) == require_rank:
            return candidate


@pytest.fixture
def random_collection():
    return make_random_collection


@pytest.fixture
def random_arrangement():
    return make_random_arrangement


@pytest.fixture
def rng():
    return random.Random(20250810)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = {}
    for status, mark in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid:
                name = nodeid.split("::test_criterion_")[-1]
                number = name.split("_")[0]
                label = name[len(number) + 1 :]
                lines[int(number)] = "criterion %2d %-38s %s" % (int(number), label, mark)
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
