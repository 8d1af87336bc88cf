from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from partfam import Partition, builtin_dataset

# distance matrix of the 10-part problem as printed (upper triangle, 6 decimals)
P2_DISTANCE_UPPER = [
    [0.185185, 0.098765, 0.185185, 0.061728, 0.209877, 0.259259, 0.333333, 0.185185, 0.271605],
    [0.185185, 0.197531, 0.222222, 0.17284, 0.17284, 0.17284, 0.222222, 0.209877],
    [0.160494, 0.111111, 0.209877, 0.259259, 0.283951, 0.234568, 0.271605],
    [0.197531, 0.197531, 0.246914, 0.17284, 0.320988, 0.185185],
    [0.246914, 0.271605, 0.345679, 0.197531, 0.283951],
    [0.197531, 0.197531, 0.246914, 0.209877],
    [0.320988, 0.148148, 0.08642],
    [0.37037, 0.259259],
    [0.185185],
]

# responses of the nine L9 runs as printed
L9_RESPONSES = [5.44289, 5.4903, 5.50745, 5.45195, 5.49802, 5.524, 5.54252, 5.52575, 5.46335]


def p2_distance_matrix():
    d = np.zeros((10, 10))
    for i, row in enumerate(P2_DISTANCE_UPPER):
        for k, v in enumerate(row):
            j = i + 1 + k
            d[i, j] = d[j, i] = v
    return d


def exact_similarity(codes, r=9):
    """Rational similarity matrix, computed independently of the package."""
    codes = [[int(x) for x in row] for row in codes]
    m, k = len(codes), len(codes[0])
    out = [[Fraction(1)] * m for _ in range(m)]
    for i, j in combinations(range(m), 2):
        s = sum(Fraction(1) - Fraction(abs(a - b), r) for a, b in zip(codes[i], codes[j])) / k
        out[i][j] = out[j][i] = s
    return out


def exact_objective(families, sim):
    """Objective over 0-based member lists using rational similarities."""
    total = Fraction(0)
    for fam in families:
        n = len(fam)
        if n == 0:
            continue
        pair = sum((sim[i][j] for i, j in combinations(sorted(fam), 2)), Fraction(0))
        total += pair / (Fraction(1, 1000) + Fraction(n * (n - 1), 2))
    return total


def fams(*groups, n_parts=None):
    """Partition from 1-based family member lists."""
    return Partition.from_families(groups, n_parts, one_based=True)


@pytest.fixture(scope="session")
def datasets():
    return {k: builtin_dataset(k) for k in ("P1", "P2", "P3", "P4", "P5")}


# acceptance bookkeeping: one PASS/FAIL line per criterion in the terminal summary
_CRITERIA: dict = {}
EXCLUDED = {8: "not reproducible: published L9 responses, iteration count and CPU time, convergence trajectory"}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion this test gates")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = getattr(report, "criterion", None)
    if crit is not None:
        _CRITERIA.setdefault(crit, []).append((report.nodeid.split("::")[-1], report.passed))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(set(_CRITERIA) | set(EXCLUDED)):
        if n in EXCLUDED:
            tr.write_line(f"criterion {n}: EXCLUDED ({EXCLUDED[n]})")
            continue
        results = _CRITERIA[n]
        failed = [name for name, ok in results if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(results) - len(failed)}/{len(results)} checks"
        if failed:
            detail += "; failing: " + ", ".join(failed)
        tr.write_line(f"criterion {n}: {status} ({detail})")
