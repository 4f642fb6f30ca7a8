import re

import numpy as np
import pytest


def naive_conv2d(x, w, same=True, correlate=False):
    """Quadruple-loop reference, independent of any vectorized indexing."""
    x = np.asarray(x, float)
    w = np.asarray(w, float)
    n_r, n_c = x.shape
    k = w.shape[0]
    if correlate:
        w = w[::-1, ::-1]
    full = np.zeros((n_r + k - 1, n_c + k - 1))
    for i in range(n_r):
        for j in range(n_c):
            for u in range(k):
                for v in range(k):
                    full[i + u, j + v] += x[i, j] * w[u, v]
    if same:
        h = k // 2
        return full[h:h + n_r, h:h + n_c]
    return full[k - 1:n_r, k - 1:n_c]


def naive_dft(x):
    x = np.asarray(x, complex)
    m = len(x)
    return np.array([sum(x[n] * np.exp(-2j * np.pi * n * q / m) for n in range(m))
                     for q in range(m)])


def naive_circular_conv(a, b):
    m = a.shape[0]
    out = np.zeros((m, m), complex)
    for i in range(m):
        for j in range(m):
            for p in range(m):
                for q in range(m):
                    out[i, j] += a[p, q] * b[(i - p) % m, (j - q) % m]
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" or "test_acceptance" not in rep.nodeid:
                continue
            m = re.search(r"test_criterion_(\d+)_(\w+)", rep.nodeid)
            if m:
                lines.append((int(m.group(1)), m.group(2), outcome.upper()))
    if lines:
        terminalreporter.section("acceptance criteria")
        for num, name, outcome in sorted(lines):
            terminalreporter.write_line(f"criterion {num:>2} {name:<40} {outcome}")
