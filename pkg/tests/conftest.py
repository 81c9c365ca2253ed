import numpy as np
import pytest
from scipy.linalg import expm

from gaussact.symplectic import symplectic_form


def random_symplectic(n, rng, scale=0.4):
    """exp(J H) with H symmetric is symplectic."""
    h = rng.normal(size=(2 * n, 2 * n))
    return expm(scale * symplectic_form(n) @ (h + h.T) / 2)


def random_physical(n, rng, pure=False):
    lam = np.ones(n) if pure else 1.0 + rng.exponential(1.5, size=n)
    s = random_symplectic(n, rng)
    return s @ np.diag(np.repeat(lam, 2)) @ s.T


def fock_thermal_entropy(nbar, dim=200):
    """-sum p log2 p over the truncated Fock distribution of a thermal state."""
    k = np.arange(dim)
    logp = k * np.log(nbar / (nbar + 1.0)) - np.log(nbar + 1.0)
    p = np.exp(logp)
    return float(-np.sum(p * logp) / np.log(2.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20181014)


_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion; printed now and in the summary."""

    def _report(num, ok, detail):
        line = f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
