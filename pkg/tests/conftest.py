import numpy as np
import pytest

from ballmaps.hermitian import SpectralState


@pytest.fixture
def skewed():
    """diag(1/2, 1/3, 1/6): shifted weights (1/3, 1/6, 1/2)."""
    return SpectralState.from_eigenvalues([1 / 2, 1 / 3, 1 / 6])


@pytest.fixture
def center3():
    return SpectralState.maximally_mixed(3)


def random_hermitian(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def unit(n, i, j):
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1
    return e


ACCEPTANCE = {}


def record(number, title, ok, detail=""):
    """Log one acceptance criterion; the line is printed now and in the summary."""
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
