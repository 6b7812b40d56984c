import sys

import numpy as np
import pytest

from isotherm.charges import ChargeSet, GGEFamily
from isotherm.gibbs import GibbsFamily
from isotherm.operators import DensityMatrix, HermitianOperator


@pytest.fixture
def rng():
    return np.random.default_rng(20240824)


@pytest.fixture
def qubit():
    """Two-level family with gap 1."""
    return GibbsFamily(HermitianOperator.diagonal([0.0, 1.0]))


@pytest.fixture
def qutrit():
    return GibbsFamily(HermitianOperator.diagonal([0.0, 1.0, 2.0]))


@pytest.fixture
def degenerate_qutrit():
    """Two-fold degenerate ground space: ground entropy floor ln 2."""
    return GibbsFamily(HermitianOperator.diagonal([0.0, 0.0, 1.0]))


@pytest.fixture
def rho_qubit_91():
    """Eigenvalues (0.9, 0.1): the standard closed-form fixture."""
    return DensityMatrix.diagonal([0.1, 0.9])


@pytest.fixture
def charge_family():
    """d = 4, q = 2: Hamiltonian plus one commuting diagonal charge."""
    h = HermitianOperator.diagonal([0.0, 1.0, 2.0, 3.0])
    l1 = HermitianOperator.diagonal([0.0, 1.0, 1.0, 2.0])
    return GGEFamily(ChargeSet((h, l1)))


def pytest_terminal_summary(terminalreporter):
    # echo the acceptance verdicts so they survive output capture
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "VERDICT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
