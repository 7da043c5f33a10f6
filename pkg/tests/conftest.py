import sys
from pathlib import Path

import numpy as np
import pytest

from qinterf import channels as ch

FIXTURES = Path(__file__).parent / "fixtures"


def random_density(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return ch.DensityMatrix(d, m / np.trace(m).real)


def random_unitary(d, rng):
    return ch.random_isometry(d, d, rng)


def hs_close(a, b, tol):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) <= tol


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
