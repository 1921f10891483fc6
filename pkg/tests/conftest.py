import numpy as np
import pytest

from wickshift.spectral_core import FourierCoeffs


def random_coeffs(rng, max_mode, dense=False):
    """Random complex data on ``|n| <= max_mode``; sparse supports unless ``dense``."""
    modes = np.arange(-max_mode, max_mode + 1)
    if not dense:
        modes = modes[rng.random(len(modes)) < 0.6]
        if len(modes) == 0:
            modes = np.array([0])
    vals = rng.standard_normal(len(modes)) + 1j * rng.standard_normal(len(modes))
    return FourierCoeffs.from_arrays(modes, vals)


@pytest.fixture
def rng():
    return np.random.default_rng(20240311)


#: criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
