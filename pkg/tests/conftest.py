import math

import numpy as np
import pytest

from specenv.fourier import Grid, indicator
from specenv.similarity import build_similarity


@pytest.fixture(scope="session")
def default_grid():
    return Grid(40.0, 4096)


@pytest.fixture(scope="session")
def v_indicator(default_grid):
    return indicator(default_grid, -1, 1)


@pytest.fixture(scope="session")
def similarity_4096(v_indicator):
    # dense N = 4096 build: about 40 s and 2 GB, shared by every test that needs it
    return build_similarity(v_indicator)


@pytest.fixture(scope="session")
def similarity_2048():
    return build_similarity(indicator(Grid(40.0, 2048), -1, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def bandlimited(grid, rng, k=6, width=None):
    """Random combination of Gaussians well inside the window and below a quarter of Nyquist."""
    t = grid.nodes
    width = width or max(1.0, 8 / grid.nyquist)
    out = np.zeros(grid.N, dtype=complex)
    for _ in range(k):
        c = rng.uniform(-grid.R / 8, grid.R / 8)
        w = 1j * rng.uniform(-grid.nyquist / 8, grid.nyquist / 8)
        out += (rng.standard_normal() + 1j * rng.standard_normal()) * np.exp(-((t - c) / width) ** 2 / 2 + w * t)
    return out


# -- acceptance summary -----------------------------------------------------------------

_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def acceptance():
    """Recorder: acceptance(n, part, passed, detail) collects one entry per checked part."""
    def record(n, part, passed, detail):
        _ACCEPTANCE.setdefault(n, []).append((part, bool(passed), detail))
        return bool(passed)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[n]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        detail = "; ".join(f"{p}: {d}{'' if ok else ' [not met]'}" for p, ok, d in parts)
        tr.write_line(f"criterion {n:2d} {status}  {detail}")
