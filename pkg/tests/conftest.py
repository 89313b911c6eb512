import sys
import numpy as np
import pytest

from vortexpath import bundle as bd
from vortexpath import geometry as geo
from vortexpath.equation import Family
from vortexpath.solver import PathSpec, continue_path

VBMA = Family("vbma", {"r1": 3, "r2": 2})
VBMA_PATH = PathSpec(((0.0, 0.0), (0.0, 1.0)), max_step=0.1)


@pytest.fixture(scope="session")
def g64():
    return geo.make_grid(64)


@pytest.fixture(scope="session")
def g128():
    return geo.make_grid(128)


@pytest.fixture(scope="session")
def bg64(g64):
    return bd.make_background(g64, 0.5)


@pytest.fixture(scope="session")
def bg128(g128):
    return bd.make_background(g128, 0.5)


@pytest.fixture(scope="session")
def vbma_states(bg64):
    return continue_path(VBMA_PATH, VBMA, bg64)


def smooth_field(g, seed, amplitude=0.2, kmax=3):
    """Smooth random periodic field with a few low modes."""
    rng = np.random.default_rng(seed)
    x, y = g.coords
    out = np.zeros(g.shape)
    for kx in range(-kmax, kmax + 1):
        for ky in range(kmax + 1):
            out += rng.normal() / (1 + kx * kx + ky * ky) * np.cos(2 * np.pi * (kx * x + ky * y) + rng.uniform(0, 2 * np.pi))
    return amplitude * out / np.max(np.abs(out))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_line(i))
