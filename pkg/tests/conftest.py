import sys
from pathlib import Path

import numpy as np
import pytest

from regionxfer import _kernels

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"
KERNEL_NAMES = ("nearest_sites", "nms", "hysteresis", "bfs_refine")

# criterion id -> (passed, description); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(params=sorted(_kernels.BACKENDS))
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    impl = _kernels.BACKENDS[request.param]
    for name in KERNEL_NAMES:
        monkeypatch.setattr(_kernels, name, getattr(impl, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    terminalreporter.write_line(f"kernel backend: {_kernels.BACKEND}")
    for key in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] AC{key:>2}: {text}")
