import numpy as np
import pytest

from giantbic import Geometry, ModelParams, build_hamiltonian, diagonalize


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line[1])


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def record(number: int, title: str, passed: bool, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else "")
        request.config._acceptance_lines.append((number, line))
        print(line)
        assert passed, line

    return record


@pytest.fixture(scope="session")
def reference_params():
    """xi = 1, g = 0.1 xi, Omega = omega_c, N_c = 4 x 501."""
    return ModelParams(xi=1.0, omega_c=0.0, g=0.1, Omega=0.0, N_c=2004)


@pytest.fixture(scope="session")
def ideal_geometry():
    return Geometry(x1=0.0, x2=2.0, n1=2.0, n2=2.0)


@pytest.fixture(scope="session")
def ideal_eigensystem(reference_params, ideal_geometry):
    return diagonalize(build_hamiltonian(reference_params, ideal_geometry))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
