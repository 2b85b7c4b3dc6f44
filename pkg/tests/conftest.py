import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from arraycontrol.scenarios import flat_top_array, random_dipole_array

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def derived():
    return json.loads((FIXTURES / "derived.json").read_text())


@pytest.fixture(scope="session")
def dipole_array():
    return random_dipole_array()


@pytest.fixture(scope="session")
def flat_array():
    return flat_top_array()


def random_state(rng, n):
    """Random weight, control and beam-axis steering vectors of length n."""
    z = rng.standard_normal((3, n)) + 1j * rng.standard_normal((3, n))
    return z[0], z[1], z[2]


def rel_err(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(b))), 1e-300))


ACCEPTANCE_LINES: list[str] = []


def record_criterion(label, ok, detail=""):
    line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
