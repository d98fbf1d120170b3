import numpy as np
import pytest

from defektum.dossier import bundled
from defektum.geometry import read_structure


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def li4v_ground():
    return read_structure(bundled("li4v_ground_td.xyz"))


@pytest.fixture(scope="session")
def li4v_excited_td():
    return read_structure(bundled("li4v_excited_td.xyz"))


@pytest.fixture(scope="session")
def li4v_excited_c3v():
    return read_structure(bundled("li4v_excited_c3v.xyz"))


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[key])
