import numpy as np
import pytest

from ccffs.dataset import from_arrays

_ACCEPTANCE = []


def random_instance(seed, n_max=10, m_max=4, N_range=(10, 60)):
    """Continuous random (X, Y) with N >= n + m + 2 and some real dependence."""
    rng = np.random.default_rng(seed)
    N = int(rng.integers(N_range[0], N_range[1] + 1))
    m = int(rng.integers(1, m_max + 1))
    n = int(rng.integers(2, max(2, min(n_max, N - m - 2)) + 1))
    X = rng.standard_normal((N, n)) * rng.uniform(0.5, 3.0, n) + rng.uniform(-2, 2, n)
    B = rng.standard_normal((n, m))
    Y = X @ B * 0.3 + rng.standard_normal((N, m))
    return X, Y


def random_dataset(seed, **kwargs):
    X, Y = random_instance(seed, **kwargs)
    return from_arrays(X, Y)


@pytest.fixture
def acceptance_log():
    def record(name, passed, detail=""):
        _ACCEPTANCE.append((name, passed, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  {detail}".rstrip())
