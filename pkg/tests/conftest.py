import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from minkchen import rotational as rot
from minkchen.registry import BY_KEY

settings.register_profile(
    "minkchen", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("minkchen")


@pytest.fixture(scope="session")
def registry_profile():
    cache = {}

    def get(key):
        if key not in cache:
            cache[key] = BY_KEY[key].profile()
        return cache[key]

    return get


@pytest.fixture(scope="session")
def registry_patch(registry_profile):
    def get(key):
        return rot.build(registry_profile(key))

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def mixed_regime_profile():
    """Euclidean profile whose axis-plane projection is straight for u < 0 only."""
    from scipy.integrate import solve_ivp

    from minkchen.curve import ProfileCurve

    def rhs(u, y):
        rho = np.sqrt(1.0 - (0.2 * u) ** 2)
        th = 2.0 * u ** 3 if u > 0 else 0.0
        return [rho * np.cos(th), rho * np.sin(th)]

    sol = solve_ivp(rhs, (-1.0, 1.0), [0.0, 0.0], dense_output=True, rtol=1e-12, atol=1e-13)
    us = np.linspace(-1.0, 1.0, 401)
    x1, x2 = sol.sol(us)
    return ProfileCurve.from_samples("euclidean", us, x1, x2, 1.0 + 0.1 * us ** 2)


# --------------------------------------------------------------------------
# acceptance report

ACCEPTANCE_LOG = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Context manager factory that logs one PASS/FAIL line per acceptance criterion."""
    from contextlib import contextmanager

    log = request.config.stash.setdefault(ACCEPTANCE_LOG, [])

    @contextmanager
    def run(number, title):
        note = {"detail": ""}
        try:
            yield note
        except BaseException as exc:
            line = f"FAIL criterion {number}: {title} ({type(exc).__name__}: {exc})".splitlines()[0]
            log.append(line)
            print(line)
            raise
        line = f"PASS criterion {number}: {title} ({note['detail']})"
        log.append(line)
        print(line)

    return run


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(ACCEPTANCE_LOG, None)
    if log:
        terminalreporter.section("acceptance criteria")
        for line in sorted(log, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
