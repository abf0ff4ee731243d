import cmath
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from twistor4p import ModuliConfig

settings.register_profile("default", deadline=None, max_examples=30,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SYMMETRIC_P = cmath.exp(0.25j * math.pi)

# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE = {}


def random_p(rng) -> complex:
    return complex(*rng.uniform(0.3, 2.0, 2))


def random_uv(rng, rmin=0.3, rmax=2.0):
    r = rng.uniform(rmin, rmax)
    theta = rng.uniform(0.15, math.pi / 2 - 0.15)
    a, b = rng.uniform(0, 2 * math.pi, 2)
    return r * math.cos(theta) * cmath.exp(1j * a), r * math.sin(theta) * cmath.exp(1j * b)


def random_config(rng, **kw) -> ModuliConfig:
    return ModuliConfig(random_p(rng), *random_uv(rng, **kw))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def symmetric_cfg():
    return ModuliConfig(SYMMETRIC_P, 1.0, 0.3 + 0.2j)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
