import json
import math

import numpy as np
import pytest

from conftest import SYMMETRIC_P, random_p
from twistor4p.errors import DepthCapError, PathSingularityError
from twistor4p.iterints import (anchor_residuals, log_ratio_c, log_ratio_s, omega_closed,
                                omega_depth1_exact, omega_table, omega_tables, parse_word,
                                shuffle_residual, words, zeta3)
from twistor4p.potential import ModuliConfig, omega_forms

ZETA3 = 1.2020569031595942


@pytest.fixture(scope="module")
def symmetric_tables():
    return omega_tables(ModuliConfig(SYMMETRIC_P, 1, 0), 3)


def nested_depth2(cfg, endpoint, j, k, n=200):
    """Omega_jk(endpoint) = int_0^1 Omega_j(s e) omega_k(s e) e ds by Gauss-Legendre."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    s = 0.5 * (nodes + 1)
    inner = np.array([omega_depth1_exact(cfg, si * endpoint)[j - 1] for si in s])
    outer = omega_forms(cfg.punctures, s * endpoint)[k - 1] * endpoint
    return 0.5 * np.sum(weights * inner * outer)


def test_words_and_parsing():
    assert len(list(words(3))) == 3 + 9 + 27
    assert parse_word("213") == (2, 1, 3) == parse_word([2, 1, 3])
    with pytest.raises(ValueError):
        parse_word("14")


def test_anchor_values(symmetric_tables):
    omega, theta = symmetric_tables
    for r in anchor_residuals(omega, theta).values():
        assert r < 1e-10
    assert abs(omega[3] - math.pi * 1j) < 1e-10
    assert abs(theta[2] + math.pi * 1j) < 1e-10
    assert omega[()] == 1


def test_symmetric_depth_two_values(symmetric_tables):
    omega, theta = symmetric_tables
    assert abs(omega[(2, 1)] + math.pi * 1j * math.log(2)) < 1e-10
    assert abs(theta[(3, 1)] - math.pi * 1j * math.log(2)) < 1e-10
    assert abs(omega[(3, 3, 3)] + 1j * math.pi ** 3 / 6) < 1e-9
    # symmetry between the two endpoints
    assert abs(theta[(3, 1)] + omega[(2, 1)]) < 1e-10
    assert abs(theta[(3, 2)] + omega[(2, 3)]) < 1e-10


def test_closed_forms_symmetric():
    cfg = ModuliConfig(SYMMETRIC_P, 1, 0)
    assert abs(omega_closed(cfg, "21") + math.pi * 1j * math.log(2)) < 1e-14
    assert abs(omega_closed(cfg, "31") - math.pi * 1j * math.log(2)) < 1e-14
    with pytest.raises(KeyError):
        omega_closed(cfg, "12")


def test_closed_forms_random(rng):
    for _ in range(5):
        cfg = ModuliConfig(random_p(rng), 1, 0)
        omega, theta = omega_tables(cfg, 2)
        assert abs(omega[(2, 1)] - omega_closed(cfg, "21")) < 1e-9
        assert abs(theta[(3, 1)] - omega_closed(cfg, "31")) < 1e-9
        assert log_ratio_s(cfg.p) == pytest.approx(omega[(2, 1)].imag / (2 * math.pi), abs=1e-9)
        assert log_ratio_c(cfg.p) == pytest.approx(-theta[(3, 1)].imag / (2 * math.pi), abs=1e-9)


def test_depth_one_exact(rng):
    cfg = ModuliConfig(random_p(rng), 1, 0)
    for ep in (1.0, 1j):
        table = omega_table(cfg, ep, 1)
        assert np.allclose(table.level(1), omega_depth1_exact(cfg, ep), atol=1e-10, rtol=0)


def test_nested_quadrature_oracle(rng):
    cfg = ModuliConfig(0.9 + 1.1j, 1, 0)
    for ep in (1.0, 1j):
        table = omega_table(cfg, ep, 2)
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                assert abs(table[(j, k)] - nested_depth2(cfg, ep, j, k)) < 1e-9


def test_shuffle(rng):
    for _ in range(3):
        cfg = ModuliConfig(random_p(rng), 1, 0)
        for table in omega_tables(cfg, 3):
            assert shuffle_residual(table) < 1e-8
            for j in (1, 2, 3):
                assert abs(table[(j, j)] - table[j] ** 2 / 2) < 1e-9
    with pytest.raises(ValueError):
        shuffle_residual(omega_table(cfg, 1.0, 1))


def test_omega_identity_random(rng):
    for _ in range(3):
        cfg = ModuliConfig(random_p(rng), 1, 0)
        omega, theta = omega_tables(cfg, 2)
        lhs = omega[(2, 3)] + theta[(3, 2)]
        rhs = omega[(2, 1)] + theta[(3, 1)]
        assert abs(lhs - rhs) < 1e-8


def test_tolerance_halving(rng):
    cfg = ModuliConfig(random_p(rng), 1, 0)
    a = omega_table(cfg, 1.0, 3, tol=1e-11)
    b = omega_table(cfg, 1.0, 3, tol=5e-12)
    for w in a.values:
        assert abs(a[w] - b[w]) <= 10 * max(a.err(w), 1e-13)


def test_errors():
    cfg = ModuliConfig(SYMMETRIC_P, 1, 0)
    with pytest.raises(DepthCapError, match="depth cap"):
        omega_table(cfg, 1.0, 7)
    with pytest.raises(DepthCapError):
        omega_table(cfg, 1.0, 2)[(1, 2, 3)]
    near = ModuliConfig(1 + 0.02j, 1, 0)
    with pytest.raises(PathSingularityError, match="path-singularity"):
        omega_table(near, 1.0, 2)


def test_json_dump():
    table = omega_table(ModuliConfig(SYMMETRIC_P, 1, 0), 1j, 2)
    data = json.loads(table.dumps())
    assert data["endpoint"] == "i" and data["depth"] == 2
    assert len(data["entries"]) == 12
    e = {d["word"]: complex(d["re"], d["im"]) for d in data["entries"]}
    assert e["2"] == table[2]


def test_zeta3():
    assert abs(zeta3() - ZETA3) < 1e-14
    assert abs(zeta3(6) - zeta3(8)) < 1e-14
    partial = [math.fsum(1 / k ** 3 for k in range(1, n + 1)) for n in (10, 100, 1000)]
    assert partial[0] < partial[1] < partial[2] < zeta3()
    assert zeta3() - partial[2] < 1 / (2 * 1000 ** 2)
