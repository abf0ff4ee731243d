import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SYMMETRIC_P, random_config, random_uv
from twistor4p.deformation import derive
from twistor4p.errors import DegenerateError
from twistor4p.geometry import (DU, DUB, DV, DVB, cone_coefficient, energy_first_closed,
                                energy_series, energy_t0, eh_metric, eh_normal_form,
                                higgs_matrix, identity_suite, identity_values, is_real_form,
                                metric_from_forms, nahc_t0, nahc_t0_inv, pairing,
                                quaternion_residuals, real_gram, two_form, varpi0_central,
                                varpi_explicit, varpi_first_closed, varpi_series, varpi_t0)
from twistor4p.iterints import omega_tables
from twistor4p.potential import ModuliConfig, central_values, residue_values

finite = st.floats(-2, 2, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


def usable(u, v):
    return abs(u) ** 2 + abs(v) ** 2 > 0.05


def test_two_form_antisymmetric():
    W = two_form({(DU, DV): 2, (DV, DU): 1})
    assert W[DU, DV] == 1 and W[DV, DU] == -1
    assert np.array_equal(W, -W.T)


def test_symplectic_coefficients_by_hand():
    f = varpi_t0(1, 0)
    assert f["omega_J"][DU, DV] == pytest.approx(-32j * math.pi)
    assert f["omega_K"][DU, DV] == pytest.approx(-32 * math.pi)
    assert f["omega_J"][DUB, DVB] == pytest.approx(32j * math.pi)
    # 32 pi i (r^6 + |v|^2) / (rho r^6) at r = 1, v = 0
    assert f["omega_I"][DU, DUB] == pytest.approx(-16j * math.sqrt(2) * math.pi, abs=1e-12)


def test_twisted_form_matches_explicit_expansion(rng):
    for _ in range(10):
        u, v = random_uv(rng)
        a, b = varpi_t0(u, v), varpi_explicit(u, v)
        for key in ("varpi_-1", "varpi_0", "varpi_1"):
            assert np.max(np.abs(a[key] - b[key])) < 1e-12 * np.max(np.abs(a[key]))
        for key in ("omega_I", "omega_J", "omega_K"):
            assert is_real_form(a[key])


def test_constant_coefficient_from_central_values(rng):
    for _ in range(10):
        u, v = random_uv(rng)
        want = varpi_t0(u, v)["varpi_0"]
        assert np.max(np.abs(varpi0_central(u, v) - want)) < 1e-10 * np.max(np.abs(want))
    with pytest.raises(DegenerateError):
        varpi0_central(1, 0)


@given(cplx, cplx)
def test_quaternion_algebra(u, v):
    if not usable(u, v):
        return
    for r in quaternion_residuals(eh_metric(u, v)).values():
        assert r < 1e-12


def test_metric_by_hand():
    g = eh_metric(1, 0)["g"]
    assert g[DU, DUB] == pytest.approx(16 * math.sqrt(2) * math.pi, abs=1e-12)
    assert g[DV, DVB] == pytest.approx(32 * math.sqrt(2) * math.pi, abs=1e-12)


def test_metric_properties(rng):
    for _ in range(10):
        u, v = random_uv(rng)
        m = eh_metric(u, v)
        assert np.max(np.abs(m["g"] - 32 * math.pi * eh_normal_form(u, v))) < 1e-12 * np.max(np.abs(m["g"]))
        R = real_gram(m["g"])
        assert np.max(np.abs(R.imag)) < 1e-10
        assert np.all(np.linalg.eigvalsh(R.real) > 0)
        forms = varpi_t0(u, v)
        for which in "IJK":
            assert np.max(np.abs(metric_from_forms(forms, m, which) - m["g"])) < 1e-10


def test_first_derivative_closed_form(rng):
    cfg = ModuliConfig(0.8 + 0.9j, 0.7 - 0.2j, 0.3 + 0.5j)
    W = varpi_series(cfg, 2)
    closed = varpi_first_closed(cfg)
    assert np.max(np.abs(W[(1, 0)] - closed)) < 1e-6 * np.max(np.abs(closed))
    assert np.max(np.abs(W[(0, 0)] - varpi_t0(cfg.u, cfg.v)["varpi_0"])) < 1e-6
    for m in (1, 2):
        assert np.max(np.abs(W[(m, -1)])) == 0
    assert is_real_form(W[(1, 0)], 1e-8)


def test_first_derivative_closed_form_symmetric():
    # at the symmetric point both logarithms equal -log(2)/2
    cfg = ModuliConfig(SYMMETRIC_P, 0.6 + 0.2j, -0.3 + 0.7j)
    W = varpi_series(cfg, 1)
    closed = varpi_first_closed(cfg)
    assert np.max(np.abs(W[(1, 0)] - closed)) < 1e-6 * np.max(np.abs(closed))


def test_series_guards():
    with pytest.raises(DegenerateError):
        varpi_series(ModuliConfig(SYMMETRIC_P, 1, 0), 1)
    with pytest.raises(ValueError, match="r_min"):
        varpi_series(ModuliConfig(SYMMETRIC_P, 0.04, 0.032), 1, h=0.02)


def test_cone_coefficient_normalization():
    # i du ^ dubar on the cone: W = 32 pi i du ^ dubar has coefficient 1
    W = 32j * math.pi * two_form({(DU, DUB): 1})
    assert cone_coefficient(W, SYMMETRIC_P) == pytest.approx(1)


def test_energy_values(rng):
    assert energy_t0(1, 0) == pytest.approx(8 * math.pi * (1 + math.sqrt(2)))
    cfg = random_config(rng)
    s = derive(cfg, 1)
    E = energy_series(s)
    assert E[0] == pytest.approx(energy_t0(cfg.u, cfg.v), rel=1e-13)
    assert E[1] == pytest.approx(energy_first_closed(cfg, s.tables), rel=1e-7)
    with pytest.raises(DegenerateError, match="energy formula degenerate"):
        energy_series(derive(ModuliConfig(SYMMETRIC_P, 1, 0), 1))


def test_hodge_map_by_hand():
    A = nahc_t0(np.array([[0, 1], [0, 0]]))
    assert np.allclose(A, [[-math.sqrt(2), 1], [-1, math.sqrt(2)]], atol=1e-14)
    assert np.linalg.det(A) == pytest.approx(-1)
    assert np.allclose(nahc_t0_inv(A), [[0, 1], [0, 0]], atol=1e-14)


def test_hodge_map_errors():
    with pytest.raises(ValueError):
        nahc_t0(np.eye(2))
    with pytest.raises(ValueError):
        nahc_t0(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        nahc_t0_inv(np.eye(2))
    with pytest.raises(DegenerateError):
        nahc_t0_inv(np.diag([1.0, -1.0]))


def test_hodge_map_central_values(rng):
    # the sqrt(1 + <Phi, Phi>) i N part is the residue at p_1 built from the constant terms
    for _ in range(5):
        u, v = random_uv(rng)
        psi = higgs_matrix(u, v)
        A = nahc_t0(psi)
        x0 = np.array([x.coeff(0) for x in central_values(u, v).xbar])
        assert np.max(np.abs(A - (psi - psi.conj().T) - residue_values(x0)[0])) < 1e-12


def test_pairing():
    m = np.array([[0, 1], [-1, 0]], dtype=complex)
    assert pairing(m, m) == pytest.approx(1)


def test_identities_symmetric_point():
    tables = omega_tables(ModuliConfig(SYMMETRIC_P, 1, 0), 3)
    omega, theta = tables
    assert abs(omega[(2, 3)] + theta[(3, 2)]) < 1e-9
    assert abs(omega[(2, 1)] + theta[(3, 1)]) < 1e-9
    for key, r in identity_suite(tables).items():
        assert r < 1e-7, key
    vals = identity_values(tables)
    assert abs(vals["I1"] + 1j * math.pi ** 4 / 3) < 1e-6
    with pytest.raises(ValueError):
        identity_suite(omega_tables(ModuliConfig(SYMMETRIC_P, 1, 0), 2))
