import json
import math

import numpy as np
import pytest

from conftest import SYMMETRIC_P, random_config
from twistor4p.deformation import (constraint_residual, derive, eval_x, first_order, lax_residual,
                                   lax_solve, pq_matrix_derivative, trace_derivatives)
from twistor4p.iterints import omega_tables
from twistor4p.laurent import PAULI, LaurentPoly, PolyMatrix
from twistor4p.monodromy import segment_path, transport_x
from twistor4p.potential import ModuliConfig, central_values, residues


@pytest.fixture(scope="module")
def generic():
    cfg = ModuliConfig(0.8 + 0.9j, 0.7 - 0.2j, 0.3 + 0.5j)
    return derive(cfg, 3, omega_tables(cfg, 4))


def pauli_sum(coeffs):
    z = LaurentPoly()
    out = PolyMatrix([[z, z], [z, z]])
    for c, m in zip(coeffs, PAULI):
        out = out + PolyMatrix([[c * complex(m[i, k]) for k in range(2)] for i in range(2)])
    return out


def test_first_order_matches_closed_form(rng):
    for _ in range(3):
        cfg = random_config(rng)
        s = derive(cfg, 1)
        closed = first_order(s.cv, s.tables)
        for a, b in zip(s.x[1], closed):
            assert (a - b).norm() < 1e-9


def test_first_order_orthogonal(rng):
    cfg = random_config(rng)
    tables = omega_tables(cfg, 2)
    cv = central_values(cfg)
    xp = first_order(cv, tables)
    dot = sum((a * b for a, b in zip(cv.xbar, xp)), LaurentPoly())
    assert dot.norm() < 1e-10


def test_degrees_and_constraint(generic):
    assert generic.x[0] == generic.cv.xbar
    for n in range(1, generic.N + 1):
        for xj in generic.x[n]:
            assert xj.lo >= 0
            assert xj.hi <= n + 1
        assert constraint_residual(generic, n) < 1e-9 * max(1.0, max(x.norm() for x in generic.x[n]))


def test_truncation_is_bit_identical(generic):
    lower = derive(generic.cfg, 2, generic.tables)
    for n in range(3):
        for a, b in zip(lower.x[n], generic.x[n]):
            assert a.lo == b.lo and np.array_equal(a.coeffs, b.coeffs)
    assert generic.truncate(2).N == 2


def test_trace_derivative_low_orders(generic):
    td = trace_derivatives(generic)
    x1, x2, x3 = generic.cv.xbar
    for key in "pqr":
        assert td[key][0].norm() < 1e-14
    assert (td["p"][1] - 2 * math.pi * x3).norm() < 1e-10
    assert (td["q"][1] - 2 * math.pi * x2).norm() < 1e-10
    assert (td["r"][1] - 2 * math.pi * x1).norm() < 1e-10


def test_second_derivative_formulas(generic):
    td = trace_derivatives(generic)
    omega, theta = generic.tables
    x1, x2, x3 = generic.cv.xbar
    d1, _, d3 = generic.x[1]
    p2 = 4 * math.pi * d3 + 8 * omega[(2, 1)] * (x1 * x2)
    assert (td["p"][2] - p2).norm() < 1e-8
    r2 = 4 * math.pi * d1 - 8 * (omega[(2, 3)] + theta[(3, 2)] + math.pi ** 2) * (x2 * x3)
    assert (td["r"][2] - r2).norm() < 1e-8


def test_star_residual(generic):
    td = trace_derivatives(generic)
    for key in "pqr":
        for n in range(generic.N + 2):
            f = td[key][n]
            assert (f - f.star()).norm() <= 1e-8 * max(1.0, f.norm())


def test_first_transport_derivative(generic):
    omega, theta = generic.tables
    xbar = generic.cv.xbar
    for ep, table in ((1.0, omega), (1j, theta)):
        got = pq_matrix_derivative(generic, 0, ep)
        want = pauli_sum([xbar[j] * table[j + 1] for j in range(3)])
        assert (got - want).norm() < 1e-10
        assert (got[0, 0] + got[1, 1]).norm() < 1e-14


def test_first_transport_derivative_by_finite_difference(generic):
    cfg, lam = generic.cfg, 0.9 * np.exp(0.4j)
    x = np.array([xj(lam) for xj in generic.cv.xbar])
    h = 1e-4
    plus, _ = transport_x(cfg, x, h, segment_path(1.0))
    minus, _ = transport_x(cfg, x, -h, segment_path(1.0))
    fd = (plus - minus) / (2 * h)
    want = pq_matrix_derivative(generic, 0)(lam)
    assert np.max(np.abs(fd - want)) < 1e-6


def test_drop_top_separates_unknown(generic):
    omega = generic.tables[0]
    full = pq_matrix_derivative(generic, 1)
    low = pq_matrix_derivative(generic, 1, drop_top=True)
    top = pauli_sum([generic.x[1][j] * (2 * omega[j + 1]) for j in range(3)])
    assert (full - low - top).norm() < 1e-9


def test_eval_x(generic):
    lam = np.exp(0.3j)
    assert np.allclose(eval_x(generic, 0.0, lam), [x(lam) for x in generic.cv.xbar])
    with pytest.raises(ZeroDivisionError):
        eval_x(generic, 0.1, 0)
    ts = np.array([0.01, 0.02, 0.04])
    res = [abs(np.sum(eval_x(generic, t, lam) ** 2) - 1) for t in ts]
    slope = np.polyfit(np.log(ts), np.log(res), 1)[0]
    assert slope > generic.N + 0.5


def test_refusals():
    with pytest.raises(ValueError, match="r_min"):
        derive(ModuliConfig(SYMMETRIC_P, 0.02, 0.01), 1)
    with pytest.raises(ValueError):
        derive(ModuliConfig(SYMMETRIC_P, 1, 0), 6)
    cfg = ModuliConfig(SYMMETRIC_P, 1, 0.2)
    with pytest.raises(ValueError, match="shallow"):
        derive(cfg, 3, omega_tables(cfg, 2))


def test_axis_configurations_use_stable_route():
    # uv = 0 makes P_1 lose its outer coefficients; the joint route takes over
    s = derive(ModuliConfig(SYMMETRIC_P, 1, 0), 3)
    assert {d["route"] for d in s.diagnostics} == {"joint"}
    for n in range(1, 4):
        assert constraint_residual(s, n) < 1e-9 * max(1.0, max(x.norm() for x in s.x[n]))
    td = trace_derivatives(s)
    for n in range(5):
        assert (td["p"][n] - td["p"][n].star()).norm() <= 1e-8 * max(1.0, td["p"][n].norm())


def test_lax_witness(rng):
    for _ in range(3):
        s = derive(random_config(rng), 1)
        lax = lax_solve(s)
        assert lax.residual < 1e-9
        assert lax_residual(s, lax.X) < 1e-9
        A = residues(s.x[0])[0]
        comm = A.commutator(lax.X)
        assert (comm[0, 0] + comm[1, 1]).norm() < 1e-12
        # X is only determined up to adding g A
        assert lax_residual(s, lax.X + A) < 1e-9


def test_json_dump(generic):
    data = json.loads(generic.dumps())
    assert data["N"] == 3 and len(data["x"]) == 4
    entry = data["x"][1][2]
    back = LaurentPoly([complex(*c) for c in entry["coeffs"]], entry["lo"])
    assert back == generic.x[1][2]
