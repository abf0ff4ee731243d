"""Geometry at and near t = 0.

Two-forms are 4x4 antisymmetric matrices in the coframe (du, dubar, dv, dvbar):
the form sum_{a<b} c_ab e^a ^ e^b is stored as W[a, b] = c_ab = -W[b, a], so
that form(X, Y) = X^T W Y.  Operators on the tangent frame
(d/du, d/dubar, d/dv, d/dvbar) act on component columns.
"""

from __future__ import annotations

import math

import numpy as np

from .deformation import derive
from .errors import DegenerateError
from .iterints import omega_tables, zeta3
from .potential import R_MIN, ModuliConfig, central_values, rho_of

DU, DUB, DV, DVB = range(4)
# block order used by the hermitian displays: (u, v, ubar, vbar)
_BLOCK = [DU, DV, DUB, DVB]


def two_form(entries: dict) -> np.ndarray:
    W = np.zeros((4, 4), dtype=complex)
    for (a, b), c in entries.items():
        W[a, b] += c
        W[b, a] -= c
    return W


def from_blocks(M: np.ndarray) -> np.ndarray:
    """Reorder a matrix given in (u, v, ubar, vbar) order to (u, ubar, v, vbar)."""
    out = np.empty((4, 4), dtype=complex)
    for i, a in enumerate(_BLOCK):
        for j, b in enumerate(_BLOCK):
            out[a, b] = M[i, j]
    return out


def wedge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Two-form a ^ b of two 1-forms given by their four components."""
    return np.outer(a, b) - np.outer(b, a)


def _uv_scalars(u: complex, v: complex):
    u, v = complex(u), complex(v)
    r2 = abs(u) ** 2 + abs(v) ** 2
    if r2 == 0:
        raise ValueError("(u, v) must be nonzero")
    return u, v, r2, rho_of(r2)


# ---------------------------------------------------------------- forms at t = 0

def varpi_t0(u: complex, v: complex) -> dict:
    u, v, r2, rho = _uv_scalars(u, v)
    r6 = r2 ** 3
    ub, vb = u.conjugate(), v.conjugate()
    pi = math.pi
    wI = (32j * pi / (rho * r6)) * two_form({
        (DU, DUB): r6 + abs(v) ** 2,
        (DU, DVB): -ub * v,
        (DUB, DV): u * vb,
        (DV, DVB): r6 + abs(u) ** 2,
    })
    wJ = 32j * pi * two_form({(DU, DV): -1, (DUB, DVB): 1})
    wK = -32 * pi * two_form({(DU, DV): 1, (DUB, DVB): 1})
    return {
        "varpi_-1": wJ + 1j * wK,
        "varpi_0": -2 * wI,
        "varpi_1": -(wJ - 1j * wK),
        "omega_I": wI, "omega_J": wJ, "omega_K": wK,
    }


def varpi_explicit(u: complex, v: complex) -> dict:
    """The same three coefficients written out in (u, v) coordinates directly."""
    u, v, r2, rho = _uv_scalars(u, v)
    r6 = r2 ** 3
    ub, vb = u.conjugate(), v.conjugate()
    c = 64j * math.pi
    return {
        "varpi_-1": c * two_form({(DU, DV): -1}),
        "varpi_0": c * two_form({
            (DU, DUB): -(r6 + abs(v) ** 2) / (rho * r6),
            (DU, DVB): ub * v / (rho * r6),
            (DUB, DV): -u * vb / (rho * r6),
            (DV, DVB): -(r6 + abs(u) ** 2) / (rho * r6),
        }),
        "varpi_1": c * two_form({(DUB, DVB): -1}),
    }


def central_differentials(u: complex, v: complex) -> dict:
    """Wirtinger gradients of the central values' lambda^-1 and lambda^0 coefficients.

    Keys (j, k) for the coefficient of lambda^k in xbar_j; values are the four
    components along (du, dubar, dv, dvbar).
    """
    u, v, r2, rho = _uv_scalars(u, v)
    ub, vb = u.conjugate(), v.conjugate()
    ds = np.array([ub, u, vb, v])
    drho = -ds / (rho * r2 ** 3)
    n = [abs(u) ** 2 - abs(v) ** 2, u * vb + ub * v, -1j * (u * vb - ub * v)]
    dn = [np.array([ub, u, -vb, -v]),
          np.array([vb, v, ub, u]),
          -1j * np.array([vb, -v, -ub, u])]
    out = {}
    for j in range(3):
        out[(j + 1, 0)] = n[j] * drho + rho * dn[j]
    out[(1, -1)] = np.array([v, 0, u, 0])
    out[(2, -1)] = np.array([-u, 0, v, 0])
    out[(3, -1)] = 1j * np.array([u, 0, v, 0])
    return out


def varpi0_central(u: complex, v: complex) -> np.ndarray:
    """Constant coefficient of the twisted form from the central values."""
    cv = central_values(u, v)
    d = central_differentials(u, v)
    x1m = cv.xbar[0].coeff(-1)
    if abs(x1m) < 1e-12:
        raise DegenerateError("central-value formula needs u v != 0")
    x10 = cv.xbar[0].coeff(0)
    a, c = d[(2, -1)], d[(3, -1)]
    return (32 * math.pi / x1m) * (-(x10 / x1m) * wedge(a, c) + wedge(d[(2, 0)], c)
                                   + wedge(a, d[(3, 0)]))


# ---------------------------------------------------------------- metric

def eh_metric(u: complex, v: complex) -> dict:
    """Limit metric Gram matrix and the three complex structures."""
    u, v, r2, rho = _uv_scalars(u, v)
    ub, vb = u.conjugate(), v.conjugate()
    r4, r6 = r2 ** 2, r2 ** 3
    c = 32 * math.pi * math.sqrt(1 + 1 / r4)
    k = 1 / (r2 * (1 + r4))
    G = np.zeros((4, 4), dtype=complex)

    def sym(a, b, val):
        G[a, b] += val
        G[b, a] += val

    sym(DU, DUB, c * (1 - k * u * ub))
    sym(DV, DVB, c * (1 - k * v * vb))
    sym(DU, DVB, -c * k * ub * v)
    sym(DV, DUB, -c * k * u * vb)
    I_op = 1j * from_blocks(np.diag([1, 1, -1, -1]))
    NB = np.array([[-u * vb, r6 + abs(u) ** 2], [-r6 - abs(v) ** 2, ub * v]])
    Z = np.zeros((2, 2))
    J_op = (-1j / (rho * r6)) * from_blocks(np.block([[Z, NB], [-NB.conj(), Z]]))
    K_op = (1 / (rho * r6)) * from_blocks(np.block([[Z, NB], [NB.conj(), Z]]))
    return {"g": G, "I": I_op, "J": J_op, "K": K_op}


def quaternion_residuals(m: dict) -> dict:
    Id = np.eye(4)
    return {
        "I^2+1": float(np.max(np.abs(m["I"] @ m["I"] + Id))),
        "J^2+1": float(np.max(np.abs(m["J"] @ m["J"] + Id))),
        "K^2+1": float(np.max(np.abs(m["K"] @ m["K"] + Id))),
        "IJ-K": float(np.max(np.abs(m["I"] @ m["J"] - m["K"]))),
    }


def gram_from_form(omega: np.ndarray, op: np.ndarray) -> np.ndarray:
    """Bilinear form (X, Y) -> omega(X, op Y) as a matrix."""
    return omega @ op


def metric_from_forms(forms: dict, m: dict, which: str = "I") -> np.ndarray:
    """Metric recovered from a Kahler form; with these displays g = -omega(., op .)."""
    return -gram_from_form(forms["omega_" + which], m[which])


# columns: d/da, d/db, d/dc, d/dd for u = a + ib, v = c + id
_REAL_FRAME = np.array([[1, 1j, 0, 0], [1, -1j, 0, 0], [0, 0, 1, 1j], [0, 0, 1, -1j]])
_SWAP = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def real_gram(G: np.ndarray) -> np.ndarray:
    """The Gram matrix in the real frame of R^4."""
    return _REAL_FRAME.T @ G @ _REAL_FRAME


def is_real_form(W: np.ndarray, tol: float = 1e-12) -> bool:
    """A real two-form has conj(W) equal to W with holomorphic and antiholomorphic slots swapped."""
    return bool(np.max(np.abs(W.conj() - _SWAP @ W @ _SWAP)) <= tol * max(1.0, np.max(np.abs(W))))


def eh_normal_form(u: complex, v: complex) -> np.ndarray:
    """Gram matrix of the rank-two Eguchi-Hanson metric (parameter a = 1) at (u, v).

    Written from the Kahler potential sqrt(r^4 + 1) + log(r^2 / (1 + sqrt(r^4 + 1))),
    whose complex Hessian gives g(d_a, d_bbar) = d_a d_bbar of the potential.
    """
    u, v, r2, _ = _uv_scalars(u, v)
    s = math.sqrt(r2 * r2 + 1)
    # potential F(r2): F' = s / r2, F'' = -1 / (r2^2 s)
    f1 = s / r2
    f2 = -1 / (r2 * r2 * s)
    z = [u, v]
    H = np.array([[f1 * (a == b) + f2 * z[a].conjugate() * z[b] for b in range(2)]
                  for a in range(2)])
    G = np.zeros((4, 4), dtype=complex)
    hol, anti = [DU, DV], [DUB, DVB]
    for a in range(2):
        for b in range(2):
            G[hol[a], anti[b]] = H[a, b]
            G[anti[b], hol[a]] = H[a, b]
    return G


# ---------------------------------------------------------------- t-derivatives

def _fd_weights(h: float):
    """Offsets and weights of the Richardson-combined fourth-order central difference."""
    def d4(step):
        return {2 * step: -1 / (12 * step), step: 8 / (12 * step),
                -step: -8 / (12 * step), -2 * step: 1 / (12 * step)}
    w = {}
    for off, c in d4(h / 2).items():
        w[off] = w.get(off, 0.0) + 16 * c / 15
    for off, c in d4(h).items():
        w[off] = w.get(off, 0.0) - c / 15
    return sorted(w.items())


def _poly_array(series, L: int) -> np.ndarray:
    """arr[j, m, d] = coefficient of t^m lambda^d in lambda x_{j+1}(t, lambda)."""
    T = series.N + 1
    arr = np.zeros((3, T, L), dtype=complex)
    for m in range(T):
        for j, xj in enumerate(series.taylor(m)):
            arr[j, m] = xj.window(-1, L - 2)
    return arr


def _bmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated product of bivariate series a[..., m, d] * b[..., m, d]."""
    T, L = a.shape[-2:]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for m in range(T):
        for d in range(L):
            out[..., m:, d:] += a[..., m:m + 1, d:d + 1] * b[..., :T - m, :L - d]
    return out


def _binv(a: np.ndarray) -> np.ndarray:
    T, L = a.shape
    a00 = a[0, 0]
    if abs(a00) < 1e-300:
        raise ZeroDivisionError("constant term vanishes")
    g = np.zeros((T, L), dtype=complex)
    for m in range(T):
        for d in range(L):
            if m == 0 and d == 0:
                g[0, 0] = 1 / a00
                continue
            acc = 0j
            for mm in range(m + 1):
                for dd in range(d + 1):
                    if mm or dd:
                        acc += a[mm, dd] * g[m - mm, d - dd]
            g[m, d] = -acc / a00
    return g


def varpi_series(cfg: ModuliConfig, N: int, h: float = 1e-3, kmax: int = 2,
                 tables: tuple | None = None) -> dict:
    """t-derivatives of the lambda-coefficients of 32 pi dP2 ^ dP3 / (lambda P1), P_j = lambda x_j.

    Returns {(m, k): W} for m = 0..N and k = -1..kmax, where W is the two-form
    of the k-th lambda-coefficient of the m-th t-derivative.  The (u, v)
    derivatives are finite differences; the t-dependence is exact.
    """
    u, v = cfg.u, cfg.v
    if abs(u * v) < 1e-6:
        raise DegenerateError("twisted form expansion needs u v != 0")
    if tables is None:
        tables = omega_tables(cfg, N + 1)
    L = kmax + 2
    base = _poly_array(derive(cfg, N, tables), L)
    grads = np.zeros((4,) + base.shape, dtype=complex)
    real = np.zeros((4,) + base.shape, dtype=complex)
    dirs = [1, 1j]
    for axis, (which, e) in enumerate([(0, d) for d in dirs] + [(1, d) for d in dirs]):
        for off, w in _fd_weights(h):
            uu = u + off * e if which == 0 else u
            vv = v + off * e if which == 1 else v
            if math.sqrt(abs(uu) ** 2 + abs(vv) ** 2) < R_MIN:
                raise ValueError("finite-difference stencil leaves r >= r_min")
            real[axis] += w * _poly_array(derive(cfg.with_uv(uu, vv), N, tables), L)
    # Wirtinger: d/du = (d/da - i d/db)/2, d/dubar = (d/da + i d/db)/2
    grads[DU] = 0.5 * (real[0] - 1j * real[1])
    grads[DUB] = 0.5 * (real[0] + 1j * real[1])
    grads[DV] = 0.5 * (real[2] - 1j * real[3])
    grads[DVB] = 0.5 * (real[2] + 1j * real[3])
    inv1 = _binv(base[0])
    dP2, dP3 = grads[:, 1], grads[:, 2]
    out = {}
    F = np.zeros((4, 4) + base.shape[1:], dtype=complex)
    for a in range(4):
        for b in range(a + 1, 4):
            wab = _bmul(dP2[a], dP3[b]) - _bmul(dP2[b], dP3[a])
            F[a, b] = 32 * math.pi * _bmul(wab, inv1)
            F[b, a] = -F[a, b]
    for m in range(N + 1):
        for k in range(-1, kmax + 1):
            out[(m, k)] = math.factorial(m) * F[:, :, m, k + 1]
    return out


def cone_restriction(W: np.ndarray, p: complex) -> complex:
    """du ^ dubar coefficient of the pull-back along u -> (u, p u)."""
    Xu = np.array([1, 0, p, 0])
    Xub = np.array([0, 1, 0, np.conj(p)])
    return complex(Xu @ W @ Xub)


def cone_coefficient(W: np.ndarray, p: complex) -> complex:
    """Pull-back of W / (32 pi) to the cone as a multiple of the real form i du ^ dubar."""
    return cone_restriction(W, p) / (32j * math.pi)


def varpi_first_closed(cfg: ModuliConfig, tables: tuple | None = None) -> np.ndarray:
    """Closed form of the first t-derivative of the constant coefficient."""
    if tables is None:
        tables = omega_tables(cfg, 2)
    omega, theta = tables
    ls = omega[(2, 1)].imag / (2 * math.pi)
    # enters with the sign of Im Theta_31, opposite to log|(p^2+1)/(2p)|
    lc = theta[(3, 1)].imag / (2 * math.pi)
    u, v = cfg.u, cfg.v
    ub, vb = u.conjugate(), v.conjugate()
    r2 = cfg.r2
    r4, r8 = r2 ** 2, r2 ** 4
    sp = (ub * v + u * vb) ** 2
    sm = (ub * v - u * vb) ** 2
    au, av = abs(u) ** 2, abs(v) ** 2
    c = 256j * math.pi / r8
    uub = ls * ((-r4 + 3 * sp) * av + r8 * (au - av)) + lc * ((r4 + 3 * sm) * av + r8 * (av - au))
    uvb = (ls * ((r4 - 3 * sp) * ub * v + r8 * (-ub * v - 3 * u * vb))
           + lc * ((-r4 - 3 * sm) * ub * v + r8 * (ub * v - 3 * u * vb)))
    vub = (ls * ((r4 - 3 * sp) * u * vb + r8 * (-u * vb - 3 * ub * v))
           + lc * ((-r4 - 3 * sm) * u * vb + r8 * (u * vb - 3 * ub * v)))
    vvb = ls * ((-r4 + 3 * sp) * au + r8 * (av - au)) + lc * ((r4 + 3 * sm) * au + r8 * (au - av))
    return c * two_form({(DU, DUB): uub, (DU, DVB): uvb, (DV, DUB): vub, (DV, DVB): vvb})


# ---------------------------------------------------------------- energy

def energy_series(series) -> list:
    """t-derivatives E^(n), n = 0..N, of the rescaled energy."""
    x1, x2, x3 = series.cv.xbar
    a = x1.coeff(-1)
    if abs(a) < 1e-6:
        raise DegenerateError("energy formula degenerate: u v = 0")
    out = []
    for n in range(series.N + 1):
        y2, y3 = series.x[n][1].coeff(0), series.x[n][2].coeff(0)
        val = 8 * math.pi * (1j / a) * (-x2.coeff(-1) * y3 + y2 * x3.coeff(-1))
        if n == 0:
            val += 8 * math.pi
        if abs(val.imag) > 1e-8 * max(1.0, abs(val)):
            raise ArithmeticError(f"energy derivative {n} is not real: {val}")
        out.append(val.real)
    return out


def energy_t0(u: complex, v: complex) -> float:
    _, _, r2, rho = _uv_scalars(u, v)
    return 8 * math.pi * (1 - rho * r2)


def energy_first_closed(cfg: ModuliConfig, tables: tuple | None = None) -> float:
    if tables is None:
        tables = omega_tables(cfg, 2)
    omega, theta = tables
    u, v = cfg.u, cfg.v
    au, av = abs(u) ** 2, abs(v) ** 2
    mix = (u.conjugate() ** 2 * v ** 2 + u ** 2 * v.conjugate() ** 2).real
    base = au * au + av * av - 4 * au * av
    return (8 * omega[(2, 1)].imag * (base - 3 * mix)
            - 8 * theta[(3, 1)].imag * (base + 3 * mix))


def energy_symmetric(u: complex, v: complex) -> dict:
    """First and second derivatives for p = exp(i pi/4)."""
    _, _, r2, rho = _uv_scalars(u, v)
    au, av = abs(u) ** 2, abs(v) ** 2
    l2 = math.log(2)
    e1 = -16 * math.pi * l2 * (au * au + av * av - 4 * au * av)
    e2 = (-32 * math.pi / (rho * r2 ** 3)) * (au - av) ** 2 * (3 * r2 ** 4 + 2 * r2 ** 2 + 4 * au * av) * l2 ** 2
    return {"E1": e1, "E2": e2}


def energy_cone_third(u: complex) -> float:
    a = abs(u) ** 2
    return 192 * math.pi * a * a * (127 * a * a + 20) * zeta3()


def varpi_cone_third(u: complex) -> float:
    a = abs(u) ** 2
    return 192 * zeta3() * (127 * a ** 3 + 10 * a)


# ---------------------------------------------------------------- t = 0 Hodge maps

def pairing(a: np.ndarray, b: np.ndarray) -> complex:
    return -0.5 * np.trace(a @ b)


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return 0.5 * (a @ b - b @ a)


def nahc_t0(psi: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Nilpotent Higgs field -> traceless matrix of determinant -1."""
    psi = np.asarray(psi, dtype=complex)
    scale = np.max(np.abs(psi))
    if scale == 0:
        raise ValueError("Higgs field must be nonzero")
    if abs(np.trace(psi)) > tol * scale or abs(np.linalg.det(psi)) > tol * scale ** 2:
        raise ValueError("Higgs field must be nilpotent")
    adj = psi.conj().T
    phi = psi - adj
    herm = 1j * (psi + adj)
    n2 = pairing(phi, phi).real
    N = cross(phi, herm) / n2
    return math.sqrt(1 + n2) * 1j * N + phi


def nahc_t0_inv(A: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if abs(np.trace(A)) > tol or abs(np.linalg.det(A) + 1) > tol:
        raise ValueError("expected a traceless matrix of determinant -1")
    adj = A.conj().T
    phi = 0.5 * (A - adj)
    if np.max(np.abs(phi)) < tol:
        raise DegenerateError("skew-hermitian part vanishes (A is hermitian)")
    xi = 0.5 * (A + adj)
    N = (-1j / math.sqrt(-pairing(xi, xi).real)) * xi
    return 0.5 * (phi - 1j * cross(N, phi))


def higgs_matrix(u: complex, v: complex) -> np.ndarray:
    return np.array([[u * v, -u * u], [v * v, -u * v]], dtype=complex)


# ---------------------------------------------------------------- identities

def identity_suite(tables: tuple) -> dict:
    """Residuals of the linear and quadratic relations among Omega and Theta values."""
    omega, theta = tables
    if min(omega.depth, theta.depth) < 3:
        raise ValueError("identity suite needs tables of depth >= 3")
    o, th = omega.__getitem__, theta.__getitem__
    pi, I = math.pi, 1j
    res = {}
    res["omega23+theta32"] = o("23") + th("32") - o("21") - th("31")
    consts = identity_values(tables)
    res["I1"] = consts["I1"] + I * pi ** 4 / 3
    res["I2"] = consts["I2"]
    res["I3"] = consts["I3"] + I * pi ** 4
    res["new1"] = o("223") + o("311") + I / (2 * pi) * o("21") ** 2
    res["new2"] = th("211") + th("332") - I / (2 * pi) * th("31") ** 2
    res["new3"] = o("223") - th("332") + I / (2 * pi) * (o("21") + th("31")) ** 2 - I * pi ** 3 / 6
    lhs = o("212") - th("121") - th("212")
    rhs = (0.5 * o(1) * th("12") - 0.5 * o(1) * th("21") + 0.5 * o(1) * o("22")
           - I * o("12") ** 2 / (4 * pi) + 3 * I * o("21") ** 2 / (4 * pi)
           - 0.5 * o(2) * o("12") + 0.5 * o(2) * o("21") - I * o("12") * o("21") / (2 * pi)
           - 0.5 * th(2) * th("11") - 0.5 * th(1) * th("22") + I * o(2) ** 2 * o(1) ** 2 / (4 * pi)
           + 0.25 * I * pi * o(1) ** 2 + 0.25 * o(2) ** 2 * o(1) - 0.25 * pi ** 2 * o(1) + I * pi ** 3 / 6)
    res["depth3_212"] = lhs - rhs
    lhs = o("131") + o("313") - th("313")
    rhs = (-0.5 * o(1) * o("13") + 0.5 * o(1) * o("31") + 0.5 * o(1) * o("33") + 0.5 * o(3) * o("11")
           + 0.5 * I * pi * o("13") - 0.5 * I * pi * o("31")
           - I * th("13") ** 2 / (4 * pi) + 3 * I * th("31") ** 2 / (4 * pi)
           + 0.5 * th(3) * th("13") - 0.5 * th(3) * th("31") - I * th("13") * th("31") / (2 * pi)
           - 0.5 * th(1) * th("33") + I * o(1) ** 2 * th(3) ** 2 / (4 * pi) + 0.25 * o(1) * th(3) ** 2
           + 0.25 * I * pi * o(1) ** 2 + 0.75 * pi ** 2 * o(1) - I * pi ** 3 / 3)
    res["depth3_131"] = lhs - rhs
    lhs = o("232") - th("323")
    rhs = (-0.5 * th(3) * o("21") - I * o("21") * th("23") / (2 * pi) + 3 * I * o("21") * th("31") / (2 * pi)
           + th(3) * o("23") + 0.5 * th(3) * o("32") - I * o("32") * th("23") / (2 * pi)
           - I * o("32") * th("31") / (2 * pi) + 3 * I * o("21") ** 2 / (4 * pi)
           - I * o("32") * o("21") / (2 * pi) - I * pi * o("21") - I * o("32") ** 2 / (4 * pi)
           + 0.5 * o(3) * o("22") + 0.5 * o(2) * o("23") - 0.5 * o(2) * o("32") - I * pi * o("32")
           - I * th("23") ** 2 / (4 * pi) + 3 * I * th("31") ** 2 / (4 * pi)
           + 0.5 * th(3) * th("23") - I * pi * th("23") - 0.5 * th(3) * th("31")
           - I * th("23") * th("31") / (2 * pi) - I * pi * th("31") - 0.5 * th(2) * th("33")
           - pi ** 2 * o(2) + pi ** 2 * th(3) - I * pi ** 3 / 3)
    res["depth3_232"] = lhs - rhs
    return {k: abs(v) for k, v in res.items()}


def identity_values(tables: tuple) -> dict:
    """The three constants I1, I2, I3 themselves."""
    omega, theta = tables
    o, th = omega.__getitem__, theta.__getitem__
    pi, I = math.pi, 1j
    return {
        "I1": (6 * pi * (o("333") - th("222")) + I * (o("21") ** 2 + th("31") ** 2)
               + 2 * pi * (o("223") - th("332")) - 8 * pi * (o("311") - th("211"))
               + 10 * I * o("21") * th("31")),
        "I2": (I * (o("21") ** 2 - th("31") ** 2)
               + 2 * pi * (o("223") + th("332") + o("311") + th("211"))
               - 4 * pi * (o("333") + th("222"))),
        "I3": (-I * (o("21") ** 2 + th("31") ** 2)
               + 2 * pi * (o("333") - th("222") - o("223") + th("332"))
               - 2 * I * o("21") * th("31")),
    }
