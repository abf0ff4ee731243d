"""Order-by-order construction of the parameters x_j(t, lambda).

The n-th t-derivative x^(n) at t = 0 is obtained from the (n+1)-st derivatives
of the trace functions p = P11 P21 - P12 P22 and q = i(Q11 Q21 + Q12 Q22),
where P and Q are the solution of dPhi = Phi eta_t at z = 1 and z = i.  The
unknown x^(n) enters those derivatives only linearly, through the depth-one
term, which lets us read off the positive parts of x_2^(n) and x_3^(n) from
the reality condition.  The remaining pieces come from the constraint
x_1^2 + x_2^2 + x_3^2 = 1.

Internally the Taylor coefficients of Phi are computed pointwise on a circle
of spectral values and transformed back to Laurent coefficients; all
quantities involved have bounded degree so this is exact up to rounding.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OrderInconsistencyError
from .iterints import DEFAULT_TOL, omega_tables
from .laurent import LaurentPoly, PolyMatrix, cramer3, lp_divmod, neg_star, pauli_word
from .potential import R_MIN, CentralValues, ModuliConfig, central_values, residues

MAX_ORDER = 5
# Euclidean division by P_1 amplifies rounding by about kappa^(n+2), with
# kappa = |xbar_{1,0} / xbar_{1,1}|; beyond this bound the joint solve is used.
PIVOT_AMPLIFICATION = 1e5


@dataclass
class DerivativeSeries:
    cfg: ModuliConfig
    N: int
    x: list  # x[n] = (x_1^(n), x_2^(n), x_3^(n)), true derivatives
    cv: CentralValues
    tables: tuple = field(repr=False)
    diagnostics: list = field(default_factory=list, repr=False)

    def truncate(self, N: int) -> "DerivativeSeries":
        return DerivativeSeries(self.cfg, N, self.x[:N + 1], self.cv, self.tables,
                                self.diagnostics[:N])

    def taylor(self, n: int) -> tuple:
        """Normalized coefficients x^(n)/n!."""
        f = math.factorial(n)
        return tuple(xj / f for xj in self.x[n])

    def to_json(self) -> dict:
        return {
            "schema": "twistor4p/1",
            "config": self.cfg.to_dict(),
            "N": self.N,
            "x": [[{"n": n, "j": j + 1, "lo": xj.lo,
                    "coeffs": [[c.real, c.imag] for c in xj.coeffs]}
                   for j, xj in enumerate(self.x[n])] for n in range(self.N + 1)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


class SpectralGrid:
    """Sample points on the unit circle representing degrees -M..M exactly."""

    def __init__(self, M: int):
        self.M = M
        self.K = 2 * M + 1
        self.lam = np.exp(2j * np.pi * np.arange(self.K) / self.K)
        self.deg = np.arange(-M, M + 1)
        self.V = self.lam[:, None] ** self.deg[None, :]
        self.Vinv = np.conj(self.V).T / self.K

    def values(self, f: LaurentPoly) -> np.ndarray:
        if not f.is_zero() and (f.lo < -self.M or f.hi > self.M):
            raise ValueError("polynomial exceeds grid window")
        return self.V @ f.window(-self.M, self.M)

    def poly(self, vals: np.ndarray) -> LaurentPoly:
        c = self.Vinv @ vals
        return LaurentPoly(c, -self.M)


def _tmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated Cauchy product of t-series stored along axis 0."""
    T = a.shape[0]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for m in range(T):
        for k in range(m + 1):
            out[m] = out[m] + a[k] * b[m - k]
    return out


def trace_functions(P, Q, mul):
    """(p, q, r) from the transport matrices at 1 and i.

    ``P`` and ``Q`` are indexable as P[i][j] (0-based); ``mul`` multiplies
    two entries, so the same code serves numbers and t-series.
    """
    p = mul(P[0][0], P[1][0]) - mul(P[0][1], P[1][1])
    q = 1j * (mul(Q[0][0], Q[1][0]) + mul(Q[0][1], Q[1][1]))
    a = mul(P[1][1], Q[0][0]) + mul(P[0][1], Q[1][0])
    b = mul(P[1][1], Q[0][1]) + mul(P[0][1], Q[1][1])
    c = mul(P[1][0], Q[0][0]) + mul(P[0][0], Q[1][0])
    d = mul(P[1][0], Q[0][1]) + mul(P[0][0], Q[1][1])
    r = 0.5j * (mul(a, a) + mul(b, b) - mul(c, c) - mul(d, d))
    return p, q, r


def _entries(M: np.ndarray):
    return [[M[..., 0, 0], M[..., 0, 1]], [M[..., 1, 0], M[..., 1, 1]]]


class _Assembler:
    """Taylor coefficients of P, Q and the trace functions for given x data."""

    def __init__(self, tables: tuple, grid: SpectralGrid):
        self.tables = tables
        self.grid = grid
        self.mats = {}

    def _pauli_level(self, n: int) -> np.ndarray:
        if n not in self.mats:
            import itertools
            self.mats[n] = np.array([pauli_word(w) for w in itertools.product((1, 2, 3), repeat=n)])
        return self.mats[n]

    def phi_series(self, xs: list, order: int) -> list[np.ndarray]:
        """Normalized Taylor coefficients Phi_0..Phi_order at both endpoints.

        ``xs[k]`` holds the three normalized coefficients x^(k)/k! (values on
        the grid); missing orders count as zero.
        """
        T = order + 1
        K = self.grid.K
        Z = np.zeros((T, 3, K), dtype=complex)  # t * x_j(t)
        for k, xk in enumerate(xs):
            if k + 1 < T:
                Z[k + 1] = xk
        out = []
        for table in self.tables:
            if table.depth < order:
                raise ValueError(f"table depth {table.depth} < required {order}")
            phi = np.zeros((T, K, 2, 2), dtype=complex)
            phi[0] = np.eye(2)
            level = Z.transpose(1, 0, 2)  # words of length 1: (3, T, K)
            for n in range(1, order + 1):
                omega = table.level(n)
                weighted = np.einsum("w,wtk->wtk", omega, level)
                phi += np.einsum("wtk,wab->tkab", weighted, self._pauli_level(n))
                if n < order:
                    nxt = np.empty((level.shape[0], 3, T, K), dtype=complex)
                    for j in range(3):
                        nxt[:, j] = _tmul(level.transpose(1, 0, 2), Z[:, j][:, None, :]).transpose(1, 0, 2)
                    level = nxt.reshape(-1, T, K)
            out.append(phi)
        return out

    def traces(self, xs: list, order: int):
        P, Q = self.phi_series(xs, order)
        p, q, r = trace_functions(_entries(P), _entries(Q), _tmul)
        return P, Q, p, q, r


@functools.lru_cache(maxsize=None)
def _grid_for(N: int) -> SpectralGrid:
    # one grid for every order keeps lower orders bit-identical across N
    if N > MAX_ORDER + 1:
        raise ValueError(f"order {N} above {MAX_ORDER + 1}")
    return SpectralGrid(MAX_ORDER + 4)


def _cut(f: LaurentPoly, lo: int, hi: int) -> LaurentPoly:
    return LaurentPoly(f.window(lo, hi), lo)


def pq_matrix_derivative(series: DerivativeSeries, n: int, endpoint: complex = 1.0,
                         drop_top: bool = False, tables: tuple | None = None) -> PolyMatrix:
    """(n+1)-st t-derivative of P (endpoint 1) or Q (endpoint i) at t = 0.

    With ``drop_top`` the unknown x^(n) is replaced by zero, leaving only the
    part determined by lower orders.
    """
    tables = tables or series.tables
    grid = _grid_for(max(n, series.N) + 1)
    asm = _Assembler(tables, grid)
    top = n if drop_top else n + 1
    xs = [[grid.values(xj) for xj in series.taylor(k)] for k in range(min(top, series.N + 1))]
    if len(xs) < top:
        raise ValueError(f"series known to order {series.N}, need {top - 1}")
    phis = asm.phi_series(xs, n + 1)
    phi = phis[0] if endpoint == 1 else phis[1]
    f = math.factorial(n + 1)
    return PolyMatrix([[_cut(grid.poly(phi[n + 1][:, i, j] * f), -(n + 1), n + 1)
                        for j in range(2)] for i in range(2)])


def trace_derivatives(series: DerivativeSeries, order: int | None = None) -> dict:
    """True t-derivatives of p, q, r up to ``order`` (default N+1)."""
    order = series.N + 1 if order is None else order
    grid = _grid_for(order)
    asm = _Assembler(series.tables, grid)
    xs = [[grid.values(xj) for xj in series.taylor(k)] for k in range(min(order, series.N + 1))]
    _, _, p, q, r = asm.traces(xs, order)
    out = {"p": [], "q": [], "r": []}
    for m in range(order + 1):
        f = math.factorial(m)
        for key, s in (("p", p), ("q", q), ("r", r)):
            out[key].append(_cut(grid.poly(s[m] * f), -m, m))
    return out


def first_order(cv: CentralValues, tables: tuple) -> tuple:
    """Closed-form first derivative x' at t = 0."""
    omega, theta = tables
    im21 = omega[(2, 1)].imag
    im31 = theta[(3, 1)].imag
    x1, x2, x3 = cv.xbar
    pos = [
        (4j / math.pi) * (im21 + im31) * (x2 * x3).pos(),
        (-4j / math.pi) * im31 * (x1 * x3).pos(),
        (-4j / math.pi) * im21 * (x1 * x2).pos(),
    ]
    cm = cv.coeff_matrix()  # rows: lambda^-1, lambda^0, lambda^1
    X = sum(cm[0, j] * pos[j].coeff(1) for j in range(3))
    Y = sum(cm[0, j] * pos[j].coeff(2) + cm[1, j] * pos[j].coeff(1) for j in range(3))
    rho, r4 = cv.rho, cv.r2 ** 2
    const = [(-1 / (rho * r4)) * ((cm[1, j] / rho) * X - 2 * rho * cm[0, j] * Y) for j in range(3)]
    return tuple(pos[j] + const[j] for j in range(3))


def _k_low(x: list, n: int) -> LaurentPoly:
    acc = LaurentPoly()
    for j in range(3):
        for k in range(1, n):
            acc = acc + math.comb(n, k) * (x[k][j] * x[n - k][j])
    return acc


def _solve_constants_joint(cv, rhs, im2, im3, deg):
    """Least-squares solve of P1 x1 + P2 c2 + P3 c3 = rhs with Im c2, Im c3 fixed.

    The imaginary parts of the constants come from the reality of the
    constant terms of p and q.  Stable also when P1 loses its outer
    coefficients (uv -> 0), where Euclidean division by P1 is not.
    """
    P = [xj.shift(1) for xj in cv.xbar]
    hi = deg + 2
    b = rhs.window(0, hi) - 1j * (im2 * P[1].window(0, hi) + im3 * P[2].window(0, hi))
    cols = []
    p1 = P[0].window(0, hi)
    for k in range(deg + 1):
        col = np.roll(p1, k)
        col[:k] = 0
        cols.append(col)
        cols.append(1j * col)
    cols.append(P[1].window(0, hi))
    cols.append(P[2].window(0, hi))
    A = np.array(cols).T
    Ar = np.vstack([A.real, A.imag])
    br = np.concatenate([b.real, b.imag])
    sol, *_ = np.linalg.lstsq(Ar, br, rcond=None)
    a = sol[0:2 * (deg + 1):2] + 1j * sol[1:2 * (deg + 1):2]
    c2 = sol[-2] + 1j * im2
    c3 = sol[-1] + 1j * im3
    return LaurentPoly(a, 0), c2, c3


def derive(cfg: ModuliConfig, N: int, tables: tuple | None = None,
           tol: float = DEFAULT_TOL, check_tol: float = 1e-8) -> DerivativeSeries:
    if N < 0 or N > MAX_ORDER:
        raise ValueError(f"order must be in 0..{MAX_ORDER}")
    if math.sqrt(cfg.r2) < R_MIN:
        raise ValueError(f"r = {math.sqrt(cfg.r2):.3g} below r_min = {R_MIN}")
    if tables is None:
        tables = omega_tables(cfg, N + 1, tol)
    if min(t.depth for t in tables) < N + 1:
        raise ValueError("tables are too shallow for this order")
    cv = central_values(cfg)
    grid = _grid_for(N)
    asm = _Assembler(tables, grid)
    x = [cv.xbar]
    P = [xj.shift(1) for xj in cv.xbar]
    M = cv.coeff_matrix()
    lead = abs(cv.xbar[0].coeff(1))
    kappa = abs(cv.xbar[0].coeff(0)) / lead if lead > 0 else math.inf
    diags = []
    for n in range(1, N + 1):
        xs = [[grid.values(xj / math.factorial(k)) for xj in x[k]] for k in range(n)]
        _, _, p, q, _ = asm.traces(xs, n + 1)
        f = math.factorial(n + 1)
        c = 2 * math.pi * (n + 1)
        p_low = _cut(grid.poly(p[n + 1] * f), -(n + 1), n + 1)
        q_low = _cut(grid.poly(q[n + 1] * f), -(n + 1), n + 1)
        x3p = (neg_star(p_low) - p_low.pos()) / c
        x2p = (neg_star(q_low) - q_low.pos()) / c
        klow = _k_low(x, n)
        rhs = klow.shift(1) * (-0.5) - P[1] * x2p - P[2] * x3p
        use_division = kappa ** (n + 2) < PIVOT_AMPLIFICATION
        if use_division:
            quo, _ = lp_divmod(rhs, P[0])
            x1p = quo.pos()
            rest = rhs - P[0] * x1p
            consts = cramer3(M, rest.window(0, 2))
            x1 = x1p + consts[0]
            x2 = x2p + consts[1]
            x3 = x3p + consts[2]
        else:
            im2 = -q_low.coeff(0).imag / c
            im3 = -p_low.coeff(0).imag / c
            x1, c2, c3 = _solve_constants_joint(cv, rhs, im2, im3, n + 1)
            x2 = x2p + c2
            x3 = x3p + c3
        resid = P[0] * x1 + P[1] * x2 + P[2] * x3 + klow.shift(1) * 0.5
        scale = max(1.0, rhs.norm())
        high = max((abs(resid.coeff(k)) for k in range(3, resid.hi + 1)), default=0.0)
        if high > check_tol * scale:
            raise OrderInconsistencyError("order-n inconsistency", n, high)
        reality = max(abs((c * x3.coeff(0) + p_low.coeff(0)).imag),
                      abs((c * x2.coeff(0) + q_low.coeff(0)).imag))
        diags.append({"n": n, "residual": resid.norm() / scale, "high_residual": high / scale,
                      "constant_reality": reality,
                      "route": "division" if use_division else "joint"})
        x.append((x1, x2, x3))
    return DerivativeSeries(cfg, N, x, cv, tables, diags)


def constraint_residual(series: DerivativeSeries, n: int) -> float:
    """Max coefficient of the n-th derivative of x_1^2 + x_2^2 + x_3^2 (n >= 1)."""
    acc = LaurentPoly()
    x = series.x
    for j in range(3):
        for k in range(n + 1):
            acc = acc + math.comb(n, k) * (x[k][j] * x[n - k][j])
    return acc.norm()


def eval_x(series: DerivativeSeries, t: float, lam) -> np.ndarray:
    if np.any(np.asarray(lam) == 0):
        raise ZeroDivisionError("lambda = 0")
    out = 0
    for n in range(series.N + 1):
        out = out + np.array([xj(lam) for xj in series.x[n]]) * (t ** n / math.factorial(n))
    return out


@dataclass
class LaxResult:
    X: PolyMatrix
    residual: float
    rank: int
    n_unknowns: int


def lax_solve(series: DerivativeSeries, degree: int = 3) -> LaxResult:
    """Least-squares X with entries in degrees 0..degree and A' = [A, X]."""
    if series.N < 1:
        raise ValueError("series order must be at least 1")
    A = residues(series.x[0])[0]
    Ad = residues(series.x[1])[0]
    lo, hi = -1, degree + 1
    basis = []
    for k in range(degree + 1):
        mono = LaurentPoly.monomial(k)
        z = LaurentPoly()
        basis.append(PolyMatrix([[mono, z], [z, -mono]]))
        basis.append(PolyMatrix([[z, mono], [z, z]]))
        basis.append(PolyMatrix([[z, z], [mono, z]]))

    def flat(m: PolyMatrix) -> np.ndarray:
        return np.concatenate([m[i, j].window(lo, hi) for i in range(2) for j in range(2)])

    cols = np.array([flat(A.commutator(b)) for b in basis]).T
    target = flat(Ad)
    sol, _, rank, _ = np.linalg.lstsq(cols, target, rcond=1e-12)
    X = PolyMatrix([[LaurentPoly(), LaurentPoly()], [LaurentPoly(), LaurentPoly()]])
    for s, b in zip(sol, basis):
        X = X + b.scale(s)
    res = float(np.max(np.abs(cols @ sol - target)))
    return LaxResult(X, res, int(rank), len(basis))


def lax_residual(series: DerivativeSeries, X: PolyMatrix) -> float:
    A = residues(series.x[0])[0]
    Ad = residues(series.x[1])[0]
    return (Ad - A.commutator(X)).norm()


__all__ = [
    "DerivativeSeries", "derive", "first_order", "pq_matrix_derivative", "trace_derivatives",
    "eval_x", "lax_solve", "lax_residual", "constraint_residual", "trace_functions",
]
