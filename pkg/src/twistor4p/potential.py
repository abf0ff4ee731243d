"""Moduli data for the symmetric four-punctured sphere.

The punctures are p, -1/p, -p, 1/p for p in the open first quadrant.  The
three 1-forms ``omega_j`` are signed sums of the simple poles
``1/(z - p_k)``; ``SIGNS[j][k]`` is the sign in front of ``1/(z - p_k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError
from .laurent import PAULI, LaurentPoly, PolyMatrix

SIGNS = np.array([
    [1, -1, 1, -1],
    [1, -1, -1, 1],
    [1, 1, -1, -1],
], dtype=float)

R_MIN = 0.05


@dataclass(frozen=True)
class ModuliConfig:
    p: complex
    u: complex
    v: complex

    def __post_init__(self):
        p = complex(self.p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "u", complex(self.u))
        object.__setattr__(self, "v", complex(self.v))
        if not (p.real > 0 and p.imag > 0):
            raise ValueError(f"p must lie in the open first quadrant, got {p}")
        if self.u == 0 and self.v == 0:
            raise ValueError("(u, v) must be nonzero")
        pk = self.punctures
        gaps = np.abs(pk[:, None] - pk[None, :]) + np.eye(4)
        if np.min(gaps) < 1e-12:
            raise ValueError("punctures are not distinct")

    @property
    def punctures(self) -> np.ndarray:
        p = self.p
        return np.array([p, -1 / p, -p, 1 / p])

    @property
    def r2(self) -> float:
        return abs(self.u) ** 2 + abs(self.v) ** 2

    def with_uv(self, u: complex, v: complex) -> "ModuliConfig":
        return ModuliConfig(self.p, u, v)

    def to_dict(self) -> dict:
        return {k: [getattr(self, k).real, getattr(self, k).imag] for k in ("p", "u", "v")}


def omega_forms(punctures: np.ndarray, z) -> np.ndarray:
    """Values of (omega_1, omega_2, omega_3) at z (dz coefficients).

    ``z`` may be an array; the result then has shape (3,) + z.shape.
    """
    z = np.asarray(z, dtype=complex)
    s = 1.0 / (z[..., None] - punctures)
    return np.moveaxis(s @ SIGNS.T, -1, 0)


@dataclass(frozen=True)
class CentralValues:
    xbar: tuple
    rho: float
    r2: float

    def coeff_matrix(self) -> np.ndarray:
        """M[k, j] = coefficient of lambda^(k-1) in xbar_{j+1}, k = 0, 1, 2."""
        return np.array([[x.coeff(k - 1) for x in self.xbar] for k in range(3)])


def rho_of(r2: float) -> float:
    return -math.sqrt(1.0 + 1.0 / r2 ** 2)


def central_values(cfg_or_u, v: complex | None = None) -> CentralValues:
    """Central values at t = 0.  Accepts a ModuliConfig or the pair (u, v)."""
    if v is None:
        u, v = cfg_or_u.u, cfg_or_u.v
    else:
        u = complex(cfg_or_u)
        v = complex(v)
    r2 = abs(u) ** 2 + abs(v) ** 2
    if r2 == 0:
        raise ValueError("(u, v) must be nonzero")
    rho = rho_of(r2)
    m1 = np.array([u * v, (v * v - u * u) / 2, 1j * (u * u + v * v) / 2])
    w = u * np.conj(v)
    c0 = rho * np.array([abs(u) ** 2 - abs(v) ** 2, 2 * w.real, 2 * w.imag], dtype=complex)
    p1 = -np.conj(m1)
    xbar = tuple(LaurentPoly([m1[j], c0[j], p1[j]], -1) for j in range(3))
    return CentralValues(xbar, rho, r2)


def residues(x) -> tuple:
    """The four residue matrices A_1..A_4 of sum_j x_j m_j omega_j."""
    x1, x2, x3 = (LaurentPoly.const(c) if not isinstance(c, LaurentPoly) else c for c in x)
    out = []
    for k in range(4):
        a, b, c = SIGNS[0, k] * x1, SIGNS[1, k] * x2, SIGNS[2, k] * x3
        out.append(PolyMatrix([[a, b + c * 1j], [b - c * 1j, -a]]))
    return tuple(out)


def residue_values(x: np.ndarray) -> np.ndarray:
    """Numeric residues, x of shape (3,) -> array (4, 2, 2)."""
    return np.einsum("jk,j,jab->kab", SIGNS, np.asarray(x, dtype=complex), np.array(PAULI))


def eta_coeff(cfg: ModuliConfig, x, t: float, z: complex, lam: complex) -> np.ndarray:
    """dz-coefficient of t * sum_j x_j(lambda) m_j omega_j at z."""
    pk = cfg.punctures
    if np.min(np.abs(z - pk)) < 1e-8:
        raise ValueError("pole: z is at a puncture")
    if lam == 0:
        raise ZeroDivisionError("lambda = 0")
    xv = np.array([xi(lam) if isinstance(xi, LaurentPoly) else xi for xi in x], dtype=complex)
    w = omega_forms(pk, z)
    return t * np.einsum("j,jab->ab", xv * w, np.array(PAULI))


@dataclass(frozen=True)
class HiggsData:
    res: tuple
    det_residual: float
    crossratio: complex | None


def higgs_residues(cfg: ModuliConfig, t: float) -> tuple:
    u, v = cfg.u, cfg.v
    return (
        t * np.array([[u * v, -u * u], [v * v, -u * v]]),
        t * np.array([[-u * v, -v * v], [u * u, u * v]]),
        t * np.array([[u * v, u * u], [-v * v, -u * v]]),
        t * np.array([[-u * v, v * v], [-u * u, u * v]]),
    )


def higgs_field(cfg: ModuliConfig, t: float, z: complex) -> np.ndarray:
    xm1 = central_values(cfg).coeff_matrix()[0]
    return eta_coeff(cfg, xm1, t, z, 1.0)


def det_higgs_formula(cfg: ModuliConfig, t: float, z: complex) -> complex:
    u, v, p = cfg.u, cfg.v, cfg.p
    s = p * p + 1 / (p * p)
    return -4 * t * t * (u ** 4 - s * u * u * v * v + v ** 4) / (z ** 4 - s * z * z + 1)


def null_line(m: np.ndarray) -> complex:
    """Homogeneous coordinate k1/k2 of the kernel of a nilpotent 2x2 matrix."""
    a, b = m[0]
    c, d = m[1]
    k = (-b, a) if abs(a) + abs(b) > abs(c) + abs(d) else (d, -c)
    if k[1] == 0:
        return complex("inf")
    return k[0] / k[1]


def cross_ratio(z1, z2, z3, z4) -> complex:
    return (z3 - z1) * (z4 - z2) / ((z3 - z2) * (z4 - z1))


def crossratio_formula(u: complex, v: complex) -> complex:
    if u * v == 0 or abs(u * u - v * v) < 1e-14 * (abs(u) ** 2 + abs(v) ** 2):
        raise DegenerateError("degenerate parabolic structure")
    return -4 * u * u * v * v / (u * u - v * v) ** 2


def higgs_data(cfg: ModuliConfig, t: float, samples=(0.0, 0.3 + 0.1j, -0.7 + 1.3j)) -> HiggsData:
    res = higgs_residues(cfg, t)
    det_res = 0.0
    for z in samples:
        h = higgs_field(cfg, t, z)
        det_res = max(det_res, abs(np.linalg.det(h) - det_higgs_formula(cfg, t, z)))
    try:
        crossratio_formula(cfg.u, cfg.v)
        cr = cross_ratio(*(null_line(r) for r in res))
    except DegenerateError:
        cr = None
    return HiggsData(res, det_res, cr)


def mu_root(cv: CentralValues, j: int) -> complex | None:
    """Root inside the unit disc of P_j = lambda * xbar_j, or None if xbar_{j,0} = 0."""
    x = cv.xbar[j - 1]
    a, b = x.coeff(1), x.coeff(0)
    if b == 0:
        return None
    z = 4 * abs(a) ** 2 / abs(b) ** 2
    f = 1.0 / (math.sqrt(1.0 + z) + 1.0)  # (sqrt(1+z) - 1)/z without cancellation
    return complex(2 * np.conj(a) / b * f)


def blowup_limit(ut: complex, vt: complex) -> np.ndarray:
    """Constant terms of the central values in the limit r -> 0 for unit (ut, vt)."""
    n = abs(ut) ** 2 + abs(vt) ** 2
    if abs(n - 1) > 1e-12:
        raise ValueError(f"(u, v) must be normalized, |u|^2+|v|^2 = {n}")
    w = ut * np.conj(vt)
    return np.array([-(abs(ut) ** 2 - abs(vt) ** 2), -2 * w.real, -2 * w.imag])
