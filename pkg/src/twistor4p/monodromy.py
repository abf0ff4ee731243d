"""Transport of dPhi = Phi eta_t along paths, trace coordinates and loop monodromies."""

from __future__ import annotations

import cmath
import json
import math
import operator
from dataclasses import dataclass, field

import numpy as np

from .deformation import DerivativeSeries, eval_x, trace_functions
from .errors import PathSingularityError
from .iterints import DELTA_PATH, segment_distance
from .laurent import C_MAT, D_MAT, ID2
from .potential import ModuliConfig, residue_values
from .rk import dopri54

TRANSPORT_TOL = 1e-11


@dataclass(frozen=True)
class Line:
    a: complex
    b: complex

    def point(self, s):
        return self.a + s * (self.b - self.a)

    def velocity(self, s):
        return self.b - self.a

    def distance(self, q: complex) -> float:
        return segment_distance(self.a, self.b, q)


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, s):
        return self.center + self.radius * np.exp(1j * (self.theta0 + s * (self.theta1 - self.theta0)))

    def velocity(self, s):
        return 1j * (self.theta1 - self.theta0) * (self.point(s) - self.center)

    def distance(self, q: complex) -> float:
        lo, hi = sorted((self.theta0, self.theta1))
        phi = cmath.phase(q - self.center)
        while phi < lo:
            phi += 2 * math.pi
        if phi <= hi:
            return abs(abs(q - self.center) - self.radius)
        return min(abs(q - self.point(0.0)), abs(q - self.point(1.0)))


@dataclass(frozen=True)
class PathSpec:
    pieces: tuple

    @classmethod
    def polyline(cls, *vertices) -> "PathSpec":
        v = [complex(z) for z in vertices]
        return cls(tuple(Line(a, b) for a, b in zip(v[:-1], v[1:])))

    def then(self, other: "PathSpec") -> "PathSpec":
        return PathSpec(self.pieces + other.pieces)

    def start(self) -> complex:
        return complex(self.pieces[0].point(0.0))

    def end(self) -> complex:
        return complex(self.pieces[-1].point(1.0))

    def check(self, cfg: ModuliConfig, delta: float = DELTA_PATH):
        for piece in self.pieces:
            for q in cfg.punctures:
                if piece.distance(q) < delta:
                    raise PathSingularityError(
                        f"path-singularity: {piece} passes within {piece.distance(q):.3g} of {q}")


@dataclass
class TransportResult:
    matrix: np.ndarray
    lam: complex
    t: float
    error: float
    det_residual: float


def transport_x(cfg: ModuliConfig, x: np.ndarray, t: float, path: PathSpec,
                tol: float = TRANSPORT_TOL) -> tuple[np.ndarray, float]:
    """Transport for fixed parameter values x = (x_1, x_2, x_3)."""
    path.check(cfg)
    A = t * residue_values(x)
    pk = cfg.punctures
    y = ID2.ravel().copy()
    err = 0.0
    for piece in path.pieces:
        def rhs(s, y, piece=piece):
            z = piece.point(s)
            eta = np.einsum("k,kab->ab", 1.0 / (z - pk), A) * piece.velocity(s)
            return (y.reshape(2, 2) @ eta).ravel()
        res = dopri54(rhs, y, 0.0, 1.0, rtol=tol, atol=tol)
        y = res.y
        err += float(np.max(res.err))
    return y.reshape(2, 2), err


def transport(cfg: ModuliConfig, series: DerivativeSeries, t: float, lam: complex,
              path: PathSpec, tol: float = TRANSPORT_TOL) -> TransportResult:
    if lam == 0:
        raise ZeroDivisionError("lambda = 0")
    x = eval_x(series, t, lam)
    m, err = transport_x(cfg, x, t, path, tol)
    return TransportResult(m, lam, t, err, abs(np.linalg.det(m) - 1))


def segment_path(endpoint: complex) -> PathSpec:
    return PathSpec.polyline(0, endpoint)


def traces(P: np.ndarray, Q: np.ndarray) -> dict:
    p, q, r = trace_functions(P, Q, operator.mul)
    return {"p": p, "q": q, "r": r,
            "s12": 2 - 4 * p * p, "s23": 2 - 4 * q * q, "s13": 2 - 4 * r * r}


def r_conjugation_form(P: np.ndarray, Q: np.ndarray) -> complex:
    """The alternative expression (1/2) tr(P C P^-1 D Q D C Q^-1 D)."""
    Pi, Qi = np.linalg.inv(P), np.linalg.inv(Q)
    return 0.5 * np.trace(P @ C_MAT @ Pi @ D_MAT @ Q @ D_MAT @ C_MAT @ Qi @ D_MAT)


def loop_path(cfg: ModuliConfig, k: int, kind: str = "lasso") -> PathSpec:
    """Based loop at 0 encircling p_k once counterclockwise.

    ``lasso``: straight towards p_k, a small circle, straight back.
    ``sector``: out along the ray at angle (k-1)pi/2, an arc through
    quadrant k, back along the ray at angle k pi/2.
    """
    pk = cfg.punctures
    if kind == "sector":
        R = float(np.max(np.abs(pk))) + 1.0
        a0, a1 = (k - 1) * math.pi / 2, k * math.pi / 2
        return PathSpec((Line(0j, R * cmath.exp(1j * a0)), Arc(0j, R, a0, a1),
                         Line(R * cmath.exp(1j * a1), 0j)))
    if kind != "lasso":
        raise ValueError(f"unknown loop kind {kind!r}")
    c = pk[k - 1]
    others = [abs(c - q) for j, q in enumerate(pk) if j != k - 1]
    rad = 0.3 * min(min(others), abs(c))
    theta = cmath.phase(-c)  # start on the circle at the point facing 0
    entry = c + rad * cmath.exp(1j * theta)
    return PathSpec((Line(0j, entry), Arc(c, rad, theta, theta + 2 * math.pi), Line(entry, 0j)))


def loop_monodromy(cfg: ModuliConfig, series: DerivativeSeries, t: float, lam: complex, k: int,
                   kind: str = "lasso", tol: float = TRANSPORT_TOL) -> np.ndarray:
    return transport(cfg, series, t, lam, loop_path(cfg, k, kind), tol).matrix


@dataclass
class MonodromyReport:
    t: float
    lams: np.ndarray
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    res_p: np.ndarray
    res_q: np.ndarray
    res_r: np.ndarray
    res_K: np.ndarray
    det_residual: float
    extra: dict = field(default_factory=dict)

    @property
    def s12(self):
        return 2 - 4 * self.p ** 2

    @property
    def s23(self):
        return 2 - 4 * self.q ** 2

    @property
    def s13(self):
        return 2 - 4 * self.r ** 2

    def max_residuals(self) -> dict:
        Q1, Q2 = fricke_residual(self, self.t)
        return {"p": float(np.max(self.res_p)), "q": float(np.max(self.res_q)),
                "r": float(np.max(self.res_r)), "K": float(np.max(self.res_K)),
                "fricke_Q2": float(np.max(np.abs(Q2))), "fricke_Q1_min": float(np.min(np.abs(Q1)))}


def _antipode_index(lams: np.ndarray) -> np.ndarray:
    idx = []
    for lam in lams:
        d = np.abs(lams + lam)
        j = int(np.argmin(d))
        idx.append(j if d[j] < 1e-12 else -1)
    return np.array(idx)


def lambda_grid(n: int = 8, phase: float = 0.3) -> np.ndarray:
    """n equally spaced points on the unit circle (n even, so -lambda is present)."""
    if n % 2:
        raise ValueError("grid size must be even")
    return np.exp(1j * (phase + 2 * math.pi * np.arange(n) / n))


def reality_residual(cfg: ModuliConfig, series: DerivativeSeries, t: float,
                     lams=None, tol: float = TRANSPORT_TOL) -> MonodromyReport:
    lams = lambda_grid() if lams is None else np.asarray(lams, dtype=complex)
    if np.any(np.abs(np.abs(lams) - 1) > 1e-12):
        raise ValueError("reality check uses |lambda| = 1")
    anti = _antipode_index(lams)
    extra_lams = [-lam for lam, j in zip(lams, anti) if j < 0]
    all_lams = np.concatenate([lams, np.array(extra_lams, dtype=complex)])
    vals, det_res = [], 0.0
    for lam in all_lams:
        P = transport(cfg, series, t, lam, segment_path(1.0), tol)
        Q = transport(cfg, series, t, lam, segment_path(1j), tol)
        det_res = max(det_res, P.det_residual, Q.det_residual)
        tr = traces(P.matrix, Q.matrix)
        vals.append((tr["p"], tr["q"], tr["r"]))
    vals = np.array(vals)
    n = len(lams)
    extra_pos = iter(range(n, len(all_lams)))
    anti_full = np.array([j if j >= 0 else next(extra_pos) for j in anti])
    res = np.abs(vals[:n] - np.conj(vals[anti_full]))
    x = np.array([eval_x(series, t, lam) for lam in lams])
    res_K = np.abs(np.sum(x * x, axis=1) - 1)
    return MonodromyReport(t, lams, vals[:n, 0], vals[:n, 1], vals[:n, 2],
                           res[:, 0], res[:, 1], res[:, 2], res_K, det_res)


def fricke_residual(report: MonodromyReport, t: float) -> tuple[np.ndarray, np.ndarray]:
    s = 2 * math.cos(2 * math.pi * t)
    p, q, r = report.p, report.q, report.r
    base = s * s + 4 * (p * p + q * q + r * r - 1)
    return base - 8 * p * q * r, base + 8 * p * q * r


def fricke_cubic(U, V, W, s) -> complex:
    """U^2+V^2+W^2+UVW-2s^2(U+V+W)+4(s^2-1)+s^4 for equal local traces s."""
    return U * U + V * V + W * W + U * V * W - 2 * s * s * (U + V + W) + 4 * (s * s - 1) + s ** 4


def loglog_slope(ts, values) -> float:
    ts = np.asarray(ts, dtype=float)
    v = np.maximum(np.asarray(values, dtype=float), 1e-300)
    return float(np.polyfit(np.log(ts), np.log(v), 1)[0])


def sweep(cfg: ModuliConfig, series: DerivativeSeries, ts, lams=None,
          tol: float = TRANSPORT_TOL) -> dict:
    """Reality and Fricke residuals over several t with fitted log-log slopes."""
    reports = [reality_residual(cfg, series, t, lams, tol) for t in ts]
    rows = [r.max_residuals() for r in reports]
    keys = ["p", "q", "r", "K", "fricke_Q2"]
    slopes = {k: loglog_slope(ts, [row[k] for row in rows]) for k in keys}
    return {"reports": reports, "rows": rows, "slopes": slopes}


def sweep_json(sw: dict) -> str:
    out = []
    for rep, row in zip(sw["reports"], sw["rows"]):
        out.append({"t": rep.t, "lambda": [{"re": z.real, "im": z.imag} for z in rep.lams],
                    "residuals": {k: row[k] for k in ("p", "q", "r", "K", "fricke_Q2")},
                    "fricke_Q1_min": row["fricke_Q1_min"]})
    return json.dumps({"schema": "twistor4p/1", "rows": out, "slopes": sw["slopes"]}, indent=1)
