"""Iterated integrals of the three 1-forms along the segments [0, 1] and [0, i].

For a word w = (i1, ..., il) the value Omega_w(z) is defined by
Omega_() = 1 and Omega_{w k}(z) = int_0^z Omega_w omega_k, integrated along the
straight segment.  All words up to a depth are obtained from one triangular
ODE solve.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DepthCapError, PathSingularityError
from .potential import ModuliConfig, omega_forms
from .rk import dopri54

DEPTH_CAP = 6
DELTA_PATH = 0.05
DEFAULT_TOL = 1e-11


def parse_word(w) -> tuple[int, ...]:
    if isinstance(w, str):
        w = tuple(int(c) for c in w)
    elif isinstance(w, int):
        w = (w,)
    w = tuple(w)
    if any(c not in (1, 2, 3) for c in w):
        raise ValueError(f"letters must be 1, 2 or 3: {w!r}")
    return w


def words(depth: int):
    """All words of length 1..depth, shortest first, lexicographic within a length."""
    for n in range(1, depth + 1):
        yield from itertools.product((1, 2, 3), repeat=n)


def word_index(w: tuple[int, ...]) -> int:
    """Position of w inside its own level (base-3 digits, first letter most significant)."""
    i = 0
    for c in w:
        i = 3 * i + (c - 1)
    return i


@dataclass(frozen=True)
class OmegaTable:
    endpoint: complex
    depth: int
    values: dict = field(repr=False)
    errors: dict = field(repr=False)
    config: ModuliConfig

    def __getitem__(self, w) -> complex:
        w = parse_word(w)
        if not w:
            return 1.0 + 0j
        if len(w) > self.depth:
            raise DepthCapError(f"table depth {self.depth} < word length {len(w)}")
        return self.values[w]

    def err(self, w) -> float:
        return self.errors[parse_word(w)]

    def level(self, n: int) -> np.ndarray:
        """Values of all words of length n in word_index order."""
        return np.array([self.values[w] for w in itertools.product((1, 2, 3), repeat=n)])

    def to_json(self) -> dict:
        ep = "1" if self.endpoint == 1 else "i"
        return {
            "schema": "twistor4p/1",
            "endpoint": ep,
            "depth": self.depth,
            "config": self.config.to_dict(),
            "entries": [
                {"word": "".join(map(str, w)), "re": v.real, "im": v.imag, "err": self.errors[w]}
                for w, v in self.values.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def segment_distance(a: complex, b: complex, q: complex) -> float:
    d = b - a
    tau = ((q - a) * d.conjugate()).real / abs(d) ** 2
    tau = min(1.0, max(0.0, tau))
    return abs(q - (a + tau * d))


def check_segment(cfg: ModuliConfig, a: complex, b: complex, delta: float = DELTA_PATH):
    for q in cfg.punctures:
        dist = segment_distance(a, b, q)
        if dist < delta:
            raise PathSingularityError(
                f"path-singularity: segment [{a}, {b}] passes within {dist:.3g} of puncture {q}")


def omega_table(cfg: ModuliConfig, endpoint: complex, depth: int,
                tol: float = DEFAULT_TOL) -> OmegaTable:
    endpoint = complex(endpoint)
    if depth > DEPTH_CAP:
        raise DepthCapError(f"depth cap: {depth} > {DEPTH_CAP}")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    check_segment(cfg, 0j, endpoint)
    pk = cfg.punctures
    sizes = [3 ** n for n in range(1, depth + 1)]
    offsets = np.concatenate([[0], np.cumsum(sizes)])

    def rhs(s, y):
        w = omega_forms(pk, s * endpoint) * endpoint
        out = np.empty_like(y)
        out[:3] = w
        for n in range(1, depth):
            prev = y[offsets[n - 1]:offsets[n]]
            out[offsets[n]:offsets[n + 1]] = np.outer(prev, w).ravel()
        return out

    res = dopri54(rhs, np.zeros(offsets[-1], dtype=complex), 0.0, 1.0, rtol=tol, atol=tol)
    values, errors = {}, {}
    for n in range(1, depth + 1):
        for w in itertools.product((1, 2, 3), repeat=n):
            i = offsets[n - 1] + word_index(w)
            values[w] = complex(res.y[i])
            errors[w] = float(res.err[i])
    return OmegaTable(endpoint, depth, values, errors, cfg)


def omega_tables(cfg: ModuliConfig, depth: int, tol: float = DEFAULT_TOL):
    """Tables at both endpoints, (Omega at 1, Theta at i)."""
    return omega_table(cfg, 1.0, depth, tol), omega_table(cfg, 1j, depth, tol)


def omega_depth1_exact(cfg: ModuliConfig, endpoint: complex) -> np.ndarray:
    """Depth-one values as sums of principal logarithms log(1 - endpoint/p_k)."""
    from .potential import SIGNS
    logs = np.array([cmath.log(1 - endpoint / q) for q in cfg.punctures])
    return SIGNS @ logs


def omega_closed(cfg: ModuliConfig, key: str) -> complex:
    """Closed forms for the two depth-two values Omega_21(1) and Omega_31(i)."""
    p = cfg.p
    if key in ("21", "21@1", "Omega21(1)"):
        arg = (p * p - 1) / (2j * p)
        sign = 1
    elif key in ("31", "31@i", "Omega31(i)"):
        arg = (p * p + 1) / (2 * p)
        sign = -1
    else:
        raise KeyError(key)
    if arg.imag == 0 and arg.real <= 0:
        raise ValueError("logarithm argument on the negative real axis")
    return sign * 2j * math.pi * cmath.log(arg)


def anchor_residuals(omega: OmegaTable, theta: OmegaTable) -> dict[str, float]:
    pi = math.pi
    return {
        "O1(1)-O1(i)=pi i": abs(omega[1] - theta[1] - 1j * pi),
        "O2(i)=-pi i": abs(theta[2] + 1j * pi),
        "O3(1)=pi i": abs(omega[3] - 1j * pi),
    }


def shuffle_residual(table: OmegaTable) -> float:
    if table.depth < 2:
        raise ValueError("shuffle check needs depth >= 2")
    worst = 0.0
    for j, k in itertools.product((1, 2, 3), repeat=2):
        worst = max(worst, abs(table[j] * table[k] - table[(j, k)] - table[(k, j)]))
    if table.depth >= 3:
        for j, k, l in itertools.product((1, 2, 3), repeat=3):
            lhs = table[j] * table[(k, l)]
            rhs = table[(j, k, l)] + table[(k, j, l)] + table[(k, l, j)]
            worst = max(worst, abs(lhs - rhs))
    return worst


def log_ratio_s(p: complex) -> float:
    """log|(p^2 - 1)/(2p)|, equal to Im Omega_21(1) / (2 pi)."""
    return math.log(abs((p * p - 1) / (2 * p)))


def log_ratio_c(p: complex) -> float:
    """log|(p^2 + 1)/(2p)|, equal to -Im Omega_31(i) / (2 pi)."""
    return math.log(abs((p * p + 1) / (2 * p)))


def zeta3(order: int = 8, n_terms: int = 100) -> float:
    """zeta(3) from a partial sum plus an Euler-Maclaurin tail.

    ``order`` is the highest inverse power of N kept in the tail (6 or 8).
    """
    n = n_terms
    head = math.fsum(1.0 / k ** 3 for k in range(n - 1, 0, -1))
    tail = [1 / (2 * n ** 2), 1 / (2 * n ** 3), 1 / (4 * n ** 4), -1 / (12 * n ** 6)]
    if order >= 8:
        tail.append(1 / (12 * n ** 8))
    return math.fsum([head] + tail)
