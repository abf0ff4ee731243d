"""Dormand-Prince 5(4) integrator with proportional-integral step control.

Works on complex state vectors of any shape.  Besides the end state it
returns an accumulated per-component error estimate (sum of the absolute
embedded local error estimates over accepted steps).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import StepSizeError

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B_HAT = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                   187 / 2100, 1 / 40])
_E = _B - _B_HAT

# step controller constants
_SAFE = 0.9
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA
_FAC_MIN = 0.2
_FAC_MAX = 10.0


@dataclass
class RKResult:
    y: np.ndarray
    err: np.ndarray
    steps: int
    rejected: int


def dopri54(f: Callable[[float, np.ndarray], np.ndarray], y0: np.ndarray,
            s0: float = 0.0, s1: float = 1.0, rtol: float = 1e-11, atol: float = 1e-11,
            h0: float | None = None, max_steps: int = 200000) -> RKResult:
    y = np.array(y0, dtype=complex)
    s = s0
    span = s1 - s0
    h = h0 if h0 is not None else span / 100
    k1 = f(s, y)
    err_acc = np.zeros(y.shape)
    err_old = 1e-4
    steps = rejected = 0
    h_min = abs(span) * 1e-14
    while (s1 - s) * np.sign(span) > 0:
        if abs(h) < h_min:
            raise StepSizeError(f"step size underflow at s={s}")
        if (s + h - s1) * np.sign(span) > 0:
            h = s1 - s
        ks = [k1]
        for i in range(1, 7):
            yi = y + h * sum(a * k for a, k in zip(_A[i], ks) if a != 0.0)
            ks.append(f(s + _C[i] * h, yi))
        y_new = y + h * sum(b * k for b, k in zip(_B, ks) if b != 0.0)
        local = h * sum(e * k for e, k in zip(_E, ks))
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(local) / scale)) if y.size else 0.0
        if err <= 1.0:
            s += h
            y = y_new
            k1 = ks[6]
            err_acc += np.abs(local)
            steps += 1
            fac = (max(err, 1e-10) ** _EXPO) / (err_old ** _BETA) / _SAFE
            fac = min(1 / _FAC_MIN, max(1 / _FAC_MAX, fac))
            err_old = max(err, 1e-4)
            h = h / fac
        else:
            rejected += 1
            fac = min(1 / _FAC_MIN, (err ** _EXPO) / _SAFE)
            h = h / fac
        if steps + rejected > max_steps:
            raise StepSizeError("too many steps")
    return RKResult(y, err_acc, steps, rejected)
