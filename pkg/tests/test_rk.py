import math

import numpy as np
import pytest

from twistor4p.errors import StepSizeError
from twistor4p.rk import dopri54


def test_exponential():
    res = dopri54(lambda s, y: 1j * y, np.array([1.0]), 0.0, 2.0)
    assert abs(res.y[0] - np.exp(2j)) < 1e-10
    assert res.steps > 0


def test_backwards_and_matrix_state():
    A = np.array([[0, 1], [-1, 0]], dtype=complex)
    res = dopri54(lambda s, y: A @ y, np.array([1.0, 0.0]), 1.0, 0.0)
    assert np.allclose(res.y, [math.cos(1), math.sin(1)], atol=1e-10)


def test_tolerance_controls_error():
    exact = math.exp(-5)
    errs = [abs(dopri54(lambda s, y: -5 * y, np.array([1.0]), rtol=tol, atol=tol).y[0] - exact)
            for tol in (1e-6, 1e-10)]
    assert errs[1] < errs[0] and errs[1] < 1e-10


def test_step_underflow():
    with pytest.raises(StepSizeError):
        dopri54(lambda s, y: y / (s - 0.5) ** 3, np.array([1.0]), max_steps=2000)
