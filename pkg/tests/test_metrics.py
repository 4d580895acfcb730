import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from modecast.errors import ConstantActual, Empty, LengthMismatch
from modecast.metrics import METRIC_NAMES, evaluate


def brute_force(y, p):
    n = len(y)
    sq = [(y[i] - p[i]) ** 2 for i in range(n)]
    mse = sum(sq) / n
    mae = sum(abs(y[i] - p[i]) for i in range(n)) / n
    mean = sum(y) / n
    sst = sum((v - mean) ** 2 for v in y)
    return {"rmse": math.sqrt(mse), "mae": mae, "mse": mse, "r2": 1 - sum(sq) / sst}


def test_hand_computed():
    r = evaluate([1, 2, 3, 4], [1, 2, 3, 6])
    assert r.mse == 1.0 and r.rmse == 1.0 and r.mae == 0.5
    assert r.r2 == pytest.approx(1 - 4 / 5)


def test_perfect_prediction():
    r = evaluate([3.0, 1.0, 2.0], [3.0, 1.0, 2.0])
    assert (r.rmse, r.mae, r.mse, r.r2) == (0.0, 0.0, 0.0, 1.0)


def test_mean_prediction_scores_zero_r2():
    y = np.array([1.0, 5.0, 9.0])
    assert evaluate(y, np.full(3, y.mean())).r2 == pytest.approx(0.0, abs=1e-15)


def test_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(2, 50))
        y, p = rng.normal(size=n) * 100, rng.normal(size=n) * 100
        r = evaluate(y, p)
        ref = brute_force(list(y), list(p))
        for name in METRIC_NAMES:
            assert getattr(r, name) == pytest.approx(ref[name], rel=1e-12, abs=1e-12)


def test_errors():
    with pytest.raises(LengthMismatch):
        evaluate([1, 2], [1])
    with pytest.raises(Empty):
        evaluate([], [])
    with pytest.raises(ConstantActual):
        evaluate([2, 2, 2], [1, 2, 3])


# magnitudes whose squares underflow are out of scope for float64 metrics
finite = st.floats(-1e6, 1e6, allow_nan=False).filter(lambda x: x == 0 or abs(x) > 1e-100)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 40).flatmap(lambda n: st.tuples(arrays(float, n, elements=finite), arrays(float, n, elements=finite))))
def test_invariants(pair):
    y, p = pair
    if np.ptp(y) == 0:
        return
    r = evaluate(y, p)
    assert r.rmse**2 == pytest.approx(r.mse, rel=1e-12, abs=1e-300)
    assert r.mae <= r.rmse * (1 + 1e-12)
    assert r.r2 <= 1.0
    # symmetric in the residual's sign
    s = evaluate(y, 2 * y - p)
    assert s.mse == pytest.approx(r.mse, rel=1e-9, abs=1e-9)
