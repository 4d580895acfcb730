import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from modecast.errors import DegenerateRange, EmptyPartition, SeriesTooShort, TooFewValues
from modecast.ingest import load_fixture
from modecast.series import (
    ScalerParams,
    chrono_split,
    fit_scaler,
    inverse_transform,
    make_windows,
    transform,
)


def test_fit_scaler_basic():
    p = fit_scaler([0.0, 10.0])
    assert (p.observed_min, p.observed_max) == (0.0, 10.0)


def test_fit_scaler_errors():
    with pytest.raises(DegenerateRange):
        fit_scaler([7, 7, 7])
    with pytest.raises(TooFewValues):
        fit_scaler([1.0])


def test_fit_scaler_fixture_extremes():
    p = fit_scaler(load_fixture().values)
    assert p.observed_min == pytest.approx(3154.95, abs=0.5)
    assert p.observed_max == pytest.approx(111673.28, abs=0.5)


def test_transform_values():
    p = ScalerParams(0.0, 10.0)
    assert transform(p, [5.0])[0] == 0.5
    assert inverse_transform(p, [1.2])[0] == pytest.approx(12.0)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, st.integers(2, 64), elements=finite))
def test_round_trip(values):
    if values.min() == values.max():
        return
    p = fit_scaler(values)
    back = inverse_transform(p, transform(p, values))
    scale = np.maximum(np.abs(values), p.span)
    assert np.all(np.abs(back - values) <= 1e-12 * scale)


def test_make_windows_small():
    w = make_windows([1, 2, 3, 4], 2)
    assert w.inputs.tolist() == [[1, 2], [2, 3]]
    assert w.targets.tolist() == [3, 4]


def test_make_windows_count():
    assert len(make_windows(np.arange(100.0), 30)) == 70


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 40), st.integers(1, 80))
def test_make_windows_count_property(lookback, extra):
    assert len(make_windows(np.arange(lookback + extra, dtype=float), lookback)) == extra


def test_make_windows_reslicing_oracle():
    v = np.random.default_rng(9).normal(size=500)
    w = make_windows(v, 30)
    for i in range(len(w)):
        joined = list(w.inputs[i]) + [w.targets[i]]
        assert joined == list(v[i : i + 31])


def test_make_windows_too_short():
    with pytest.raises(SeriesTooShort):
        make_windows(np.arange(30.0), 30)


@pytest.mark.parametrize("n,frac,n_train", [(100, 0.8, 80), (10, 0.95, 9)])
def test_chrono_split_sizes(n, frac, n_train):
    train, test = chrono_split(make_windows(np.arange(n + 3.0), 3), frac)
    assert len(train) == n_train and len(test) == n - n_train
    assert train.targets[-1] < test.targets[0]


def test_chrono_split_empty_partition():
    with pytest.raises(EmptyPartition):
        chrono_split(list(range(5)), 0.1)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(), min_size=2, max_size=60), st.floats(0.05, 0.95))
def test_chrono_split_preserves_sequence(items, frac):
    try:
        a, b = chrono_split(items, frac)
    except EmptyPartition:
        return
    assert a + b == items
