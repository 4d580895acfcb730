import numpy as np
import pytest

from modecast import persist
from modecast.errors import DegenerateRange, HorizonZero, IncompleteModel
from modecast.ingest import TimeSeries
from modecast.neural import LstmParams, TrainConfig
from modecast.pipeline import (
    HybridModel,
    PipelineConfig,
    SubModel,
    compare,
    ensemble_sum,
    fit_hybrid,
    fit_plain,
    forecast_recursive,
    predict_fitted,
)
from modecast.series import ScalerParams, SplitIndex
from modecast.neural import LossHistory
from modecast.vmd import VmdConfig

SMALL = PipelineConfig(
    vmd=VmdConfig(K=3),
    train=TrainConfig(epochs=3, hidden_size=6, lookback=10, batch_size=16),
)


def synthetic(n=260, seed=0):
    t = np.arange(n)
    rng = np.random.default_rng(seed)
    v = 100 + 0.2 * t + 8 * np.sin(2 * np.pi * t / 40) + 3 * np.sin(2 * np.pi * t / 7) + rng.normal(0, 0.5, n)
    return TimeSeries.from_values(v, start="2020-01-01", name="synthetic")


@pytest.fixture(scope="module")
def fitted():
    return compare(synthetic(), SMALL)


def test_ensemble_sum_is_ordered_sum():
    rows = np.random.default_rng(3).normal(size=(7, 5))
    expected = rows[0].copy()
    for r in rows[1:]:
        expected = expected + r
    assert np.array_equal(ensemble_sum(rows), expected)


def test_compare_shapes_and_metrics(fitted):
    ts = synthetic()
    hp = fitted.hybrid_predictions
    assert len(hp.actual) == len(ts.values) - 10
    assert np.array_equal(hp.actual, ts.values[10:])
    assert hp.boundary == fitted.hybrid.split.boundary
    assert list(hp.partition).count("train") == hp.boundary
    d = fitted.report.to_dict()
    assert set(d) == {"vmd_lstm", "plain_lstm", "winners"}
    assert set(d["vmd_lstm"]) == {"train", "test"}
    assert fitted.hybrid.K == 3 and len(fitted.hybrid.submodels) == 3


def test_submodel_seeds_offset_by_mode_index(fitted):
    assert [s.seed for s in fitted.hybrid.submodels] == [42, 43, 44]
    assert fitted.plain.submodel.seed == 42


def test_forecast_ensemble_is_sum_of_modes(fitted):
    rep = forecast_recursive(fitted.hybrid, 12)
    assert rep.per_mode.shape == (3, 12)
    assert np.array_equal(rep.ensemble_scaled, ensemble_sum(rep.per_mode))
    assert np.all(np.isfinite(rep.ensemble_restored))
    assert np.all(np.diff(rep.dates).astype(int) == 1)
    assert rep.dates[0] == synthetic().dates[-1] + np.timedelta64(1, "D")


def test_horizon_one_is_one_step_prediction(fitted):
    model = fitted.hybrid
    rep = forecast_recursive(model, 1)
    for k, sub in enumerate(model.submodels):
        assert rep.per_mode[k, 0] == sub.predict_scaled(model.tails[k][None, :])[0]


def test_horizon_prefix_consistency(fitted):
    a = forecast_recursive(fitted.hybrid, 5)
    b = forecast_recursive(fitted.hybrid, 9)
    assert np.array_equal(a.per_mode, b.per_mode[:, :5])


def test_horizon_zero_rejected(fitted):
    with pytest.raises(HorizonZero):
        forecast_recursive(fitted.hybrid, 0)


def _identity_submodel(L):
    """An LSTM whose output is a constant 0.5 on the [0,1] scale."""
    p = LstmParams.zeros(2)
    p.b_out = 0.5
    return SubModel(ScalerParams(0.0, 1.0), p, LossHistory([], []), 0)


def test_constant_model_gives_flat_forecast():
    L = 4
    model = HybridModel(
        config=PipelineConfig(vmd=VmdConfig(K=2), train=TrainConfig(lookback=L)),
        series_scaler=ScalerParams(100.0, 200.0),
        submodels=[_identity_submodel(L), _identity_submodel(L)],
        split=SplitIndex(0.8, 10),
        center_freqs=np.array([0.0, 0.1]),
        tails=np.zeros((2, L)),
        last_date=np.datetime64("2024-01-01"),
    )
    rep = forecast_recursive(model, 6)
    assert np.all(rep.ensemble_scaled == 1.0)
    assert np.all(rep.ensemble_restored == 200.0)


def test_flat_series_fails_on_degenerate_range():
    ts = TimeSeries.from_values(np.full(120, 5.0), start="2020-01-01")
    for fit in (fit_hybrid, fit_plain):
        with pytest.raises(DegenerateRange):
            fit(ts, SMALL)


def test_deterministic_fit():
    a = fit_plain(synthetic(), SMALL)
    b = fit_plain(synthetic(), SMALL)
    assert np.array_equal(a.submodel.params.to_vector(), b.submodel.params.to_vector())


def test_strict_mode_does_not_look_ahead():
    """Perturbing test-period values must leave the strict model's training untouched."""
    cfg = PipelineConfig(
        vmd=VmdConfig(K=2),
        train=TrainConfig(epochs=1, hidden_size=4, lookback=8),
        mode="strict",
        strict_segment=64,
    )
    ts = synthetic(180)
    m1 = fit_hybrid(ts, cfg)
    v = ts.values.copy()
    v[-20:] *= 3.0
    m2 = fit_hybrid(TimeSeries(ts.dates, v), cfg)
    assert m1.series_scaler == m2.series_scaler
    for a, b in zip(m1.submodels, m2.submodels):
        assert np.array_equal(a.params.to_vector(), b.params.to_vector())
    # and the test-period inputs only see values before each target
    p1 = predict_fitted(m1, ts)
    p2 = predict_fitted(m1, TimeSeries(ts.dates, v))
    b = m1.split.boundary
    first_changed = len(v) - 20 - 8  # first window index whose target is perturbed
    assert np.array_equal(p1.predicted[: first_changed + 1], p2.predicted[: first_changed + 1])
    assert b <= first_changed


def test_paper_mode_scaler_sees_test_period():
    ts = synthetic(180)
    v = ts.values.copy()
    v[-1] = 10 * v.max()
    m = fit_plain(TimeSeries(ts.dates, v), PipelineConfig(train=TrainConfig(epochs=1, hidden_size=3, lookback=8)))
    assert m.series_scaler.observed_max == v[-1]


def test_persistence_round_trip(fitted, tmp_path):
    persist.save_models(tmp_path, fitted.hybrid, fitted.plain)
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["imf_01.json", "imf_02.json", "imf_03.json", "loss_history.csv", "manifest.json", "plain.json"]
    h = persist.load_hybrid(tmp_path)
    p = persist.load_plain(tmp_path)
    assert np.array_equal(forecast_recursive(h, 7).ensemble_restored, forecast_recursive(fitted.hybrid, 7).ensemble_restored)
    assert np.array_equal(forecast_recursive(p, 7).ensemble_restored, forecast_recursive(fitted.plain, 7).ensemble_restored)
    assert h.last_date == fitted.hybrid.last_date
    rows = (tmp_path / "loss_history.csv").read_text().splitlines()
    assert rows[0] == "model,epoch,train_mse,val_mse"
    assert len(rows) == 1 + 4 * 3


def test_incomplete_model_dir(fitted, tmp_path):
    with pytest.raises(IncompleteModel):
        persist.load_hybrid(tmp_path)
    persist.save_models(tmp_path, fitted.hybrid, fitted.plain)
    (tmp_path / "imf_02.json").unlink()
    with pytest.raises(IncompleteModel):
        persist.load_hybrid(tmp_path)
