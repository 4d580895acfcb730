"""Hybrid VMD+LSTM and plain-LSTM forecasting pipelines.

Hybrid: scale the series, decompose it into K modes, scale each mode onto
[0, 1], window it, train one LSTM per mode, then sum the per-mode predictions
and undo the series scaling.  Plain: the same steps on the scaled series with
no decomposition.

Two modes control look-ahead:

``paper``
    Series scaler, decomposition and per-mode scalers see the whole series
    (including the test period) before the split, as in the original workflow.
``strict``
    All of them are fitted on the training span only.  Test inputs come from
    decomposing a trailing segment that ends just before each target.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import neural
from .errors import ConfigError, HorizonZero, ModecastError, ShapeMismatch
from .metrics import METRIC_NAMES, MetricsReport, evaluate
from .neural import LossHistory, LstmParams, TrainConfig
from .series import (
    DEFAULT_TRAIN_FRACTION,
    ScalerParams,
    SplitIndex,
    SupervisedWindows,
    fit_scaler,
    inverse_transform,
    make_windows,
    split_index,
    transform,
)
from .vmd import VmdConfig, decompose

log = logging.getLogger(__name__)

MODES = ("paper", "strict")
VAL_FRACTION = 0.1
STRICT_SEGMENT = 512


class SubModelError(ModecastError):
    """A failure while fitting one per-mode model, tagged with its index."""

    def __init__(self, imf_index, cause):
        super().__init__(f"IMF {imf_index + 1}: {cause}")
        self.imf_index = imf_index
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)


@dataclass(frozen=True)
class PipelineConfig:
    vmd: VmdConfig = field(default_factory=VmdConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    train_fraction: float = DEFAULT_TRAIN_FRACTION
    mode: str = "paper"
    strict_segment: int = STRICT_SEGMENT

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")


@dataclass
class SubModel:
    """One LSTM with the scaler that maps its input signal onto [0, 1]."""

    scaler: ScalerParams
    params: LstmParams
    history: LossHistory
    seed: int

    def predict_scaled(self, inputs):
        """Predict from windows given in the signal's own units."""
        x = transform(self.scaler, inputs)
        return inverse_transform(self.scaler, neural.predict_batch(self.params, x))

    def roll(self, tail, horizon):
        """Iterated one-step forecast from ``tail`` (signal units)."""
        window = transform(self.scaler, tail).copy()
        out = np.empty(horizon)
        for h in range(horizon):
            p = neural.predict_batch(self.params, window[None, :])[0]
            out[h] = p
            window = np.append(window[1:], p)
        return inverse_transform(self.scaler, out)


@dataclass
class HybridModel:
    config: PipelineConfig
    series_scaler: ScalerParams
    submodels: list
    split: SplitIndex
    center_freqs: np.ndarray
    tails: np.ndarray  # (K, L) last L values of every mode, series-scaled units
    last_date: np.datetime64

    @property
    def K(self):
        return len(self.submodels)


@dataclass
class PlainModel:
    config: PipelineConfig
    series_scaler: ScalerParams
    submodel: SubModel
    split: SplitIndex
    tail: np.ndarray
    last_date: np.datetime64


@dataclass
class Predictions:
    """One-step predictions over every historical window, in restored units."""

    dates: np.ndarray
    actual: np.ndarray
    predicted: np.ndarray
    boundary: int

    @property
    def partition(self):
        labels = np.full(len(self.actual), "test", dtype=object)
        labels[: self.boundary] = "train"
        return labels

    def metrics(self):
        b = self.boundary
        return {
            "train": evaluate(self.actual[:b], self.predicted[:b]),
            "test": evaluate(self.actual[b:], self.predicted[b:]),
        }


@dataclass
class ForecastReport:
    horizon: int
    per_mode: np.ndarray  # (K, horizon), series-scaled units
    ensemble_scaled: np.ndarray
    ensemble_restored: np.ndarray
    start_date: np.datetime64

    @property
    def dates(self):
        return self.start_date + np.arange(self.horizon)


@dataclass
class ComparisonReport:
    hybrid: dict  # partition -> MetricsReport
    plain: dict

    @property
    def winners(self):
        out = {}
        for name in METRIC_NAMES:
            h = getattr(self.hybrid["test"], name)
            p = getattr(self.plain["test"], name)
            hybrid_wins = h > p if name == "r2" else h < p
            out[name] = "vmd_lstm" if hybrid_wins else "plain_lstm"
        return out

    def to_dict(self):
        return {
            "vmd_lstm": {part: m.to_dict() for part, m in self.hybrid.items()},
            "plain_lstm": {part: m.to_dict() for part, m in self.plain.items()},
            "winners": self.winners,
        }


@dataclass
class CompareResult:
    report: ComparisonReport
    hybrid: HybridModel
    plain: PlainModel
    hybrid_predictions: Predictions
    plain_predictions: Predictions


def ensemble_sum(per_mode):
    """Sum rows in index order; the fixed order makes the result reproducible."""
    per_mode = np.asarray(per_mode, dtype=np.float64)
    total = np.zeros(per_mode.shape[1:])
    for row in per_mode:
        total = total + row
    return total


def _layout(n_values, lookback, train_fraction):
    if n_values <= lookback:
        make_windows(np.zeros(n_values), lookback)  # raises SeriesTooShort
    split = split_index(n_values - lookback, train_fraction)
    return split, lookback + split.boundary  # values touched by training windows


def _fit_submodel(signal, train_end, boundary, cfg, seed, fit_scaler_on):
    """Scale ``signal``, window it and train on the first ``boundary`` windows."""
    scaler = fit_scaler(fit_scaler_on)
    windows = make_windows(transform(scaler, signal[:train_end]), cfg.lookback)
    train_part = windows[:boundary]
    n_fit = int(np.floor((1.0 - VAL_FRACTION) * boundary))
    n_fit = min(max(n_fit, 1), boundary - 1)
    params, history = neural.train(train_part[:n_fit], train_part[n_fit:], replace(cfg, seed=seed))
    return SubModel(scaler=scaler, params=params, history=history, seed=seed)


def fit_hybrid(series, config=None):
    """Decompose, then train one LSTM per mode (seed = base seed + mode index)."""
    config = config or PipelineConfig()
    values = np.asarray(series.values, dtype=np.float64)
    L = config.train.lookback
    split, train_end = _layout(len(values), L, config.train_fraction)
    strict = config.mode == "strict"

    series_scaler = fit_scaler(values[:train_end] if strict else values)
    scaled = transform(series_scaler, values)
    full = decompose(scaled, config.vmd)
    fit_modes = decompose(scaled[:train_end], config.vmd).modes if strict else full.modes
    log.info("decomposed into %d modes (%d iterations)", full.K, full.iterations_used)

    submodels = []
    for k in range(config.vmd.K):
        mode = fit_modes[k]
        try:
            sub = _fit_submodel(
                mode,
                train_end,
                split.boundary,
                config.train,
                config.train.seed + k,
                mode[:train_end] if strict else mode,
            )
        except Exception as exc:
            raise SubModelError(k, exc) from exc
        log.info("IMF %d: val mse %.3g", k + 1, sub.history.val_mse[-1])
        submodels.append(sub)

    return HybridModel(
        config=config,
        series_scaler=series_scaler,
        submodels=submodels,
        split=split,
        center_freqs=full.center_freqs,
        tails=full.modes[:, -L:].copy(),
        last_date=series.dates[-1],
    )


def fit_plain(series, config=None):
    """The same scaling, windowing, split and training on the undecomposed series."""
    config = config or PipelineConfig()
    values = np.asarray(series.values, dtype=np.float64)
    L = config.train.lookback
    split, train_end = _layout(len(values), L, config.train_fraction)
    strict = config.mode == "strict"
    series_scaler = fit_scaler(values[:train_end] if strict else values)
    scaled = transform(series_scaler, values)
    # the series is already on [0, 1]; an identity-range scaler keeps SubModel uniform
    sub = _fit_submodel(
        scaled,
        train_end,
        split.boundary,
        config.train,
        config.train.seed,
        scaled[:train_end] if strict else scaled,
    )
    return PlainModel(
        config=config,
        series_scaler=series_scaler,
        submodel=sub,
        split=split,
        tail=scaled[-L:].copy(),
        last_date=series.dates[-1],
    )


def _mode_windows(model, scaled):
    """Per-mode input windows, ``(K, n_windows, L)`` in series-scaled units."""
    cfg = model.config
    L = cfg.train.lookback
    n_windows = len(scaled) - L
    if cfg.mode == "paper":
        modes = decompose(scaled, cfg.vmd).modes
        return np.stack([make_windows(m, L).inputs for m in modes])

    b = model.split.boundary
    train_modes = decompose(scaled[: L + b], cfg.vmd).modes
    out = np.empty((model.K, n_windows, L))
    for k in range(model.K):
        out[k, :b] = make_windows(train_modes[k], L).inputs
    seg = max(cfg.strict_segment, 2 * cfg.vmd.K, L + 1)
    for i in range(b, n_windows):
        target = i + L
        lo = max(0, target - seg)
        modes = decompose(scaled[lo:target], cfg.vmd).modes
        out[:, i] = modes[:, -L:]
    return out


def predict_fitted(model, series):
    """Restored one-step predictions for every window of ``series``."""
    values = np.asarray(series.values, dtype=np.float64)
    L = model.config.train.lookback
    scaled = transform(model.series_scaler, values)
    if isinstance(model, HybridModel):
        inputs = _mode_windows(model, scaled)
        if inputs.shape[0] != model.K:
            raise ShapeMismatch(f"{inputs.shape[0]} mode inputs for {model.K} sub-models")
        per_mode = [sub.predict_scaled(inputs[k]) for k, sub in enumerate(model.submodels)]
        pred_scaled = ensemble_sum(per_mode)
    else:
        pred_scaled = model.submodel.predict_scaled(make_windows(scaled, L).inputs)
    return Predictions(
        dates=series.dates[L:],
        actual=values[L:],
        predicted=inverse_transform(model.series_scaler, pred_scaled),
        boundary=model.split.boundary,
    )


def forecast_recursive(model, horizon=30):
    """Roll every sub-model forward ``horizon`` steps and sum the modes."""
    if horizon < 1:
        raise HorizonZero(f"horizon must be >= 1, got {horizon}")
    if isinstance(model, HybridModel):
        per_mode = np.stack([sub.roll(model.tails[k], horizon) for k, sub in enumerate(model.submodels)])
    else:
        per_mode = model.submodel.roll(model.tail, horizon)[None, :]
    ensemble = ensemble_sum(per_mode)
    return ForecastReport(
        horizon=horizon,
        per_mode=per_mode,
        ensemble_scaled=ensemble,
        ensemble_restored=inverse_transform(model.series_scaler, ensemble),
        start_date=model.last_date + np.timedelta64(1, "D"),
    )


def compare(series, config=None):
    """Train both pipelines with the same base seed and score them in restored units."""
    config = config or PipelineConfig()
    hybrid = fit_hybrid(series, config)
    plain = fit_plain(series, config)
    hp = predict_fitted(hybrid, series)
    pp = predict_fitted(plain, series)
    if not np.array_equal(hp.dates, pp.dates) or hp.boundary != pp.boundary:
        raise ShapeMismatch("hybrid and plain predictions are not aligned")
    report = ComparisonReport(hybrid=hp.metrics(), plain=pp.metrics())
    return CompareResult(report, hybrid, plain, hp, pp)


def metrics_from_dict(d):
    return MetricsReport(**{k: float(d[k]) for k in METRIC_NAMES})
