"""Hybrid variational-mode-decomposition + LSTM forecasting."""

from ._accel import NUMBA_ENABLED, backend_name
from .ingest import DescriptiveStats, TimeSeries, describe, load_csv, load_fixture
from .metrics import MetricsReport, evaluate
from .neural import LstmParams, TrainConfig
from .pipeline import (
    ForecastReport,
    PipelineConfig,
    compare,
    fit_hybrid,
    fit_plain,
    forecast_recursive,
    predict_fitted,
)
from .vmd import ModeSet, VmdConfig, decompose, residual_energy, sweep_k

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "DescriptiveStats",
    "ForecastReport",
    "LstmParams",
    "MetricsReport",
    "ModeSet",
    "PipelineConfig",
    "TimeSeries",
    "TrainConfig",
    "VmdConfig",
    "backend_name",
    "compare",
    "decompose",
    "describe",
    "evaluate",
    "fit_hybrid",
    "fit_plain",
    "forecast_recursive",
    "load_csv",
    "load_fixture",
    "predict_fitted",
    "residual_energy",
    "sweep_k",
]
