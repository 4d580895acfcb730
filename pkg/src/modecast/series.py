"""Scaling, supervised windowing and chronological splitting."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRange, EmptyPartition, SeriesTooShort, TooFewValues

DEFAULT_LOOKBACK = 30
DEFAULT_TRAIN_FRACTION = 0.8


@dataclass(frozen=True)
class ScalerParams:
    observed_min: float
    observed_max: float

    def __post_init__(self):
        if not self.observed_max > self.observed_min:
            raise DegenerateRange(f"max {self.observed_max!r} must exceed min {self.observed_min!r}")

    @property
    def span(self):
        return self.observed_max - self.observed_min

    def to_dict(self):
        return {"observed_min": self.observed_min, "observed_max": self.observed_max}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["observed_min"]), float(d["observed_max"]))


@dataclass(frozen=True)
class SupervisedWindows:
    """``inputs[i] = values[i:i+L]`` and ``targets[i] = values[i+L]``."""

    inputs: np.ndarray
    targets: np.ndarray
    lookback: int

    def __len__(self):
        return len(self.targets)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return SupervisedWindows(self.inputs[idx], self.targets[idx], self.lookback)
        raise TypeError("SupervisedWindows supports slicing only")


@dataclass(frozen=True)
class SplitIndex:
    train_fraction: float
    boundary: int


def fit_scaler(values):
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        raise TooFewValues(f"need at least 2 values to fit a scaler, got {values.size}")
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        raise DegenerateRange(f"all values equal {lo!r}")
    return ScalerParams(lo, hi)


def transform(params, values):
    # out-of-range values extrapolate linearly; forecasts rely on it
    return (np.asarray(values, dtype=np.float64) - params.observed_min) / params.span


def inverse_transform(params, scaled):
    return np.asarray(scaled, dtype=np.float64) * params.span + params.observed_min


def make_windows(values, lookback=DEFAULT_LOOKBACK):
    values = np.ascontiguousarray(values, dtype=np.float64)
    if lookback < 1:
        raise ValueError("lookback must be positive")
    n = len(values)
    if n <= lookback:
        raise SeriesTooShort(f"series of length {n} is too short for lookback {lookback}")
    view = np.lib.stride_tricks.sliding_window_view(values, lookback)[: n - lookback]
    return SupervisedWindows(inputs=np.array(view), targets=values[lookback:].copy(), lookback=lookback)


def split_index(n_windows, train_fraction=DEFAULT_TRAIN_FRACTION):
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    boundary = math.floor(train_fraction * n_windows)
    if boundary == 0 or boundary == n_windows:
        raise EmptyPartition(
            f"train_fraction {train_fraction} on {n_windows} windows leaves an empty partition"
        )
    return SplitIndex(train_fraction, boundary)


def chrono_split(windows, train_fraction=DEFAULT_TRAIN_FRACTION):
    """Split windows (or any sliceable sequence) at ``floor(fraction * n)``."""
    split = split_index(len(windows), train_fraction)
    return windows[: split.boundary], windows[split.boundary :]
