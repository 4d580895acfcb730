"""Regression metrics: RMSE, MAE, MSE and R^2."""

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConstantActual, Empty, LengthMismatch

METRIC_NAMES = ("rmse", "mae", "mse", "r2")


@dataclass(frozen=True)
class MetricsReport:
    rmse: float
    mae: float
    mse: float
    r2: float

    def to_dict(self):
        return asdict(self)


def evaluate(actual, predicted):
    """Score ``predicted`` against ``actual``.

    R^2 uses the mean of ``actual`` as passed in, so partition metrics are
    relative to that partition's own mean.
    """
    y = np.asarray(actual, dtype=np.float64).ravel()
    y_hat = np.asarray(predicted, dtype=np.float64).ravel()
    if y.shape != y_hat.shape:
        raise LengthMismatch(f"actual has {y.size} values, predicted {y_hat.size}")
    if y.size == 0:
        raise Empty("cannot evaluate empty vectors")
    resid = y - y_hat
    sse = float(np.dot(resid, resid))
    centered = y - y.mean()
    sst = float(np.dot(centered, centered))
    if sst == 0.0:
        raise ConstantActual("R^2 is undefined when every actual value is identical")
    mse = sse / y.size
    return MetricsReport(
        rmse=float(np.sqrt(mse)),
        mae=float(np.mean(np.abs(resid))),
        mse=mse,
        r2=1.0 - sse / sst,
    )
