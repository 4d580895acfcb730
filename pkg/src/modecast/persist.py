"""On-disk layout for trained models and plot-ready outputs.

A model directory holds one JSON document per LSTM (``imf_01.json`` ...
``imf_K.json`` and ``plain.json``), a ``manifest.json`` with everything else
needed to forecast (scalers, VMD settings, mode tails, last date) and
``loss_history.csv``.  Floats are written with ``repr`` precision so a reload
is value-exact.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import IncompleteModel
from .neural import LossHistory, LstmParams, TrainConfig
from .pipeline import HybridModel, PipelineConfig, PlainModel, SubModel
from .series import ScalerParams, SplitIndex
from .vmd import VmdConfig

MANIFEST = "manifest.json"
PLAIN = "plain.json"
LOSS_HISTORY = "loss_history.csv"
FORMAT = "modecast-lstm/1"


def imf_filename(k):
    return f"imf_{k + 1:02d}.json"


def write_json(path, doc):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _submodel_doc(name, sub, train_cfg):
    return {
        "format": FORMAT,
        "name": name,
        "seed": sub.seed,
        "config": train_cfg.to_dict() | {"seed": sub.seed},
        "scaler": sub.scaler.to_dict(),
        "history": sub.history.to_dict(),
        "params": sub.params.to_dict(),
    }


def _submodel_from_doc(doc):
    return SubModel(
        scaler=ScalerParams.from_dict(doc["scaler"]),
        params=LstmParams.from_dict(doc["params"]),
        history=LossHistory(**doc["history"]),
        seed=int(doc["seed"]),
    )


def _pipeline_doc(cfg):
    return {
        "vmd": cfg.vmd.to_dict(),
        "train": cfg.train.to_dict(),
        "train_fraction": cfg.train_fraction,
        "mode": cfg.mode,
        "strict_segment": cfg.strict_segment,
    }


def _pipeline_from_doc(d):
    return PipelineConfig(
        vmd=VmdConfig(**d["vmd"]),
        train=TrainConfig(**d["train"]),
        train_fraction=float(d["train_fraction"]),
        mode=d["mode"],
        strict_segment=int(d["strict_segment"]),
    )


def save_models(directory, hybrid=None, plain=None):
    """Write whichever models are given plus the manifest and loss history."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {"format": "modecast-models/1"}
    if hybrid is not None:
        files = []
        for k, sub in enumerate(hybrid.submodels):
            name = imf_filename(k)
            write_json(directory / name, _submodel_doc(f"imf_{k + 1}", sub, hybrid.config.train))
            files.append(name)
        manifest["hybrid"] = {
            "pipeline": _pipeline_doc(hybrid.config),
            "series_scaler": hybrid.series_scaler.to_dict(),
            "split": {"train_fraction": hybrid.split.train_fraction, "boundary": hybrid.split.boundary},
            "center_freqs": hybrid.center_freqs.tolist(),
            "tails": hybrid.tails.tolist(),
            "last_date": str(hybrid.last_date),
            "files": files,
        }
    if plain is not None:
        write_json(directory / PLAIN, _submodel_doc("plain", plain.submodel, plain.config.train))
        manifest["plain"] = {
            "pipeline": _pipeline_doc(plain.config),
            "series_scaler": plain.series_scaler.to_dict(),
            "split": {"train_fraction": plain.split.train_fraction, "boundary": plain.split.boundary},
            "tail": plain.tail.tolist(),
            "last_date": str(plain.last_date),
            "files": [PLAIN],
        }
    write_json(directory / MANIFEST, manifest)
    write_loss_history(directory / LOSS_HISTORY, hybrid, plain)


def write_loss_history(path, hybrid=None, plain=None):
    rows = []
    if hybrid is not None:
        for k, sub in enumerate(hybrid.submodels):
            rows.append((f"imf_{k + 1}", sub.history))
    if plain is not None:
        rows.append(("plain", plain.submodel.history))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "epoch", "train_mse", "val_mse"])
        for name, hist in rows:
            for e, (tr, va) in enumerate(zip(hist.train_mse, hist.val_mse), start=1):
                w.writerow([name, e, repr(float(tr)), repr(float(va))])


def _manifest(directory):
    path = Path(directory) / MANIFEST
    if not path.is_file():
        raise IncompleteModel(f"{directory}: missing {MANIFEST}")
    return read_json(path)


def _load_doc(directory, name):
    path = Path(directory) / name
    if not path.is_file():
        raise IncompleteModel(f"{directory}: missing model file {name}")
    return read_json(path)


def load_hybrid(directory):
    m = _manifest(directory).get("hybrid")
    if m is None:
        raise IncompleteModel(f"{directory}: manifest has no hybrid model")
    subs = [_submodel_from_doc(_load_doc(directory, name)) for name in m["files"]]
    cfg = _pipeline_from_doc(m["pipeline"])
    if len(subs) != cfg.vmd.K:
        raise IncompleteModel(f"{directory}: {len(subs)} sub-models for K={cfg.vmd.K}")
    return HybridModel(
        config=cfg,
        series_scaler=ScalerParams.from_dict(m["series_scaler"]),
        submodels=subs,
        split=SplitIndex(**m["split"]),
        center_freqs=np.array(m["center_freqs"], dtype=np.float64),
        tails=np.array(m["tails"], dtype=np.float64),
        last_date=np.datetime64(m["last_date"], "D"),
    )


def load_plain(directory):
    m = _manifest(directory).get("plain")
    if m is None:
        raise IncompleteModel(f"{directory}: manifest has no plain model")
    return PlainModel(
        config=_pipeline_from_doc(m["pipeline"]),
        series_scaler=ScalerParams.from_dict(m["series_scaler"]),
        submodel=_submodel_from_doc(_load_doc(directory, PLAIN)),
        split=SplitIndex(**m["split"]),
        tail=np.array(m["tail"], dtype=np.float64),
        last_date=np.datetime64(m["last_date"], "D"),
    )


def write_forecast_csv(path, report):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "forecast_usd"])
        for d, v in zip(report.dates, report.ensemble_restored):
            w.writerow([str(d), repr(float(v))])


def write_forecast_modes_csv(path, report):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        K = report.per_mode.shape[0]
        w.writerow(["date"] + [f"imf_{k + 1}" for k in range(K)] + ["ensemble_scaled"])
        for t, d in enumerate(report.dates):
            w.writerow([str(d)] + [repr(float(x)) for x in report.per_mode[:, t]]
                       + [repr(float(report.ensemble_scaled[t]))])


def write_modes_csv(path, modes):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"imf_{k + 1}" for k in range(modes.shape[0])])
        for t in range(modes.shape[1]):
            w.writerow([t] + [repr(float(x)) for x in modes[:, t]])


def write_predictions_csv(path, hybrid_pred, plain_pred):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "actual", "hybrid_pred", "plain_pred", "partition"])
        for d, a, h, p, part in zip(
            hybrid_pred.dates, hybrid_pred.actual, hybrid_pred.predicted, plain_pred.predicted, hybrid_pred.partition
        ):
            w.writerow([str(d), repr(float(a)), repr(float(h)), repr(float(p)), part])
