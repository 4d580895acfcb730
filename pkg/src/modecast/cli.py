"""Command-line front end.

Every subcommand is a thin wrapper over library calls and writes plain
CSV/JSON for plotting, plus ``run_config.json`` describing the run.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import persist
from .errors import ConfigError, ModecastError
from .ingest import FIXTURE_PATH, describe, load_csv
from .neural import TrainConfig
from .pipeline import MODES, PipelineConfig, compare, fit_hybrid, fit_plain, forecast_recursive
from .series import fit_scaler, transform
from .vmd import VmdConfig, decompose, sweep_k

log = logging.getLogger("modecast")

SEED_ENV = "MODECAST_SEED"
DEFAULT_SEED = 42


@dataclass
class RunConfig:
    command: str
    input: str
    output: str
    date_column: str = "Date"
    value_column: str = "Close"
    K: int = 15
    alpha: float = 2000.0
    tau: float = 0.0
    kmin: int = 5
    kmax: int = 20
    dc_mode: bool = False
    normalize: bool = False
    lookback: int = 30
    epochs: int = 20
    batch_size: int = 32
    learning_rate: float = 1e-3
    hidden_size: int = 64
    seed: int = DEFAULT_SEED
    train_fraction: float = 0.8
    horizon: int = 30
    mode: str = "paper"
    model_dir: str | None = None

    def validate(self):
        if self.kmin > self.kmax:
            raise ConfigError("kmin exceeds kmax")
        if self.kmin < 1:
            raise ConfigError("kmin must be >= 1")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train fraction must lie in (0, 1)")
        # constructing the configs runs their own checks
        self.vmd_config()
        self.pipeline_config()

    def vmd_config(self, K=None):
        return VmdConfig(K=self.K if K is None else K, alpha=self.alpha, tau=self.tau, dc_mode=self.dc_mode)

    def pipeline_config(self):
        return PipelineConfig(
            vmd=self.vmd_config(),
            train=TrainConfig(
                epochs=self.epochs,
                batch_size=self.batch_size,
                learning_rate=self.learning_rate,
                seed=self.seed,
                hidden_size=self.hidden_size,
                lookback=self.lookback,
            ),
            train_fraction=self.train_fraction,
            mode=self.mode,
        )


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="modecast",
        description="VMD + LSTM hybrid forecasting of a daily price series.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default):
        p.add_argument("--input", default=str(FIXTURE_PATH), help="daily price CSV (default: bundled fixture)")
        p.add_argument("--output", "--out-dir", dest="output", default=out_default, help="output directory")
        p.add_argument("--date-column", default="Date")
        p.add_argument("--value-column", default="Close")

    def vmd_args(p):
        p.add_argument("--k", dest="K", type=int, default=15, help="number of modes")
        p.add_argument("--alpha", type=float, default=2000.0, help="bandwidth penalty")
        p.add_argument("--tau", type=float, default=0.0, help="dual ascent step (0 = noise slack)")
        p.add_argument("--dc-mode", action="store_true", help="pin the first mode at zero frequency")

    def train_args(p):
        p.add_argument("--lookback", type=int, default=30)
        p.add_argument("--epochs", type=int, default=20)
        p.add_argument("--batch-size", type=int, default=32)
        p.add_argument("--learning-rate", type=float, default=1e-3)
        p.add_argument("--hidden-size", type=int, default=64)
        p.add_argument("--seed", type=int, default=None, help=f"base seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
        p.add_argument("--train-fraction", type=float, default=0.8)
        p.add_argument("--mode", choices=MODES, default="paper")

    p = sub.add_parser("describe", help="summary statistics of the input series")
    common(p, "out/describe")

    p = sub.add_parser("ksweep", help="residual energy for a range of K")
    common(p, "out/ksweep")
    vmd_args(p)
    p.add_argument("--kmin", type=int, default=5)
    p.add_argument("--kmax", type=int, default=20)

    p = sub.add_parser("decompose", help="write the modes of the input series")
    common(p, "out/decompose")
    vmd_args(p)
    p.add_argument("--normalize", action="store_true", help="MinMax-scale before decomposing")

    p = sub.add_parser("train", help="fit the hybrid and plain models")
    common(p, "out/model")
    vmd_args(p)
    train_args(p)

    p = sub.add_parser("forecast", help="recursive forecast from a trained model directory")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--output", "--out-dir", dest="output", default=None, help="default: the model directory")
    p.add_argument("--horizon", type=int, default=30)

    p = sub.add_parser("compare", help="train both pipelines and score them")
    common(p, "out/compare")
    vmd_args(p)
    train_args(p)
    return parser


def run_config_from_args(args):
    fields = {f for f in RunConfig.__dataclass_fields__}
    values = {k: v for k, v in vars(args).items() if k in fields and v is not None}
    if args.command == "forecast":
        values.setdefault("output", args.model_dir)
        values["input"] = ""
    if getattr(args, "seed", None) is None:
        values["seed"] = _default_seed()
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def _out(cfg):
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    persist.write_json(out / "run_config.json", asdict(cfg))
    return out


def _series(cfg):
    return load_csv(cfg.input, cfg.date_column, cfg.value_column)


def cmd_describe(cfg):
    out = _out(cfg)
    stats = describe(_series(cfg))
    persist.write_json(out / "describe.json", stats.as_dict())
    print(json.dumps(stats.as_dict(), indent=1))


def cmd_ksweep(cfg):
    out = _out(cfg)
    ts = _series(cfg)
    scaled = transform(fit_scaler(ts.values), ts.values)
    result = sweep_k(scaled, cfg.kmin, cfg.kmax, cfg.vmd_config())
    with open(out / "ksweep.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["K", "residual_energy"])
        for K, ratio in result.rows:
            w.writerow([K, repr(float(ratio))])
    log.info("wrote %d rows to %s", len(result.rows), out / "ksweep.csv")


def cmd_decompose(cfg):
    out = _out(cfg)
    ts = _series(cfg)
    signal = transform(fit_scaler(ts.values), ts.values) if cfg.normalize else ts.values
    vcfg = cfg.vmd_config()
    ms = decompose(signal, vcfg)
    persist.write_modes_csv(out / "modes.csv", ms.modes)
    persist.write_json(
        out / "freqs.json",
        {
            "center_freqs": ms.center_freqs.tolist(),
            "alpha": vcfg.alpha,
            "K": vcfg.K,
            "iterations_used": ms.iterations_used,
            "converged": ms.converged,
        },
    )


def cmd_train(cfg):
    out = _out(cfg)
    ts = _series(cfg)
    pcfg = cfg.pipeline_config()
    hybrid = fit_hybrid(ts, pcfg)
    plain = fit_plain(ts, pcfg)
    persist.save_models(out, hybrid, plain)


def cmd_forecast(cfg):
    out = _out(cfg)
    model = persist.load_hybrid(cfg.model_dir)
    report = forecast_recursive(model, cfg.horizon)
    persist.write_forecast_csv(out / "forecast.csv", report)
    persist.write_forecast_modes_csv(out / "forecast_modes.csv", report)


def cmd_compare(cfg):
    out = _out(cfg)
    ts = _series(cfg)
    result = compare(ts, cfg.pipeline_config())
    persist.save_models(out, result.hybrid, result.plain)
    persist.write_json(out / "comparison.json", result.report.to_dict())
    persist.write_predictions_csv(out / "predictions.csv", result.hybrid_predictions, result.plain_predictions)
    print(json.dumps(result.report.to_dict(), indent=1))


COMMANDS = {
    "describe": cmd_describe,
    "ksweep": cmd_ksweep,
    "decompose": cmd_decompose,
    "train": cmd_train,
    "forecast": cmd_forecast,
    "compare": cmd_compare,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = run_config_from_args(args)
        COMMANDS[args.command](cfg)
    except ModecastError as exc:
        print(f"modecast {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        # unreadable input or malformed values not covered above
        print(f"modecast {args.command}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
