#!/usr/bin/env python3
"""Regenerate the bundled surrogate BTC-USD daily fixture.

The real 2017-08-11..2025-06-13 Yahoo Finance snapshot cannot be redistributed
or fetched offline, so this script builds a stand-in:

1. a log-price skeleton through approximate historical turning points,
2. Brownian-bridge noise between those points (seeded),
3. a monotone rank remap so the summary statistics equal the published
   ones (count, min, quartiles, median, max, mean, sample std).

The remap keeps the ordering of the path, so turning points, regimes and
local shape survive; only the marginal distribution is pinned.  One day has
its Close left empty to exercise the missing-value drop (2,864 calendar days,
2,863 usable rows).

Usage:  python tools/make_fixture.py [output.csv]
"""

import csv
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares

SEED = 20250613
START, END = np.datetime64("2017-08-11"), np.datetime64("2025-06-13")
MISSING_DAY = np.datetime64("2019-03-10")
DAILY_LOG_VOL = 0.022

TARGET = {
    "mean": 30872.06,
    "std": 26673.85,
    "min": 3154.95,
    "q25": 8803.47,
    "median": 22487.39,
    "q75": 46352.58,
    "max": 111673.28,
}

ANCHORS = [
    ("2017-08-11", 3420),
    ("2017-09-14", 3230),
    ("2017-12-17", 19300),
    ("2018-02-06", 6900),
    ("2018-03-05", 11500),
    ("2018-04-06", 6600),
    ("2018-05-05", 9800),
    ("2018-06-29", 5900),
    ("2018-07-25", 8200),
    ("2018-11-13", 6300),
    ("2018-12-15", 3180),
    ("2019-06-26", 12900),
    ("2019-12-17", 6600),
    ("2020-02-13", 10300),
    ("2020-03-12", 4900),
    ("2020-07-20", 9200),
    ("2020-10-20", 12000),
    ("2020-12-31", 29000),
    ("2021-04-13", 63500),
    ("2021-07-20", 29800),
    ("2021-11-08", 67500),
    ("2022-01-22", 35000),
    ("2022-03-28", 47500),
    ("2022-06-18", 19000),
    ("2022-11-21", 15800),
    ("2023-04-13", 30400),
    ("2023-09-11", 25100),
    ("2023-12-31", 42300),
    ("2024-03-13", 73000),
    ("2024-08-05", 54000),
    ("2024-11-12", 88000),
    ("2024-12-17", 106000),
    ("2025-01-20", 102000),
    ("2025-04-08", 76300),
    ("2025-05-22", 111500),
    ("2025-06-13", 105900),
]


def skeleton_path(rng):
    days = np.arange(START, END + np.timedelta64(1, "D"))
    t_anchor = np.array([(np.datetime64(d) - START).astype(int) for d, _ in ANCHORS])
    log_anchor = np.log([p for _, p in ANCHORS])
    t = np.arange(len(days))
    base = np.interp(t, t_anchor, log_anchor)
    noise = np.zeros(len(days))
    for a, b in zip(t_anchor[:-1], t_anchor[1:]):
        steps = rng.normal(0.0, DAILY_LOG_VOL, b - a)
        walk = np.concatenate([[0.0], np.cumsum(steps)])
        frac = np.arange(b - a + 1) / (b - a)
        noise[a : b + 1] = walk - frac * walk[-1]
    return days, base + noise


def knot_values(s):
    """Map six (0, 1) fractions onto monotone interior knot values."""
    lo, q25, med, q75, hi = (TARGET[k] for k in ("min", "q25", "median", "q75", "max"))
    a = lo + s[0] * (q25 - lo)
    b = a + s[1] * (q25 - a)
    c = q25 + s[2] * (med - q25)
    d = med + s[3] * (q75 - med)
    e = q75 + s[4] * (hi - q75)
    f = e + s[5] * (hi - e)
    return np.array([lo, a, b, q25, c, med, d, q75, e, f, hi])


def quantile_curve(s, p):
    # log-linear between knots; fixed knots pin min/quartiles/median/max
    knots_p = np.array([0.0, 0.04, 0.12, 0.25, 0.38, 0.5, 0.62, 0.75, 0.86, 0.95, 1.0])
    return np.exp(np.interp(p, knots_p, np.log(knot_values(s))))


def calibrate(n):
    p = np.arange(n) / (n - 1)

    def resid(s):
        v = quantile_curve(s, p)
        return [
            (v.mean() - TARGET["mean"]) / 10.0,
            (v.std(ddof=1) - TARGET["std"]) / 10.0,
            (np.quantile(v, 0.25) - TARGET["q25"]) / 10.0,
            (np.quantile(v, 0.75) - TARGET["q75"]) / 10.0,
        ]

    fit = least_squares(resid, np.full(6, 0.5), bounds=(0.01, 0.99), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return quantile_curve(fit.x, p)


def main(out):
    rng = np.random.default_rng(SEED)
    days, log_path = skeleton_path(rng)
    keep = days != MISSING_DAY
    ranks = np.empty(keep.sum(), dtype=int)
    ranks[np.argsort(log_path[keep], kind="stable")] = np.arange(keep.sum())
    values = np.round(calibrate(keep.sum())[ranks], 2)

    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    it = iter(values)
    with out.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Date", "Close"])
        for day, k in zip(days, keep):
            w.writerow([str(day), f"{next(it):.2f}" if k else ""])

    v = np.sort(values)
    print(f"wrote {out}: {len(days)} rows, {len(v)} usable")
    print(
        f"mean={v.mean():.2f} std={v.std(ddof=1):.2f} min={v[0]:.2f} "
        f"q25={np.quantile(v, .25):.2f} median={np.median(v):.2f} "
        f"q75={np.quantile(v, .75):.2f} max={v[-1]:.2f}"
    )


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "src" / "modecast" / "data" / "btc_fixture.csv"
    main(sys.argv[1] if len(sys.argv) > 1 else default)
