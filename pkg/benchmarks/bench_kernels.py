"""Time the numba-compiled kernels against their pure-numpy originals.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Both paths run in one process: a numba dispatcher keeps the undecorated
function as ``.py_func``.  With MODECAST_DISABLE_NUMBA=1 only the numpy path
exists and the script says so.
"""

import argparse
import time

import numpy as np

from modecast import _accel
from modecast.ingest import load_fixture
from modecast.neural import LstmParams, _loss_and_grads
from modecast.series import fit_scaler, make_windows, transform
from modecast.vmd import VmdConfig, _admm_kernel, initial_omegas, mirror_extend


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def vmd_case(K):
    ts = load_fixture()
    x = transform(fit_scaler(ts.values), ts.values)
    ext, _ = mirror_extend(x)
    f_hat = np.fft.rfft(ext)
    freqs = np.arange(len(f_hat), dtype=np.float64) / len(ext)
    args = (f_hat, freqs, initial_omegas(VmdConfig(K=K)), 2000.0, 0.0, 1e-7, 100, False)
    return f"ADMM K={K}, N={len(x)}, 100 iters", args


def lstm_case(hidden, lookback, batch):
    t = np.arange(batch + lookback)
    w = make_windows(0.5 + 0.4 * np.sin(t / 9.0), lookback)[:batch]
    W, b, w_out, b_out = LstmParams.init(hidden, seed=0).stacked()
    args = (W, b, w_out, b_out, w.inputs, w.targets)
    return f"LSTM BPTT H={hidden}, L={lookback}, batch={batch}", args


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    cases = [(_admm_kernel, vmd_case(5)), (_admm_kernel, vmd_case(15)),
             (_loss_and_grads, lstm_case(64, 30, 32)), (_loss_and_grads, lstm_case(16, 30, 256))]

    print(f"backend: {_accel.backend_name()}")
    print(f"{'case':<40} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for kernel, (label, kargs) in cases:
        py = getattr(kernel, "py_func", kernel)
        t_py = best_of(lambda: py(*kargs), args.repeat)
        if kernel is py:
            print(f"{label:<40} {t_py:>10.4f} {'n/a':>10} {'':>8}")
            continue
        kernel(*kargs)  # compile (or load from cache) outside the timing
        t_nb = best_of(lambda: kernel(*kargs), args.repeat)
        print(f"{label:<40} {t_py:>10.4f} {t_nb:>10.4f} {t_py / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
