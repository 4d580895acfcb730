"""Single-layer LSTM regressor written from scratch.

A window of L scalars is fed through L cell steps starting from a zero state;
a dense head maps the last hidden state to one prediction.  Training is
mini-batch Adam on mean squared error with gradients from backpropagation
through time.

The batched forward/backward pass lives in :func:`_loss_and_grads`, the one
hot kernel; :func:`cell_step` and :func:`forward` are the readable
single-sample path used for inference checks.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from ._accel import maybe_njit
from .errors import (
    ConfigError,
    EmptyPartition,
    LengthMismatch,
    NonFiniteActivation,
    ShapeMismatch,
)
from .errors import Empty as EmptyInput

GATES = ("f", "i", "c", "o")
BETA1, BETA2, ADAM_EPS = 0.9, 0.999, 1e-8


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 20
    batch_size: int = 32
    learning_rate: float = 1e-3
    seed: int = 42
    hidden_size: int = 64
    lookback: int = 30

    def __post_init__(self):
        for name in ("epochs", "batch_size", "hidden_size", "lookback"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be positive")

    def to_dict(self):
        return asdict(self)


@dataclass
class LstmParams:
    """Gate weights act on the concatenation ``[h_{t-1}, x_t]``."""

    W_f: np.ndarray
    W_i: np.ndarray
    W_c: np.ndarray
    W_o: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray
    W_out: np.ndarray
    b_out: float

    @property
    def hidden_size(self):
        return self.W_f.shape[0]

    @property
    def input_size(self):
        return self.W_f.shape[1] - self.W_f.shape[0]

    @classmethod
    def zeros(cls, hidden_size, input_size=1):
        H, n = hidden_size, hidden_size + input_size
        return cls(
            *(np.zeros((H, n)) for _ in GATES),
            *(np.zeros(H) for _ in GATES),
            W_out=np.zeros(H),
            b_out=0.0,
        )

    @classmethod
    def init(cls, hidden_size, input_size=1, seed=0, rng=None):
        """Uniform(+-1/sqrt(fan_in)) weights, zero biases except ``b_f = 1``."""
        rng = rng if rng is not None else np.random.default_rng(seed)
        H, n = hidden_size, hidden_size + input_size
        lim = 1.0 / np.sqrt(n)
        weights = [rng.uniform(-lim, lim, (H, n)) for _ in GATES]
        w_out = rng.uniform(-1.0 / np.sqrt(H), 1.0 / np.sqrt(H), H)
        return cls(
            *weights,
            b_f=np.ones(H),
            b_i=np.zeros(H),
            b_c=np.zeros(H),
            b_o=np.zeros(H),
            W_out=w_out,
            b_out=0.0,
        )

    def validate(self):
        H = self.hidden_size
        n = self.W_f.shape[1]
        for g in GATES:
            if getattr(self, "W_" + g).shape != (H, n):
                raise ShapeMismatch(f"W_{g} has shape {getattr(self, 'W_' + g).shape}, expected {(H, n)}")
            if getattr(self, "b_" + g).shape != (H,):
                raise ShapeMismatch(f"b_{g} must have length {H}")
        if np.shape(self.W_out) != (H,):
            raise ShapeMismatch(f"W_out must have length {H}")

    # stacked layout used by the kernels: rows ordered f, i, c, o
    def stacked(self):
        W = np.ascontiguousarray(np.vstack([self.W_f, self.W_i, self.W_c, self.W_o]))
        b = np.concatenate([self.b_f, self.b_i, self.b_c, self.b_o])
        return W, b, np.ascontiguousarray(self.W_out, dtype=np.float64), float(self.b_out)

    @classmethod
    def from_stacked(cls, W, b, w_out, b_out):
        H = W.shape[0] // 4
        Ws = [W[k * H : (k + 1) * H].copy() for k in range(4)]
        bs = [b[k * H : (k + 1) * H].copy() for k in range(4)]
        return cls(*Ws, *bs, W_out=np.array(w_out, dtype=np.float64), b_out=float(b_out))

    def to_vector(self):
        W, b, w_out, b_out = self.stacked()
        return np.concatenate([W.ravel(), b, w_out, [b_out]])

    @classmethod
    def from_vector(cls, vec, hidden_size, input_size=1):
        W, b, w_out, b_out = _unpack(vec, hidden_size, input_size)
        return cls.from_stacked(W, b, w_out, b_out)

    def copy(self):
        return LstmParams.from_vector(self.to_vector(), self.hidden_size, self.input_size)

    def to_dict(self):
        d = {"hidden_size": self.hidden_size, "input_size": self.input_size}
        for g in GATES:
            d["W_" + g] = getattr(self, "W_" + g).ravel().tolist()
            d["b_" + g] = getattr(self, "b_" + g).tolist()
        d["W_out"] = np.asarray(self.W_out).tolist()
        d["b_out"] = float(self.b_out)
        return d

    @classmethod
    def from_dict(cls, d):
        H, I = int(d["hidden_size"]), int(d["input_size"])
        kw = {}
        for g in GATES:
            kw["W_" + g] = np.array(d["W_" + g], dtype=np.float64).reshape(H, H + I)
            kw["b_" + g] = np.array(d["b_" + g], dtype=np.float64)
        params = cls(**kw, W_out=np.array(d["W_out"], dtype=np.float64), b_out=float(d["b_out"]))
        params.validate()
        return params


def _unpack(vec, H, I=1):
    n = H + I
    a = 4 * H * n
    W = vec[:a].reshape(4 * H, n)
    b = vec[a : a + 4 * H]
    w_out = vec[a + 4 * H : a + 5 * H]
    return W, b, w_out, float(vec[a + 5 * H])


@dataclass
class LstmState:
    h: np.ndarray
    c: np.ndarray

    @classmethod
    def zeros(cls, hidden_size):
        return cls(np.zeros(hidden_size), np.zeros(hidden_size))


def _sigmoid(z):
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def cell_step(params, state, x_t):
    """One LSTM step.  Returns ``(new_state, cache)``.

    The cache holds the gate activations ``f, i, c_tilde, o`` together with
    the concatenated input and previous cell state.
    """
    H = params.hidden_size
    x_t = np.atleast_1d(np.asarray(x_t, dtype=np.float64))
    if x_t.shape != (params.input_size,) or state.h.shape != (H,) or state.c.shape != (H,):
        raise ShapeMismatch(
            f"cell_step got x{x_t.shape}, h{state.h.shape}, c{state.c.shape} for hidden={H}"
        )
    hx = np.concatenate([state.h, x_t])
    f = _sigmoid(params.W_f @ hx + params.b_f)
    i = _sigmoid(params.W_i @ hx + params.b_i)
    c_tilde = np.tanh(params.W_c @ hx + params.b_c)
    c = f * state.c + i * c_tilde
    o = _sigmoid(params.W_o @ hx + params.b_o)
    h = o * np.tanh(c)
    if not (np.all(np.isfinite(h)) and np.all(np.isfinite(c))):
        raise NonFiniteActivation("non-finite LSTM state")
    cache = {"hx": hx, "c_prev": state.c, "f": f, "i": i, "c_tilde": c_tilde, "o": o, "c": c, "h": h}
    return LstmState(h, c), cache


def forward(params, window):
    """Run the window from a zero state; returns ``(prediction, caches)``."""
    window = np.asarray(window, dtype=np.float64)
    if window.ndim != 1 or window.size == 0:
        raise ShapeMismatch("window must be a non-empty 1-D array")
    state = LstmState.zeros(params.hidden_size)
    caches = []
    for x_t in window:
        state, cache = cell_step(params, state, x_t)
        caches.append(cache)
    return float(np.dot(params.W_out, state.h) + params.b_out), caches


def predict(params, window):
    return forward(params, window)[0]


def mse_loss(predictions, targets):
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if p.shape != t.shape:
        raise LengthMismatch(f"predictions {p.shape} vs targets {t.shape}")
    if p.size == 0:
        raise EmptyInput("mse of empty vectors")
    d = p - t
    return float(np.dot(d.ravel(), d.ravel()) / d.size)


@maybe_njit
def _forward_kernel(W, b, w_out, b_out, X):
    B, L = X.shape
    H = W.shape[0] // 4
    WT = np.ascontiguousarray(W.T)
    hx = np.zeros((L, B, H + 1))
    gates = np.empty((L, B, 4 * H))
    cs = np.zeros((L + 1, B, H))
    h = np.zeros((B, H))
    for t in range(L):
        hx[t, :, :H] = h
        hx[t, :, H] = X[:, t]
        z = np.dot(hx[t], WT) + b
        g = gates[t]
        g[:, : 2 * H] = 1.0 / (1.0 + np.exp(-z[:, : 2 * H]))
        g[:, 2 * H : 3 * H] = np.tanh(z[:, 2 * H : 3 * H])
        g[:, 3 * H :] = 1.0 / (1.0 + np.exp(-z[:, 3 * H :]))
        cs[t + 1] = g[:, :H] * cs[t] + g[:, H : 2 * H] * g[:, 2 * H : 3 * H]
        h = g[:, 3 * H :] * np.tanh(cs[t + 1])
    preds = np.dot(h, w_out) + b_out
    return preds, h, hx, gates, cs


@maybe_njit
def _predict_kernel(W, b, w_out, b_out, X):
    return _forward_kernel(W, b, w_out, b_out, X)[0]


@maybe_njit
def _loss_and_grads(W, b, w_out, b_out, X, y):
    """Batch-mean squared error and its gradient w.r.t. every parameter."""
    B, L = X.shape
    H = W.shape[0] // 4
    preds, h_last, hx, gates, cs = _forward_kernel(W, b, w_out, b_out, X)
    err = preds - y
    loss = 0.0
    for n in range(B):
        loss += err[n] * err[n]
    loss /= B

    dpred = 2.0 * err / B
    dw_out = np.dot(dpred, h_last)
    db_out = 0.0
    for n in range(B):
        db_out += dpred[n]
    dW = np.zeros_like(W)
    db = np.zeros_like(b)
    dh = np.outer(dpred, w_out)
    dc = np.zeros((B, H))
    dz = np.empty((B, 4 * H))
    for t in range(L - 1, -1, -1):
        g = gates[t]
        f = g[:, :H]
        i = g[:, H : 2 * H]
        ct = g[:, 2 * H : 3 * H]
        o = g[:, 3 * H :]
        tc = np.tanh(cs[t + 1])
        dc = dc + dh * o * (1.0 - tc * tc)
        dz[:, :H] = dc * cs[t] * f * (1.0 - f)
        dz[:, H : 2 * H] = dc * ct * i * (1.0 - i)
        dz[:, 2 * H : 3 * H] = dc * i * (1.0 - ct * ct)
        dz[:, 3 * H :] = dh * tc * o * (1.0 - o)
        dW += np.dot(dz.T.copy(), hx[t])
        for n in range(B):
            db += dz[n]
        dh = np.dot(dz, W)[:, :H].copy()
        dc = dc * f
    return loss, dW, db, dw_out, db_out


def _check_batch(params, windows, targets):
    X = np.ascontiguousarray(windows, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeMismatch("windows must be a 2-D (batch, lookback) array")
    if params.input_size != 1:
        raise ShapeMismatch("batched kernels support scalar inputs only")
    if targets is not None:
        y = np.ascontiguousarray(targets, dtype=np.float64)
        if y.shape != (X.shape[0],):
            raise ShapeMismatch(f"targets shape {y.shape} does not match batch {X.shape[0]}")
        return X, y
    return X, None


def loss_and_gradients(params, windows, targets):
    """Batch-mean MSE and an :class:`LstmParams` of gradients."""
    X, y = _check_batch(params, windows, targets)
    W, b, w_out, b_out = params.stacked()
    loss, dW, db, dw_out, db_out = _loss_and_grads(W, b, w_out, b_out, X, y)
    return float(loss), LstmParams.from_stacked(dW, db, dw_out, db_out)


def backward(params, windows, targets):
    return loss_and_gradients(params, windows, targets)[1]


def predict_batch(params, windows):
    X, _ = _check_batch(params, windows, None)
    W, b, w_out, b_out = params.stacked()
    return np.asarray(_predict_kernel(W, b, w_out, b_out, X))


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, size):
        return cls(np.zeros(size), np.zeros(size), 0)


def adam_step(params, grads, state, learning_rate, t):
    """Bias-corrected Adam update on flat arrays; returns ``(params, state)``."""
    if t < 1:
        raise ValueError("Adam step index t must be >= 1")
    g = np.asarray(grads, dtype=np.float64)
    m = BETA1 * state.m + (1.0 - BETA1) * g
    v = BETA2 * state.v + (1.0 - BETA2) * (g * g)
    m_hat = m / (1.0 - BETA1**t)
    v_hat = v / (1.0 - BETA2**t)
    new = np.asarray(params, dtype=np.float64) - learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
    return new, AdamState(m, v, t)


@dataclass
class LossHistory:
    train_mse: list = field(default_factory=list)
    val_mse: list = field(default_factory=list)

    def to_dict(self):
        return {"train_mse": list(self.train_mse), "val_mse": list(self.val_mse)}


def train(train_windows, val_windows, config=None):
    """Fit a fresh network; returns ``(params, LossHistory)``.

    Each epoch visits the training windows in a seeded random order, in
    mini-batches of ``config.batch_size``.  After every epoch the full-pass
    MSE on both partitions is recorded.
    """
    config = config or TrainConfig()
    if len(train_windows) == 0 or len(val_windows) == 0:
        raise EmptyPartition("training and validation partitions must both be nonempty")
    X = np.ascontiguousarray(train_windows.inputs, dtype=np.float64)
    y = np.ascontiguousarray(train_windows.targets, dtype=np.float64)
    Xv = np.ascontiguousarray(val_windows.inputs, dtype=np.float64)
    yv = np.ascontiguousarray(val_windows.targets, dtype=np.float64)

    H = config.hidden_size
    rng = np.random.default_rng(config.seed)
    theta = LstmParams.init(H, rng=rng).to_vector()
    opt = AdamState.zeros(theta.size)
    history = LossHistory()
    step = 0
    for _ in range(config.epochs):
        order = rng.permutation(len(y))
        for start in range(0, len(y), config.batch_size):
            idx = order[start : start + config.batch_size]
            W, b, w_out, b_out = _unpack(theta, H)
            loss, dW, db, dw_out, db_out = _loss_and_grads(
                np.ascontiguousarray(W), b.copy(), w_out.copy(), b_out, X[idx], y[idx]
            )
            if not np.isfinite(loss):
                raise NonFiniteActivation(f"loss became non-finite at step {step + 1}")
            grad = np.concatenate([dW.ravel(), db, dw_out, [db_out]])
            step += 1
            theta, opt = adam_step(theta, grad, opt, config.learning_rate, step)
        params = LstmParams.from_vector(theta, H)
        history.train_mse.append(mse_loss(predict_batch(params, X), y))
        history.val_mse.append(mse_loss(predict_batch(params, Xv), yv))
    return LstmParams.from_vector(theta, H), history


def save_model(path, params, config, extra=None):
    doc = {"format": "modecast-lstm/1", "config": config.to_dict(), "params": params.to_dict()}
    if extra:
        doc.update(extra)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return LstmParams.from_dict(doc["params"]), TrainConfig(**doc["config"]), doc
