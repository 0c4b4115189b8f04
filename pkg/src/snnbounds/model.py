"""Shallow network model: forward pass, activations, Kaiming init, checkpoints.

The network is x -> V @ gamma(W @ x) with W of shape (m, d) and V of shape
(c, m).  No bias terms.
"""

import struct
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Activation:
    name: str
    fn: Callable
    deriv: Callable
    lipschitz: float
    value_at_zero: float


def _sigmoid(a):
    out = np.empty_like(a, dtype=float)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    e = np.exp(a[~pos])
    out[~pos] = e / (1.0 + e)
    return out


# ReLU subgradient at 0 is taken to be 0.
RELU = Activation("relu", lambda a: np.maximum(a, 0.0),
                  lambda a: (a > 0).astype(float), 1.0, 0.0)
TANH = Activation("tanh", np.tanh, lambda a: 1.0 - np.tanh(a) ** 2, 1.0, 0.0)
SIGMOID = Activation("sigmoid", _sigmoid,
                     lambda a: _sigmoid(a) * (1.0 - _sigmoid(a)), 0.25, 0.5)

ACTIVATIONS = {"relu": RELU, "tanh": TANH, "sigmoid": SIGMOID}
_ACT_IDS = {"relu": 0, "tanh": 1, "sigmoid": 2}
_ACT_BY_ID = {v: k for k, v in _ACT_IDS.items()}


def get_activation(name):
    try:
        return ACTIVATIONS[name]
    except KeyError:
        raise ValueError(f"unknown activation {name!r}") from None


def activation_eval(act, a):
    """Value and subgradient of the activation at a scalar point."""
    arr = np.asarray(a, dtype=float)
    return float(act.fn(arr)), float(act.deriv(arr))


@dataclass
class SnnParams:
    W: np.ndarray  # (m, d)
    V: np.ndarray  # (c, m)
    activation: Activation

    def __post_init__(self):
        self.W = np.ascontiguousarray(self.W, dtype=float)
        self.V = np.ascontiguousarray(self.V, dtype=float)
        if self.W.ndim != 2 or self.V.ndim != 2:
            raise ValueError("W and V must be 2-D")
        if self.V.shape[1] != self.W.shape[0]:
            raise ValueError(
                f"V has {self.V.shape[1]} columns but W has {self.W.shape[0]} rows")

    @property
    def m(self):
        return self.W.shape[0]

    @property
    def d(self):
        return self.W.shape[1]

    @property
    def c(self):
        return self.V.shape[0]


@dataclass(frozen=True)
class InitSnapshot:
    W0: np.ndarray
    V0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "W0", np.ascontiguousarray(self.W0, dtype=float))
        object.__setattr__(self, "V0", np.ascontiguousarray(self.V0, dtype=float))
        self.W0.setflags(write=False)
        self.V0.setflags(write=False)


def init_kaiming(rng, m, d, c, activation=RELU):
    """Kaiming-Gaussian init: W ~ N(0, 2/d), V ~ N(0, 2/m) on both layers.

    Returns the live parameters plus a frozen copy of the initialization.
    """
    if min(m, d, c) < 1:
        raise ValueError("m, d, c must be >= 1")
    W = rng.normal(0.0, np.sqrt(2.0 / d), size=(m, d))
    V = rng.normal(0.0, np.sqrt(2.0 / m), size=(c, m))
    params = SnnParams(W, V, activation)
    snapshot = InitSnapshot(W.copy(), V.copy())
    return params, snapshot


def hidden_activations(params, X):
    X = np.asarray(X, dtype=float)
    if X.shape[0] != params.d:
        raise ValueError(f"X has {X.shape[0]} rows, expected d={params.d}")
    return params.activation.fn(params.W @ X)


def forward(params, X):
    """Network outputs, shape (c, n), for column-stacked inputs X of shape (d, n)."""
    return params.V @ hidden_activations(params, X)


@dataclass
class Checkpoint:
    params: SnnParams
    snapshot: InitSnapshot
    seed: int = 0
    epochs: int = 0
    final_train_error: float = float("nan")


_MAGIC = b"SNNCKPT1"
_VERSION = 1


class CheckpointError(Exception):
    pass


def checkpoint_save(ck, path):
    """Binary checkpoint: magic, header, then W, V, W0, V0 as little-endian f64."""
    p = ck.params
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<5I", _VERSION, p.m, p.d, p.c,
                            _ACT_IDS[p.activation.name]))
        f.write(struct.pack("<Q", ck.seed))
        for arr in (p.W, p.V, ck.snapshot.W0, ck.snapshot.V0):
            f.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())
        f.write(struct.pack("<I", ck.epochs))
        f.write(struct.pack("<d", ck.final_train_error))


def checkpoint_load(path):
    with open(path, "rb") as f:
        data = f.read()
    if data[:8] != _MAGIC:
        raise CheckpointError("bad checkpoint magic")
    off = 8
    try:
        version, m, d, c, act_id = struct.unpack_from("<5I", data, off)
        off += 20
        seed, = struct.unpack_from("<Q", data, off)
        off += 8
    except struct.error as exc:
        raise CheckpointError(f"truncated header: {exc}") from None
    if version != _VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    if act_id not in _ACT_BY_ID:
        raise CheckpointError(f"unknown activation id {act_id}")
    if max(m, d, c) > 2 ** 24 or min(m, d, c) < 1:
        raise CheckpointError(f"implausible dimensions m={m} d={d} c={c}")
    shapes = [(m, d), (c, m), (m, d), (c, m)]
    arrays = []
    for shape in shapes:
        count = shape[0] * shape[1]
        end = off + 8 * count
        if end > len(data):
            raise CheckpointError("truncated array payload")
        arrays.append(np.frombuffer(data[off:end], dtype="<f8").reshape(shape).copy())
        off = end
    try:
        epochs, = struct.unpack_from("<I", data, off)
        off += 4
        final_err, = struct.unpack_from("<d", data, off)
        off += 8
    except struct.error:
        raise CheckpointError("truncated trailer") from None
    if off != len(data):
        raise CheckpointError("trailing bytes after checkpoint payload")
    W, V, W0, V0 = arrays
    params = SnnParams(W, V, get_activation(_ACT_BY_ID[act_id]))
    return Checkpoint(params, InitSnapshot(W0, V0), seed=seed, epochs=epochs,
                      final_train_error=final_err)
