"""Mini-batch SGD with momentum on binary cross-entropy with logits.

Binary heads only (c = 1).  Labels are stored as {-1, +1} in the Dataset and
mapped to {0, 1} internally for the BCE loss.  Training stops when the
end-of-epoch 0-1 training error drops below the target, or when max_epochs
is reached.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .linalg import fork_rng
from .model import forward


@dataclass
class TrainConfig:
    batch_size: int = 256
    momentum: float = 0.9
    learning_rate: float = 0.001
    max_epochs: int = 20
    target_train_error: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")
        if self.learning_rate < 0.0:
            raise ValueError("learning_rate must be >= 0")


@dataclass
class TrainReport:
    epochs_run: int
    loss_curve: list
    final_train_error: float
    final_ramp_risk: float
    wall_time: float = 0.0


class TrainingDiverged(Exception):
    def __init__(self, epoch, batch):
        super().__init__(f"non-finite loss at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


def bce_logits(score, y01):
    """Stable binary cross-entropy with logits; returns (loss, dloss/dscore).

    loss = -[y log sigma(s) + (1-y) log(1 - sigma(s))], computed as
    max(s, 0) - s*y + log(1 + exp(-|s|)).
    """
    s = np.asarray(score, dtype=float)
    y = np.asarray(y01, dtype=float)
    loss = np.maximum(s, 0.0) - s * y + np.log1p(np.exp(-np.abs(s)))
    # grad = sigmoid(s) - y, evaluated stably
    grad = np.where(s >= 0, 1.0 / (1.0 + np.exp(-np.clip(s, 0, None))),
                    np.exp(np.clip(s, None, 0)) / (1.0 + np.exp(np.clip(s, None, 0)))) - y
    if np.isscalar(score):
        return float(loss), float(grad)
    return loss, grad


def _batch_grads(params, Xb, yb01):
    """Mean BCE loss and its gradients w.r.t. W and V on one batch."""
    act = params.activation
    Z = params.W @ Xb                       # (m, B)
    A = act.fn(Z)                           # (m, B)
    s = (params.V @ A)[0]                   # (B,)
    loss, ds = bce_logits(s, yb01)
    B = Xb.shape[1]
    ds = ds / B
    grad_V = (ds[None, :] @ A.T)            # (1, m)
    back = (params.V.T @ ds[None, :]) * act.deriv(Z)   # (m, B)
    grad_W = back @ Xb.T                    # (m, d)
    return float(np.mean(loss)), grad_W, grad_V


def zero_one_error(params, ds):
    """Fraction of misclassified points; a zero score counts as an error."""
    if params.c != 1:
        raise ValueError("zero_one_error requires c = 1")
    s = forward(params, ds.X)[0]
    return float(np.mean(ds.y * s <= 0.0))


def ramp_risk(params, ds):
    """Empirical risk under the 1-Lipschitz ramp loss clipped to [0, 1]."""
    if params.c != 1:
        raise ValueError("ramp_risk requires c = 1")
    t = ds.y * forward(params, ds.X)[0]
    return float(np.mean(np.clip(1.0 - t, 0.0, 1.0)))


def sgd_train(params, snapshot, ds, cfg):
    """Train params in place with SGD + classical momentum; snapshot untouched."""
    if ds.d != params.d:
        raise ValueError(f"dataset d={ds.d} but model d={params.d}")
    if params.c != 1:
        raise ValueError("the training harness supports c = 1 only")

    start = time.perf_counter()
    y01 = (ds.y + 1.0) / 2.0
    uW = np.zeros_like(params.W)
    uV = np.zeros_like(params.V)
    loss_curve = []
    epochs_run = 0
    for epoch in range(cfg.max_epochs):
        order = fork_rng(cfg.seed, epoch).permutation(ds.n)
        epoch_loss = 0.0
        n_batches = 0
        for start_idx in range(0, ds.n, cfg.batch_size):
            idx = order[start_idx:start_idx + cfg.batch_size]
            loss, gW, gV = _batch_grads(params, ds.X[:, idx], y01[idx])
            if not np.isfinite(loss):
                raise TrainingDiverged(epoch, n_batches)
            uW = cfg.momentum * uW + gW
            uV = cfg.momentum * uV + gV
            params.W -= cfg.learning_rate * uW
            params.V -= cfg.learning_rate * uV
            epoch_loss += loss
            n_batches += 1
        loss_curve.append(epoch_loss / n_batches)
        epochs_run = epoch + 1
        if zero_one_error(params, ds) < cfg.target_train_error:
            break
    return TrainReport(
        epochs_run=epochs_run,
        loss_curve=loss_curve,
        final_train_error=zero_one_error(params, ds),
        final_ramp_risk=ramp_risk(params, ds),
        wall_time=time.perf_counter() - start,
    )
