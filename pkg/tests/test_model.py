import math
import os

import numpy as np
import pytest

from snnbounds import (ACTIVATIONS, RELU, SIGMOID, TANH, Checkpoint,
                       InitSnapshot, SnnParams, checkpoint_load,
                       checkpoint_save, forward, get_activation, init_kaiming,
                       make_rng)
from snnbounds.model import CheckpointError


def test_relu_values():
    assert RELU.fn(np.array(-2.0)) == 0.0
    assert RELU.fn(np.array(3.0)) == 3.0
    assert RELU.deriv(np.array(0.0)) == 0.0  # subgradient at 0 pinned to 0


def test_tanh_matches_reference():
    assert abs(TANH.fn(np.array(0.5)) - math.tanh(0.5)) < 1e-12


def test_sigmoid_stable_at_extremes():
    vals = SIGMOID.fn(np.array([-500.0, 0.0, 500.0]))
    assert np.all(np.isfinite(vals))
    assert vals[1] == 0.5
    assert vals[0] == pytest.approx(0.0, abs=1e-200)
    assert vals[2] == pytest.approx(1.0, abs=1e-15)


def test_lipschitz_constants():
    assert RELU.lipschitz == 1.0
    assert TANH.lipschitz == 1.0
    assert SIGMOID.lipschitz == 0.25


def test_get_activation():
    assert get_activation("relu") is RELU
    with pytest.raises(ValueError):
        get_activation("swish")


def test_init_deterministic():
    p1, s1 = init_kaiming(make_rng(3), 5, 4, 2)
    p2, s2 = init_kaiming(make_rng(3), 5, 4, 2)
    assert np.array_equal(p1.W, p2.W) and np.array_equal(p1.V, p2.V)
    assert np.array_equal(s1.W0, s2.W0)


def test_init_scale():
    # empirical std of W entries should track sqrt(2/d)
    p, _ = init_kaiming(make_rng(0), 400, 100, 1)
    assert np.std(p.W) == pytest.approx(math.sqrt(2.0 / 100), rel=0.05)
    assert np.std(p.V) == pytest.approx(math.sqrt(2.0 / 400), rel=0.05)


def test_snapshot_immutable():
    _, snap = init_kaiming(make_rng(0), 2, 2, 1)
    with pytest.raises(ValueError):
        snap.W0[0, 0] = 99.0


def test_forward_zero_head():
    p = SnnParams(np.ones((3, 2)), np.zeros((1, 3)), RELU)
    out = forward(p, np.ones((2, 4)))
    assert np.all(out == 0.0)


def test_forward_hand_scalar():
    p = SnnParams(np.array([[2.0]]), np.array([[3.0]]), RELU)
    assert forward(p, np.array([[1.0]]))[0, 0] == 6.0


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        SnnParams(np.ones((3, 2)), np.ones((1, 4)), RELU)
    p = SnnParams(np.ones((3, 2)), np.ones((1, 3)), RELU)
    with pytest.raises(ValueError):
        forward(p, np.ones((5, 1)))


def _random_checkpoint(seed=0, m=4, d=3, c=1, act="tanh"):
    params, snap = init_kaiming(make_rng(seed), m, d, c, ACTIVATIONS[act])
    params.W += 0.1
    return Checkpoint(params, snap, seed=seed, epochs=7, final_train_error=0.125)


def test_checkpoint_roundtrip(tmp_path):
    ck = _random_checkpoint()
    path = os.path.join(tmp_path, "a.snn")
    checkpoint_save(ck, path)
    back = checkpoint_load(path)
    assert np.array_equal(back.params.W, ck.params.W)
    assert np.array_equal(back.params.V, ck.params.V)
    assert np.array_equal(back.snapshot.W0, ck.snapshot.W0)
    assert np.array_equal(back.snapshot.V0, ck.snapshot.V0)
    assert back.seed == 0 and back.epochs == 7
    assert back.final_train_error == 0.125
    assert back.params.activation.name == "tanh"


def test_checkpoint_bytes_stable(tmp_path):
    ck = _random_checkpoint()
    p1 = os.path.join(tmp_path, "a.snn")
    p2 = os.path.join(tmp_path, "b.snn")
    checkpoint_save(ck, p1)
    checkpoint_save(checkpoint_load(p1), p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_checkpoint_bad_magic(tmp_path):
    path = os.path.join(tmp_path, "bad.snn")
    with open(path, "wb") as f:
        f.write(b"NOTACKPT" + b"\x00" * 64)
    with pytest.raises(CheckpointError):
        checkpoint_load(path)


def test_checkpoint_truncation_fuzz(tmp_path):
    full = os.path.join(tmp_path, "full.snn")
    checkpoint_save(_random_checkpoint(), full)
    blob = open(full, "rb").read()
    cut = os.path.join(tmp_path, "cut.snn")
    # every strict prefix must be rejected, never crash
    for k in range(0, len(blob), 7):
        with open(cut, "wb") as f:
            f.write(blob[:k])
        with pytest.raises(CheckpointError):
            checkpoint_load(cut)


def test_checkpoint_trailing_bytes(tmp_path):
    full = os.path.join(tmp_path, "full.snn")
    checkpoint_save(_random_checkpoint(), full)
    blob = open(full, "rb").read() + b"\x00"
    with open(full, "wb") as f:
        f.write(blob)
    with pytest.raises(CheckpointError):
        checkpoint_load(full)


def test_checkpoint_bad_version(tmp_path):
    full = os.path.join(tmp_path, "full.snn")
    checkpoint_save(_random_checkpoint(), full)
    blob = bytearray(open(full, "rb").read())
    blob[8] = 99  # version field, little-endian low byte
    with open(full, "wb") as f:
        f.write(bytes(blob))
    with pytest.raises(CheckpointError):
        checkpoint_load(full)
