import os
import struct

import numpy as np
import pytest

from snnbounds import Dataset, make_rng

# Directory with the canonical MNIST IDX train files; the MNIST-dependent
# acceptance checks skip when it is absent.
MNIST_DIR = os.environ.get("SNNBOUNDS_MNIST_DIR",
                           os.path.join(os.path.dirname(__file__), "..",
                                        "data", "mnist"))


def mnist_available():
    for name in ("train-images-idx3-ubyte", "train-images.idx3-ubyte"):
        if os.path.exists(os.path.join(MNIST_DIR, name)):
            return True
    return False


requires_mnist = pytest.mark.skipif(
    not mnist_available(),
    reason=f"MNIST IDX train files not found under {MNIST_DIR} "
           "(set SNNBOUNDS_MNIST_DIR)")


# --- test-only encoders, the round-trip oracles for the parsers ---

def encode_idx_images(images):
    images = np.asarray(images, dtype=np.uint8)
    n, h, w = images.shape
    return struct.pack(">4i", 0x00000803, n, h, w) + images.tobytes()


def encode_idx_labels(labels):
    labels = np.asarray(labels, dtype=np.uint8)
    return struct.pack(">2i", 0x00000801, len(labels)) + labels.tobytes()


def encode_cifar10_bin(images, labels):
    images = np.asarray(images, dtype=np.uint8)  # (n, 32, 32, 3)
    labels = np.asarray(labels, dtype=np.uint8)
    parts = []
    for img, lab in zip(images, labels):
        parts.append(bytes([lab]))
        parts.append(img.transpose(2, 0, 1).tobytes())  # planar R, G, B
    return b"".join(parts)


def random_unit_dataset(rng, d, n):
    X = rng.standard_normal((d, n))
    X /= np.linalg.norm(X, axis=0)
    y = 2.0 * rng.integers(0, 2, n) - 1.0
    return Dataset(X, y.astype(float), name="synthetic")


def write_fake_mnist_dir(path, n_per_class=20, classes=(1, 7), seed=0):
    """Tiny synthetic MNIST-format directory for CLI end-to-end tests."""
    rng = make_rng(seed)
    images, labels = [], []
    for cls in classes:
        for _ in range(n_per_class):
            img = rng.integers(1, 256, size=(28, 28)).astype(np.uint8)
            images.append(img)
            labels.append(cls)
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, "train-images-idx3-ubyte"), "wb") as f:
        f.write(encode_idx_images(np.stack(images)))
    with open(os.path.join(path, "train-labels-idx1-ubyte"), "wb") as f:
        f.write(encode_idx_labels(np.array(labels)))
    return path
