"""MNIST IDX / CIFAR-10 binary ingestion and binary classification tasks.

Preprocessing pipeline for both sources: select the two classes, map labels
to {-1, +1}, bring images to 32x32 single-channel (MNIST: bilinear resize of
the 28x28 grid; CIFAR: unweighted channel mean), flatten to d = 1024 column
vectors, then scale every column to unit l2 norm.
"""

import os
import struct
from dataclasses import dataclass

import numpy as np

IDX_IMAGE_MAGIC = 0x00000803
IDX_LABEL_MAGIC = 0x00000801
CIFAR_RECORD_BYTES = 3073  # 1 label byte + 3 * 32 * 32 pixels

CIFAR_CLASSES = {
    "airplane": 0, "automobile": 1, "bird": 2, "cat": 3, "deer": 4,
    "dog": 5, "frog": 6, "horse": 7, "ship": 8, "truck": 9,
}


class ParseError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass
class RawImageSet:
    images: np.ndarray  # (n, h, w) or (n, h, w, 3) uint8
    labels: np.ndarray  # (n,) uint8

    def __post_init__(self):
        if len(self.images) != len(self.labels):
            raise DataError("images and labels length mismatch")


@dataclass(frozen=True)
class TaskSpec:
    source: str  # "mnist" or "cifar10"
    positive_class: int
    negative_class: int
    target_side: int = 32

    def __post_init__(self):
        if self.positive_class == self.negative_class:
            raise ValueError("positive and negative class must differ")


@dataclass
class Dataset:
    X: np.ndarray  # (d, n), columns are examples with unit l2 norm
    y: np.ndarray  # (n,) entries in {-1, +1}
    name: str = ""

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.X.ndim != 2 or self.y.ndim != 1 or self.X.shape[1] != self.y.size:
            raise DataError("inconsistent dataset shapes")
        if not np.all(np.isin(self.y, (-1.0, 1.0))):
            raise DataError("labels must be +-1")

    @property
    def d(self):
        return self.X.shape[0]

    @property
    def n(self):
        return self.X.shape[1]


def parse_idx_images(data):
    """Parse an IDX 3-D image file (big-endian) into an (n, h, w) uint8 array."""
    if len(data) < 16:
        raise ParseError(f"header truncated at byte {len(data)}")
    magic, n, h, w = struct.unpack_from(">4i", data, 0)
    if magic != IDX_IMAGE_MAGIC:
        raise ParseError(f"bad image magic 0x{magic:08x} at byte 0")
    expected = 16 + n * h * w
    if len(data) != expected:
        raise ParseError(f"payload length {len(data)} != {expected} (offset 16)")
    return np.frombuffer(data, dtype=np.uint8, offset=16).reshape(n, h, w)


def parse_idx_labels(data):
    """Parse an IDX 1-D label file into an (n,) uint8 array."""
    if len(data) < 8:
        raise ParseError(f"header truncated at byte {len(data)}")
    magic, n = struct.unpack_from(">2i", data, 0)
    if magic != IDX_LABEL_MAGIC:
        raise ParseError(f"bad label magic 0x{magic:08x} at byte 0")
    if len(data) != 8 + n:
        raise ParseError(f"payload length {len(data)} != {8 + n} (offset 8)")
    return np.frombuffer(data, dtype=np.uint8, offset=8).copy()


def parse_idx(data):
    """Dispatch on the IDX magic: returns images array or labels array."""
    if len(data) < 4:
        raise ParseError(f"header truncated at byte {len(data)}")
    magic, = struct.unpack_from(">i", data, 0)
    if magic == IDX_IMAGE_MAGIC:
        return parse_idx_images(data)
    if magic == IDX_LABEL_MAGIC:
        return parse_idx_labels(data)
    raise ParseError(f"bad magic 0x{magic:08x} at byte 0")


def parse_cifar10_bin(data):
    """Parse a CIFAR-10 binary batch into a RawImageSet of (n, 32, 32, 3) images."""
    if len(data) % CIFAR_RECORD_BYTES != 0:
        raise ParseError(
            f"length {len(data)} is not a multiple of {CIFAR_RECORD_BYTES}")
    n = len(data) // CIFAR_RECORD_BYTES
    raw = np.frombuffer(data, dtype=np.uint8).reshape(n, CIFAR_RECORD_BYTES)
    labels = raw[:, 0].copy()
    # channel-planar R, G, B planes of 32x32 each
    images = raw[:, 1:].reshape(n, 3, 32, 32).transpose(0, 2, 3, 1).copy()
    return RawImageSet(images, labels)


def bilinear_resize(images, out_h, out_w):
    """Corner-aligned bilinear resize of a batch of (n, h, w) images."""
    images = np.asarray(images, dtype=float)
    n, h, w = images.shape
    ys = np.linspace(0.0, h - 1, out_h)
    xs = np.linspace(0.0, w - 1, out_w)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    top = images[:, y0[:, None], x0[None, :]] * (1 - fx) \
        + images[:, y0[:, None], x1[None, :]] * fx
    bot = images[:, y1[:, None], x0[None, :]] * (1 - fx) \
        + images[:, y1[:, None], x1[None, :]] * fx
    return top * (1 - fy) + bot * fy


def build_binary_task(raw, spec):
    """Binary Dataset from a RawImageSet according to the TaskSpec.

    Keeps only the two requested classes, maps positive -> +1 and negative
    -> -1, converts every image to a flattened 32x32 grayscale vector and
    normalizes each column to unit l2 norm.
    """
    if len(raw.labels) == 0:
        raise DataError("empty image set")
    keep = np.isin(raw.labels, (spec.positive_class, spec.negative_class))
    labels = raw.labels[keep]
    images = np.asarray(raw.images[keep], dtype=float)
    for cls in (spec.positive_class, spec.negative_class):
        if not np.any(labels == cls):
            raise DataError(f"class {cls} absent from the raw set")
    if images.ndim == 4:  # color -> grayscale by unweighted channel mean
        images = images.mean(axis=3)
    side = spec.target_side
    if images.shape[1:] != (side, side):
        images = bilinear_resize(images, side, side)
    X = images.reshape(len(images), -1).T.astype(float)
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0):
        raise DataError("zero-norm image encountered")
    X = X / norms
    y = np.where(labels == spec.positive_class, 1.0, -1.0)
    return Dataset(X, y, name=f"{spec.source}_{spec.positive_class}v{spec.negative_class}")


def subsample(ds, n_keep, rng):
    """Uniform sample of n_keep columns without replacement (sorted indices)."""
    if not 1 <= n_keep <= ds.n:
        raise ValueError(f"n_keep={n_keep} out of range [1, {ds.n}]")
    if n_keep == ds.n:
        return Dataset(ds.X.copy(), ds.y.copy(), name=ds.name)
    idx = np.sort(rng.choice(ds.n, size=n_keep, replace=False))
    return Dataset(ds.X[:, idx], ds.y[idx], name=ds.name)


def load_mnist_dir(path, split="train"):
    """RawImageSet from the canonical MNIST IDX files in a directory."""
    prefix = "train" if split == "train" else "t10k"
    names = [f"{prefix}-images-idx3-ubyte", f"{prefix}-images.idx3-ubyte"]
    lnames = [f"{prefix}-labels-idx1-ubyte", f"{prefix}-labels.idx1-ubyte"]
    img_path = _first_existing(path, names)
    lab_path = _first_existing(path, lnames)
    with open(img_path, "rb") as f:
        images = parse_idx_images(f.read())
    with open(lab_path, "rb") as f:
        labels = parse_idx_labels(f.read())
    return RawImageSet(images, labels)


def load_cifar_dir(path, split="train"):
    """RawImageSet from the CIFAR-10 binary batches in a directory."""
    if split == "train":
        names = [f"data_batch_{i}.bin" for i in range(1, 6)]
    else:
        names = ["test_batch.bin"]
    parts = []
    for name in names:
        full = os.path.join(path, name)
        if not os.path.exists(full):
            full = os.path.join(path, "cifar-10-batches-bin", name)
        with open(full, "rb") as f:
            parts.append(parse_cifar10_bin(f.read()))
    images = np.concatenate([p.images for p in parts])
    labels = np.concatenate([p.labels for p in parts])
    return RawImageSet(images, labels)


def _first_existing(directory, candidates):
    for name in candidates:
        full = os.path.join(directory, name)
        if os.path.exists(full):
            return full
    raise FileNotFoundError(
        f"none of {candidates} found in {directory}")
