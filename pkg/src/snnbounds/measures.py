"""Scalar complexity measures of a (params, snapshot, dataset) triple.

The central quantity is the path-norm with a reference matrix,
kappa = sum_{j,k} |v_kj| * ||w_j - w_j0||_2, alongside the standard
path-norm, Frobenius/spectral norms of weights and their distances from
initialization, and the activation-at-initialization term.
"""

import csv
from dataclasses import dataclass, fields

import numpy as np

from .linalg import frobenius_norm, pq_norm, row_l2_norms, spectral_norm


def path_norm(params, snapshot):
    """kappa = sum_j sum_k |v_kj| * ||w_j - w_j0||_2."""
    if params.W.shape != snapshot.W0.shape:
        raise ValueError("W and W0 shape mismatch")
    dists = np.linalg.norm(params.W - snapshot.W0, axis=1)
    return float(np.abs(params.V).sum(axis=0) @ dists)


def standard_path_norm(params):
    """kappa_s = sum_j |v_j| * ||w_j||_2 (binary head only)."""
    if params.c != 1:
        raise ValueError("standard path-norm is defined here for c = 1")
    return float(np.abs(params.V[0]) @ row_l2_norms(params.W))


def init_activation_term(snapshot, ds, activation, c=1):
    """(c * sum_j sum_i gamma^2(x_i^T w_j0))^(1/2)."""
    A = activation.fn(snapshot.W0 @ ds.X)
    return float(np.sqrt(c * np.sum(A * A)))


@dataclass
class MeasureReport:
    kappa: float
    kappa_s: float
    R_W: float            # ||W - W0||_F
    R_V: float            # ||V||_F
    w_fro: float          # ||W||_F (full norm, for the Frobenius-product bound)
    v_dist: float         # ||V - V0||_F
    w0_spectral: float
    w_spectral: float
    v_spectral: float
    w_dist_12: float      # ||W - W0||_{1,2}
    v_dist_12: float      # ||V - V0||_{1,2}
    w_inf1: float
    v_inf1: float
    init_term: float      # (c * sum gamma^2(x^T w0))^(1/2)
    X_fro: float
    gram_spec_sqrt: float  # ||sum x_i x_i^T||_sigma^(1/2) = sigma_max(X)
    b_x: float             # max_i ||x_i||_2


MEASURE_CSV_FIELDS = ["dataset", "seed", "m"] + [f.name for f in fields(MeasureReport)]


def measure_report(params, snapshot, ds):
    """All scalar measures in one pass.

    The spectral norm of the Gram matrix sum_i x_i x_i^T is computed as
    sigma_max(X)^2 without materializing the d x d Gram matrix.
    """
    if params.W.shape != snapshot.W0.shape or params.V.shape != snapshot.V0.shape:
        raise ValueError("params/snapshot shape mismatch")
    dW = params.W - snapshot.W0
    dV = params.V - snapshot.V0
    kappa_s = standard_path_norm(params) if params.c == 1 else float("nan")
    return MeasureReport(
        kappa=path_norm(params, snapshot),
        kappa_s=kappa_s,
        R_W=frobenius_norm(dW),
        R_V=frobenius_norm(params.V),
        w_fro=frobenius_norm(params.W),
        v_dist=frobenius_norm(dV),
        w0_spectral=spectral_norm(snapshot.W0).value,
        w_spectral=spectral_norm(params.W).value,
        v_spectral=spectral_norm(params.V).value,
        w_dist_12=pq_norm(dW, 1, 2),
        v_dist_12=pq_norm(dV, 1, 2),
        w_inf1=pq_norm(params.W, np.inf, 1),
        v_inf1=pq_norm(params.V, np.inf, 1),
        init_term=init_activation_term(snapshot, ds, params.activation, params.c),
        X_fro=frobenius_norm(ds.X),
        gram_spec_sqrt=spectral_norm(ds.X).value,
        b_x=float(np.max(np.linalg.norm(ds.X, axis=0))),
    )


def measure_row(report, dataset, seed, m):
    """CSV row (list of values) in MEASURE_CSV_FIELDS order."""
    row = [dataset, seed, m]
    row += [repr(getattr(report, f.name)) for f in fields(MeasureReport)]
    return row


def write_measures_csv(path, rows):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(MEASURE_CSV_FIELDS)
        writer.writerows(rows)


def read_measures_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))
