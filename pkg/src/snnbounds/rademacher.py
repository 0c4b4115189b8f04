"""Numerical probes of the empirical Rademacher complexity on tiny instances.

The supremum over the constrained class {||W - W0||_F <= R_W, ||V||_F <= R_V}
is estimated per sign vector by projected gradient ascent (PGA).  The returned
value is always re-evaluated at a verified feasible point, so every estimate
is a certified lower bound on the true per-sigma supremum.  Restricted
sub-classes (pure linear, top-layer-only) admit closed-form suprema which
serve as oracles for the PGA.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import fork_rng, frobenius_norm, sample_signs

SCALE_GUARD = 100_000  # max n * m * d without explicit override


@dataclass
class RadConfig:
    sigma_samples: int = 200
    pga_steps: int = 200
    pga_restarts: int = 5
    step_size: float = 0.05
    step_decay: float = 0.99
    seed: int = 0

    def __post_init__(self):
        if min(self.sigma_samples, self.pga_steps, self.pga_restarts) < 1:
            raise ValueError("counts must be >= 1")
        if self.step_size <= 0:
            raise ValueError("step_size must be positive")


@dataclass
class RadEstimate:
    mean: float
    std_error: float
    samples: int
    kind: str  # "feasible_lower" or "closed_form"


def project_fro_ball(M, center, radius):
    """Euclidean projection of M onto {A : ||A - center||_F <= radius}."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    diff = M - center
    dist = frobenius_norm(diff) if diff.size else 0.0
    if dist <= radius:
        return M
    if radius == 0.0:
        return center.copy()
    return center + diff * (radius / dist)


def closed_form_linear_sup(sigma, X, radius):
    """sup over ||w||_2 <= radius of sum_i sigma_i w^T x_i = radius * ||X sigma||_2."""
    sigma = np.asarray(sigma, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.shape[1] != sigma.size:
        raise ValueError("sigma length must match number of columns of X")
    return float(radius * np.linalg.norm(X @ sigma))


def closed_form_toplayer_sup(sigma, X, W0, R_V, activation):
    """sup over ||v||_2 <= R_V with W pinned at W0: R_V * ||M sigma||_2.

    M has rows gamma(x_i^T w_j0) indexed by hidden unit j.
    """
    sigma = np.asarray(sigma, dtype=float)
    M = activation.fn(np.asarray(W0, dtype=float) @ np.asarray(X, dtype=float))
    return float(R_V * np.linalg.norm(M @ sigma))


def _batched_objective(Ws, Vs, X, sigmas, activation):
    Z = Ws @ X                   # (B, m, n)
    A = activation.fn(Z)
    out = Vs @ A                 # (B, c, n)
    obj = np.einsum("bcn,bnc->b", out, sigmas)
    return obj, Z, A


def _pga_best_values(sigmas, X, W0, R_W, R_V, activation, cfg):
    """Certified feasible sup estimates for a batch of sign matrices.

    sigmas has shape (S, n, c); the PGA runs cfg.pga_restarts restarts per
    sigma simultaneously and returns, per sigma, the best objective value
    re-evaluated after a final projection onto the feasible set.
    """
    X = np.asarray(X, dtype=float)
    W0 = np.asarray(W0, dtype=float)
    S, n, c = sigmas.shape
    m, d = W0.shape
    R = cfg.pga_restarts
    B = S * R

    sig_b = np.repeat(sigmas, R, axis=0)                     # (B, n, c)
    # restart starts come from per-restart forked streams so that adding
    # restarts never changes (only extends) the set of starting points
    dW = np.empty((S, R, m, d))
    dV = np.empty((S, R, c, m))
    for r_idx in range(R):
        restart_rng = fork_rng(cfg.seed, 10, r_idx)
        dW[:, r_idx] = restart_rng.standard_normal((S, m, d))
        dV[:, r_idx] = restart_rng.standard_normal((S, c, m))
    dW = dW.reshape(B, m, d)
    dV = dV.reshape(B, c, m)
    wnorm = np.maximum(np.sqrt(np.einsum("bij,bij->b", dW, dW)), 1e-30)
    Ws = W0 + R_W * dW / wnorm[:, None, None]
    vnorm = np.maximum(np.sqrt(np.einsum("bij,bij->b", dV, dV)), 1e-30)
    Vs = R_V * dV / vnorm[:, None, None]

    step = cfg.step_size
    for _ in range(cfg.pga_steps):
        _, Z, A = _batched_objective(Ws, Vs, X, sig_b, activation)
        grad_V = np.einsum("bnc,bmn->bcm", sig_b, A)
        dA = np.einsum("bkm,bnk->bmn", Vs, sig_b) * activation.deriv(Z)
        grad_W = dA @ X.T
        Ws = Ws + step * grad_W
        Vs = Vs + step * grad_V
        # project after every step
        dWs = Ws - W0
        norms = np.sqrt(np.einsum("bij,bij->b", dWs, dWs))
        scale = np.minimum(1.0, R_W / np.maximum(norms, 1e-30))
        Ws = W0 + dWs * scale[:, None, None]
        vnorms = np.sqrt(np.einsum("bij,bij->b", Vs, Vs))
        vscale = np.minimum(1.0, R_V / np.maximum(vnorms, 1e-30))
        Vs = Vs * vscale[:, None, None]
        step *= cfg.step_decay

    # certify feasibility, then evaluate
    dWs = Ws - W0
    wdist = np.sqrt(np.einsum("bij,bij->b", dWs, dWs))
    vdist = np.sqrt(np.einsum("bij,bij->b", Vs, Vs))
    if np.any(wdist > R_W * (1 + 1e-9) + 1e-12) or \
            np.any(vdist > R_V * (1 + 1e-9) + 1e-12):
        raise RuntimeError("projection failure: infeasible PGA iterate")
    obj, _, _ = _batched_objective(Ws, Vs, X, sig_b, activation)
    return obj.reshape(S, R).max(axis=1)


def pga_sup_estimate(sigma_matrix, X, W0, R_W, R_V, activation, cfg):
    """Feasible lower estimate of the per-sigma supremum for one sign matrix."""
    sigma_matrix = np.asarray(sigma_matrix, dtype=float)
    if sigma_matrix.ndim != 2:
        raise ValueError("sigma_matrix must be n x c")
    values = _pga_best_values(sigma_matrix[None], X, W0, R_W, R_V,
                              activation, cfg)
    return float(values[0])


def enumerate_signs(n):
    """All 2^n sign vectors as a (2^n, n) array of +-1."""
    grid = np.indices((2,) * n).reshape(n, -1).T
    return (2.0 * grid - 1.0).astype(float)


def mc_rad_estimate(X, W0, R_W, R_V, activation, c=1, cfg=None,
                    allow_large=False, exhaustive=None):
    """Empirical Rademacher complexity estimate (1/n) E_sigma sup(...).

    Sign vectors are enumerated exhaustively when n <= 10 and c = 1 (exact
    sigma-expectation), otherwise sampled.  Every per-sigma value is a
    certified feasible lower estimate, so the result lower-bounds the true
    complexity up to sigma-sampling error.
    """
    cfg = cfg or RadConfig()
    X = np.asarray(X, dtype=float)
    W0 = np.asarray(W0, dtype=float)
    d, n = X.shape
    m = W0.shape[0]
    if n * m * d > SCALE_GUARD and not allow_large:
        raise ValueError(
            f"instance size n*m*d = {n * m * d} exceeds {SCALE_GUARD}; "
            "pass allow_large=True to override")
    if exhaustive is None:
        exhaustive = n <= 10 and c == 1
    rng = fork_rng(cfg.seed, 2)
    if exhaustive:
        sigmas = enumerate_signs(n)[:, :, None]  # (2^n, n, 1)
    else:
        sigmas = np.stack([sample_signs(rng, n, c)
                           for _ in range(cfg.sigma_samples)])
    sups = _pga_best_values(sigmas, X, W0, R_W, R_V, activation, cfg)
    per_sigma = sups / n
    mean = float(np.mean(per_sigma))
    if exhaustive:
        std_error = 0.0
    else:
        std_error = float(np.std(per_sigma, ddof=1) / math.sqrt(len(per_sigma)))
    return RadEstimate(mean, std_error, len(per_sigma), "feasible_lower")


def khintchine_sandwich_check(X, samples=1000, rng=None):
    """Monte-Carlo E||sum_i sigma_i x_i||_2 with its analytic sandwich.

    Returns (mc_mean, lower, upper) where lower = (sum ||x_i||^2)^(1/2)/sqrt(2)
    and upper = (sum ||x_i||^2)^(1/2).  Exact enumeration replaces sampling
    for n <= 10.  Raises AssertionError if the sandwich fails beyond 3
    standard errors.
    """
    if samples < 100:
        raise ValueError("samples must be >= 100")
    X = np.asarray(X, dtype=float)
    d, n = X.shape
    rss = frobenius_norm(X)
    lower = rss / math.sqrt(2.0)
    upper = rss
    if n <= 10:
        sigmas = enumerate_signs(n)
        norms = np.linalg.norm(X @ sigmas.T, axis=0)
        mean = float(np.mean(norms))
        se = 0.0
    else:
        rng = rng or fork_rng(0, 3)
        sigmas = sample_signs(rng, samples, n)
        norms = np.linalg.norm(X @ sigmas.T, axis=0)
        mean = float(np.mean(norms))
        se = float(np.std(norms, ddof=1) / math.sqrt(samples))
    if not (lower - 3 * se - 1e-12 <= mean <= upper + 3 * se + 1e-12):
        raise AssertionError(
            f"Khintchine sandwich violated: {lower} <= {mean} <= {upper}")
    return mean, lower, upper
