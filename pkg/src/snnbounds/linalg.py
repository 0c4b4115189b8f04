"""Dense linear algebra helpers: matrix norms, power iteration, seeded RNG.

All randomness in the package flows through generators created by
:func:`make_rng` / :func:`fork_rng`, which pin the bit generator to PCG64 so
that a given seed produces the same stream on every platform.
"""

from dataclasses import dataclass

import numpy as np

_SUPPORTED_ORDS = (1, 2, np.inf)


def make_rng(seed):
    """Generator with a fixed algorithm (PCG64) for a 64-bit integer seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def fork_rng(seed, *keys):
    """Child generator derived deterministically from (seed, *keys).

    Use this instead of sharing one generator across parallel work units.
    """
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, keys)]))
    )


def frobenius_norm(M):
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        raise ValueError("empty matrix")
    # np.linalg.norm accumulates through BLAS dot, which blocks the summation
    return float(np.linalg.norm(M))


def pq_norm(M, p, q):
    """(p, q) matrix norm: the lq norm of the vector of columnwise lp norms."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        raise ValueError("empty matrix")
    if p not in _SUPPORTED_ORDS or q not in _SUPPORTED_ORDS:
        raise ValueError(f"unsupported (p, q) = ({p}, {q}); use 1, 2 or inf")
    col_norms = np.linalg.norm(M, ord=p, axis=0)
    return float(np.linalg.norm(col_norms, ord=q))


def row_l2_norms(M):
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        raise ValueError("empty matrix")
    return np.linalg.norm(M, axis=1)


@dataclass(frozen=True)
class SpectralResult:
    value: float
    iterations: int
    converged: bool

    def __float__(self):
        return self.value


def spectral_norm(M, tol=1e-10, max_iter=1000, rng=None):
    """Largest singular value of M by power iteration on the smaller Gram matrix.

    Convergence is declared when the relative change of the Rayleigh quotient
    drops below ``tol``.  If ``max_iter`` is exhausted first, the best estimate
    is returned with ``converged=False``.
    """
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        raise ValueError("empty matrix")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if rng is None:
        rng = make_rng(0)

    # iterate on M M^T or M^T M, whichever is smaller
    if M.shape[0] <= M.shape[1]:
        A = M
    else:
        A = M.T
    k = A.shape[0]

    v = rng.standard_normal(k)
    v /= np.linalg.norm(v)
    lam = 0.0
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        u = A @ (A.T @ v)
        norm_u = np.linalg.norm(u)
        if norm_u == 0.0:
            # v is in the null space of the Gram matrix; sigma estimate is 0
            lam = 0.0
            converged = True
            break
        lam_new = float(v @ u)
        v = u / norm_u
        if abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-300):
            lam = lam_new
            converged = True
            break
        lam = lam_new
    return SpectralResult(float(np.sqrt(max(lam, 0.0))), iterations, converged)


def sample_signs(rng, n, c):
    """n x c matrix of independent +-1 entries drawn from rng."""
    if n < 1 or c < 1:
        raise ValueError("n and c must be >= 1")
    return (2.0 * rng.integers(0, 2, size=(n, c)) - 1.0).astype(float)
