"""Linear-algebra kernels shared by the quantile and Gaussian sweep engines.

Both engines reduce their block updates to the same primitive: a weighted
Gram matrix plus a diagonal ridge gives the conditional precision, and the
spike probability is a two-way mixture computed in log space.
"""

from __future__ import annotations

import math

import numpy as np


def weighted_block_grams(blocks: np.ndarray, weights: np.ndarray | None = None) -> np.ndarray:
    """Gram matrices sum_i w_i Z_ij Z_ij' for every block at once; (p+1, d, d)."""
    if weights is None:
        return np.einsum("jnd,jne->jde", blocks, blocks, optimize=True)
    return np.einsum("jnd,n,jne->jde", blocks, weights, blocks, optimize=True)


def covariance_factors(precisions: np.ndarray):
    """Batched inversion of SPD precisions.

    Returns (covariances, cholesky factors of the covariances, log-dets of
    the covariances).  Raises LinAlgError if any precision fails Cholesky,
    which cannot happen for positive ridge terms.
    """
    np.linalg.cholesky(precisions)  # SPD assertion; cheap at these sizes
    cov = np.linalg.inv(precisions)
    cov = 0.5 * (cov + np.transpose(cov, (0, 2, 1)))
    chol = np.linalg.cholesky(cov)
    logdet = 2.0 * np.sum(np.log(np.diagonal(chol, axis1=1, axis2=2)), axis=1)
    return cov, chol, logdet


def spd_solve_moments(gram: np.ndarray, rhs: np.ndarray, prior_precision: np.ndarray):
    """Mean and covariance of a Gaussian conditional with the given pieces.

    covariance = (gram + prior_precision)^-1, mean = covariance @ rhs.
    """
    precision = gram + prior_precision
    cov = np.linalg.inv(precision)
    cov = 0.5 * (cov + cov.T)
    return cov @ rhs, cov


def log_mixture_probability(log_bayes_factor: float, pi0: float) -> float:
    """P(spike) = pi0 / (pi0 + (1-pi0) * exp(log_bayes_factor)), overflow-safe."""
    if pi0 >= 1.0:
        return 1.0
    if pi0 <= 0.0:
        return 0.0
    log_spike = math.log(pi0)
    log_slab = math.log1p(-pi0) + log_bayes_factor
    return math.exp(log_spike - np.logaddexp(log_spike, log_slab))
