"""Prior and MCMC run configuration for the four Gibbs samplers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_PRIOR_SCALE = 100.0


def _resolve_spd(matrix, dim: int, name: str, scale: float = DEFAULT_PRIOR_SCALE) -> np.ndarray:
    """Default to a diffuse diagonal prior covariance when none is given."""
    if matrix is None:
        if scale <= 0:
            raise ValueError("prior_scale must be positive")
        return scale * np.eye(dim)
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (dim, dim):
        raise ValueError(f"{name} must be {dim}x{dim}")
    if not np.allclose(matrix, matrix.T):
        raise ValueError(f"{name} must be symmetric")
    try:
        np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"{name} must be positive definite") from exc
    return matrix


@dataclass
class PriorConfig:
    """Hyperparameters for the quantile samplers.

    a, b: Gamma prior on the inverse scale theta.
    c, m: Gamma prior on the squared shrinkage rate eta_sq.
    e, f: Beta prior on the spike weight pi0 (spike-and-slab variant only).
    sigma_beta / sigma_alpha0: prior covariances for the clinical
    coefficients and the varying-intercept spline block; None means a
    diffuse diagonal (100 * I).
    """

    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    m: float = 1.0
    e: float = 1.0
    f: float = 1.0
    sigma_beta: np.ndarray | None = None
    sigma_alpha0: np.ndarray | None = None
    prior_scale: float = DEFAULT_PRIOR_SCALE

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "m", "e", "f", "prior_scale"):
            if getattr(self, name) <= 0:
                raise ValueError(f"prior hyperparameter {name} must be positive")

    def resolved_sigma_beta(self, q: int) -> np.ndarray:
        return _resolve_spd(self.sigma_beta, q, "sigma_beta", self.prior_scale)

    def resolved_sigma_alpha0(self, d: int) -> np.ndarray:
        return _resolve_spd(self.sigma_alpha0, d, "sigma_alpha0", self.prior_scale)


@dataclass
class GaussianPriorConfig:
    """Hyperparameters for the Gaussian-likelihood samplers.

    s, h: Inverse-Gamma prior on the noise variance sigma_sq.
    t, psi: Gamma prior on the squared shrinkage rate lambda_sq.
    a, b: Beta prior on the spike weight pi0 (spike-and-slab variant only);
    unrelated to the a, b of :class:`PriorConfig`, which parameterize theta.
    """

    s: float = 1.0
    h: float = 1.0
    t: float = 1.0
    psi: float = 1.0
    a: float = 1.0
    b: float = 1.0
    sigma_beta: np.ndarray | None = None
    sigma_alpha0: np.ndarray | None = None
    prior_scale: float = DEFAULT_PRIOR_SCALE

    def __post_init__(self) -> None:
        for name in ("s", "h", "t", "psi", "a", "b", "prior_scale"):
            if getattr(self, name) <= 0:
                raise ValueError(f"prior hyperparameter {name} must be positive")

    def resolved_sigma_beta(self, q: int) -> np.ndarray:
        return _resolve_spd(self.sigma_beta, q, "sigma_beta", self.prior_scale)

    def resolved_sigma_alpha0(self, d: int) -> np.ndarray:
        return _resolve_spd(self.sigma_alpha0, d, "sigma_alpha0", self.prior_scale)


@dataclass
class McmcOptions:
    """Chain length bookkeeping; stored draw count is (iterations - burn_in) // thin."""

    iterations: int = 10_000
    burn_in: int = 5_000
    thin: int = 1
    chains: int = 1
    seed: int = 0
    store_latents: bool = False

    def __post_init__(self) -> None:
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        if self.iterations <= self.burn_in:
            raise ValueError("iterations must exceed burn_in")
        if self.thin < 1:
            raise ValueError("thin must be at least 1")
        if self.chains < 1:
            raise ValueError("chains must be at least 1")

    @property
    def stored(self) -> int:
        return (self.iterations - self.burn_in) // self.thin
