"""Mutable per-iteration sampler states and stored posterior draws."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SPIKE_METHODS = ("bqrvcss", "bvcss")
QUANTILE_METHODS = ("bqrvcss", "bqrvc")
ALL_METHODS = ("bqrvcss", "bqrvc", "bvcss", "bvc")


@dataclass
class SamplerState:
    """All latent quantities of one quantile-model MCMC iteration.

    ``resid`` caches the full residual y - E beta - sum_j Z_j alpha_j; it is
    derived state, refreshed from scratch at the top of every sweep.
    """

    alpha: np.ndarray        # (p+1, d) spline coefficient blocks
    beta: np.ndarray         # (q,)
    u_tilde: np.ndarray      # (n,) exponential-mixture latents
    g: np.ndarray            # (p,) slab scales
    theta: float
    eta_sq: float
    pi0: float
    inclusion: np.ndarray    # (p,) bool, True iff alpha block j != 0
    resid: np.ndarray = field(default=None, repr=False)

    def validate(self) -> None:
        if np.any(self.u_tilde <= 0) or np.any(self.g <= 0):
            raise ValueError("latent scales must stay strictly positive")
        if self.theta <= 0 or self.eta_sq <= 0:
            raise ValueError("theta and eta_sq must stay strictly positive")
        if not 0.0 <= self.pi0 <= 1.0:
            raise ValueError("pi0 must lie in [0, 1]")
        nonzero = np.any(self.alpha[1:] != 0.0, axis=1)
        if not np.array_equal(nonzero, self.inclusion):
            raise ValueError("inclusion flags inconsistent with alpha blocks")


@dataclass
class GaussianSamplerState:
    """All latent quantities of one Gaussian-model MCMC iteration."""

    alpha: np.ndarray        # (p+1, d)
    beta: np.ndarray         # (q,)
    sigma_sq: float
    zeta_sq: np.ndarray      # (p,) slab scales
    lambda_sq: float
    pi0: float
    inclusion: np.ndarray    # (p,) bool
    resid: np.ndarray = field(default=None, repr=False)

    def validate(self) -> None:
        if self.sigma_sq <= 0 or self.lambda_sq <= 0 or np.any(self.zeta_sq <= 0):
            raise ValueError("variance parameters must stay strictly positive")
        if not 0.0 <= self.pi0 <= 1.0:
            raise ValueError("pi0 must lie in [0, 1]")
        nonzero = np.any(self.alpha[1:] != 0.0, axis=1)
        if not np.array_equal(nonzero, self.inclusion):
            raise ValueError("inclusion flags inconsistent with alpha blocks")


@dataclass
class ChainSamples:
    """Post-burn-in draws of a single chain, in iteration order."""

    seed: int
    stream_id: int
    iterations: int
    burn_in: int
    thin: int
    alpha: np.ndarray            # (M, p+1, d)
    beta: np.ndarray             # (M, q)
    inclusion: np.ndarray        # (M, p) uint8
    scalars: dict[str, np.ndarray]   # theta/eta_sq/pi0 or sigma_sq/lambda_sq/pi0
    latents: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def stored(self) -> int:
        return self.alpha.shape[0]


@dataclass
class PosteriorSamples:
    """Seed-reproducible posterior draws from one or more chains."""

    method: str
    tau: float | None
    spline_degree: int
    interior_knots: int
    chains: list[ChainSamples]

    def __post_init__(self) -> None:
        if self.method not in ALL_METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not self.chains:
            raise ValueError("at least one chain required")

    @property
    def is_spike(self) -> bool:
        return self.method in SPIKE_METHODS

    @property
    def p(self) -> int:
        return self.chains[0].alpha.shape[1] - 1

    @property
    def d(self) -> int:
        return self.chains[0].alpha.shape[2]

    def pooled_alpha(self) -> np.ndarray:
        """Draws pooled across chains, shape (M_total, p+1, d)."""
        return np.concatenate([c.alpha for c in self.chains], axis=0)

    def pooled_inclusion(self) -> np.ndarray:
        return np.concatenate([c.inclusion for c in self.chains], axis=0)

    def pooled_beta(self) -> np.ndarray:
        return np.concatenate([c.beta for c in self.chains], axis=0)

    def pooled_scalar(self, name: str) -> np.ndarray:
        return np.concatenate([c.scalars[name] for c in self.chains], axis=0)
