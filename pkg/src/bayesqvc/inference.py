"""Posterior summaries: selection decisions, curve estimates, credible bands.

All quantiles are empirical with linear interpolation between order
statistics (numpy default), and medians of even-length samples use the
midpoint convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import SplineConfig, basis_values, default_grid
from .samplers.state import PosteriorSamples

MPM_THRESHOLD = 0.5


@dataclass
class InclusionSummary:
    """Posterior inclusion probabilities and the median-probability model."""

    probs: np.ndarray
    threshold: float = MPM_THRESHOLD
    selected: list[int] = field(init=False)

    def __post_init__(self) -> None:
        if np.any(self.probs < 0.0) or np.any(self.probs > 1.0):
            raise ValueError("inclusion probabilities must lie in [0, 1]")
        # "no less than" the threshold: ties select.
        self.selected = [j + 1 for j in range(self.probs.size) if self.probs[j] >= self.threshold]


@dataclass
class CurveEstimate:
    """Pointwise posterior median and equal-tailed band on the grid."""

    grid: np.ndarray
    median: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        if np.any(self.lower > self.median) or np.any(self.median > self.upper):
            raise ValueError("bands must bracket the median pointwise")


def inclusion_probabilities(
    samples: PosteriorSamples, threshold: float = MPM_THRESHOLD
) -> InclusionSummary:
    """Fraction of stored draws with each block active, pooled across chains."""
    if not samples.is_spike:
        raise ValueError(
            f"method {samples.method!r} has no point mass at zero; "
            "use ci_selection for credible-interval identification"
        )
    probs = samples.pooled_inclusion().astype(float).mean(axis=0)
    return InclusionSummary(probs=probs, threshold=threshold)


def ci_selection(samples: PosteriorSamples, level: float = 0.95) -> list[int]:
    """Blocks whose equal-tailed CI excludes zero for at least one coefficient.

    Identification rule for the pure-shrinkage samplers, which never set a
    block exactly to zero.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    alpha = samples.pooled_alpha()
    tail = 100.0 * (1.0 - level) / 2.0
    lower = np.percentile(alpha, tail, axis=0)
    upper = np.percentile(alpha, 100.0 - tail, axis=0)
    excludes = (lower > 0.0) | (upper < 0.0)
    return [j for j in range(1, alpha.shape[1]) if bool(np.any(excludes[j]))]


def curve_estimate(
    samples: PosteriorSamples,
    j: int,
    grid: np.ndarray | None = None,
    level: float = 0.95,
) -> CurveEstimate:
    """Pointwise median curve with an equal-tailed credible band for block j."""
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=float)
    if np.any(grid < 0.0) or np.any(grid > 1.0):
        raise ValueError("grid must lie in [0, 1]")
    config = SplineConfig(samples.spline_degree, samples.interior_knots)
    basis = basis_values(grid, config)
    draws = samples.pooled_alpha()[:, j, :] @ basis.T
    tail = 100.0 * (1.0 - level) / 2.0
    return CurveEstimate(
        grid=grid,
        median=np.median(draws, axis=0),
        lower=np.percentile(draws, tail, axis=0),
        upper=np.percentile(draws, 100.0 - tail, axis=0),
    )


def all_curve_estimates(
    samples: PosteriorSamples, grid: np.ndarray | None = None, level: float = 0.95
) -> list[CurveEstimate]:
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=float)
    config = SplineConfig(samples.spline_degree, samples.interior_knots)
    basis = basis_values(grid, config)
    alpha = samples.pooled_alpha()
    tail = 100.0 * (1.0 - level) / 2.0
    out = []
    for j in range(alpha.shape[1]):
        draws = alpha[:, j, :] @ basis.T
        out.append(
            CurveEstimate(
                grid=grid,
                median=np.median(draws, axis=0),
                lower=np.percentile(draws, tail, axis=0),
                upper=np.percentile(draws, 100.0 - tail, axis=0),
            )
        )
    return out


def scalar_summary(draws: np.ndarray, level: float = 0.95) -> dict:
    draws = np.asarray(draws, dtype=float)
    tail = 100.0 * (1.0 - level) / 2.0
    return {
        "median": float(np.median(draws)),
        "lower": float(np.percentile(draws, tail)),
        "upper": float(np.percentile(draws, 100.0 - tail)),
    }


def posterior_scalar_summaries(samples: PosteriorSamples, level: float = 0.95) -> dict:
    """Medians and equal-tailed CIs for the scalar parameters and beta."""
    out = {}
    for name in samples.chains[0].scalars:
        out[name] = scalar_summary(samples.pooled_scalar(name), level=level)
    beta = samples.pooled_beta()
    out["beta"] = [scalar_summary(beta[:, k], level=level) for k in range(beta.shape[1])]
    return out
