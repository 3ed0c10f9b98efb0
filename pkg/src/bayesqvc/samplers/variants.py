"""Entry points for the four samplers and the multi-chain driver.

Chains are independent tasks: chain k draws from the stream
(seed, stream_id=k), so results do not depend on scheduling and can be
reproduced chain by chain.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from ..basis import SplineConfig
from ..data import Dataset
from ..rng import RngHandle
from . import gaussian, quantile
from .config import GaussianPriorConfig, McmcOptions, PriorConfig
from .state import ChainSamples, PosteriorSamples


def run_bqrvcss(
    dataset: Dataset,
    spline_config: SplineConfig,
    prior: PriorConfig,
    tau: float,
    opts: McmcOptions,
    rng: RngHandle,
) -> ChainSamples:
    """Quantile model with spike-and-slab group selection (the proposed sampler)."""
    return quantile.run_chain(
        dataset, spline_config, prior, tau,
        opts.iterations, opts.burn_in, opts.thin, rng,
        spike=True, store_latents=opts.store_latents,
    )


def run_bqrvc(
    dataset: Dataset,
    spline_config: SplineConfig,
    prior: PriorConfig,
    tau: float,
    opts: McmcOptions,
    rng: RngHandle,
) -> ChainSamples:
    """Quantile model with pure multivariate-Laplace shrinkage (no point mass)."""
    return quantile.run_chain(
        dataset, spline_config, prior, tau,
        opts.iterations, opts.burn_in, opts.thin, rng,
        spike=False, store_latents=opts.store_latents,
    )


def run_bvcss(
    dataset: Dataset,
    spline_config: SplineConfig,
    prior: GaussianPriorConfig,
    opts: McmcOptions,
    rng: RngHandle,
) -> ChainSamples:
    """Gaussian-likelihood counterpart with spike-and-slab selection."""
    return gaussian.run_chain(
        dataset, spline_config, prior,
        opts.iterations, opts.burn_in, opts.thin, rng,
        spike=True, store_latents=opts.store_latents,
    )


def run_bvc(
    dataset: Dataset,
    spline_config: SplineConfig,
    prior: GaussianPriorConfig,
    opts: McmcOptions,
    rng: RngHandle,
) -> ChainSamples:
    """Gaussian-likelihood counterpart with pure shrinkage."""
    return gaussian.run_chain(
        dataset, spline_config, prior,
        opts.iterations, opts.burn_in, opts.thin, rng,
        spike=False, store_latents=opts.store_latents,
    )


def _run_one_chain(args) -> ChainSamples:
    method, dataset, spline_config, prior, tau, opts, seed, stream_id = args
    rng = RngHandle(seed, stream_id)
    if method == "bqrvcss":
        return run_bqrvcss(dataset, spline_config, prior, tau, opts, rng)
    if method == "bqrvc":
        return run_bqrvc(dataset, spline_config, prior, tau, opts, rng)
    if method == "bvcss":
        return run_bvcss(dataset, spline_config, prior, opts, rng)
    if method == "bvc":
        return run_bvc(dataset, spline_config, prior, opts, rng)
    raise ValueError(f"unknown method {method!r}")


def fit(
    dataset: Dataset,
    method: str,
    spline_config: SplineConfig | None = None,
    prior: PriorConfig | GaussianPriorConfig | None = None,
    tau: float | None = None,
    opts: McmcOptions | None = None,
    workers: int = 1,
) -> PosteriorSamples:
    """Run all requested chains of one method and merge the results.

    ``workers`` > 1 runs chains in separate processes; with one worker the
    chains run sequentially in-process.  Either way chain k consumes the
    stream (seed, k), so the merged samples are identical.
    """
    if method not in ("bqrvcss", "bqrvc", "bvcss", "bvc"):
        raise ValueError(f"unknown method {method!r}")
    spline_config = spline_config or SplineConfig()
    opts = opts or McmcOptions()
    if method in ("bqrvcss", "bqrvc"):
        prior = prior or PriorConfig()
        if tau is None:
            raise ValueError("quantile methods require a quantile level tau")
    else:
        prior = prior or GaussianPriorConfig()
        tau = None
    jobs = [
        (method, dataset, spline_config, prior, tau, opts, opts.seed, k)
        for k in range(opts.chains)
    ]
    if workers > 1 and opts.chains > 1:
        with ProcessPoolExecutor(max_workers=min(workers, opts.chains)) as pool:
            chains = list(pool.map(_run_one_chain, jobs))
    else:
        chains = [_run_one_chain(job) for job in jobs]
    return PosteriorSamples(
        method=method,
        tau=tau,
        spline_degree=spline_config.degree,
        interior_knots=spline_config.interior_knots,
        chains=chains,
    )
