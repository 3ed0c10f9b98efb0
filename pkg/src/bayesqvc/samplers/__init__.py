from .config import GaussianPriorConfig, McmcOptions, PriorConfig
from .state import ChainSamples, GaussianSamplerState, PosteriorSamples, SamplerState
from .variants import fit, run_bqrvc, run_bqrvcss, run_bvc, run_bvcss

__all__ = [
    "GaussianPriorConfig",
    "McmcOptions",
    "PriorConfig",
    "ChainSamples",
    "GaussianSamplerState",
    "PosteriorSamples",
    "SamplerState",
    "fit",
    "run_bqrvcss",
    "run_bqrvc",
    "run_bvcss",
    "run_bvc",
]
