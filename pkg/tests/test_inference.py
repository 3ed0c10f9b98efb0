"""Posterior summarization: MPM selection, CI selection, curves, scalars."""

import numpy as np
import pytest

from bayesqvc.basis import SplineConfig, basis_values, default_grid
from bayesqvc.inference import (
    InclusionSummary,
    ci_selection,
    curve_estimate,
    inclusion_probabilities,
    posterior_scalar_summaries,
    scalar_summary,
)
from bayesqvc.samplers.state import ChainSamples, PosteriorSamples


def make_samples(alpha, inclusion=None, method="bqrvcss", scalars=None, beta=None):
    alpha = np.asarray(alpha, dtype=float)
    m, p1, d = alpha.shape
    if inclusion is None:
        inclusion = np.any(alpha[:, 1:, :] != 0.0, axis=2).astype(np.uint8)
    if scalars is None:
        scalars = {"theta": np.ones(m), "eta_sq": np.ones(m), "pi0": np.full(m, 0.5)}
    if beta is None:
        beta = np.zeros((m, 0))
    chain = ChainSamples(
        seed=0, stream_id=0, iterations=2 * m, burn_in=m, thin=1,
        alpha=alpha, beta=beta, inclusion=inclusion, scalars=scalars,
    )
    return PosteriorSamples(
        method=method, tau=0.5 if method.startswith("bq") else None,
        spline_degree=1, interior_knots=0, chains=[chain],
    )


def test_inclusion_probabilities_arithmetic():
    alpha = np.zeros((4, 2, 2))
    alpha[[0, 1, 3], 1, 0] = 1.0  # block 1 active in 3 of 4 draws
    samples = make_samples(alpha)
    inc = inclusion_probabilities(samples)
    assert inc.probs[0] == pytest.approx(0.75)
    assert inc.selected == [1]


def test_inclusion_all_zero_draws():
    samples = make_samples(np.zeros((5, 3, 2)))
    inc = inclusion_probabilities(samples)
    np.testing.assert_array_equal(inc.probs, 0.0)
    assert inc.selected == []


def test_inclusion_boundary_is_selected():
    alpha = np.zeros((4, 2, 2))
    alpha[[0, 1], 1, 0] = 1.0  # exactly 0.5
    inc = inclusion_probabilities(make_samples(alpha))
    assert inc.probs[0] == pytest.approx(0.5)
    assert inc.selected == [1]  # "no less than" the threshold


def test_inclusion_rejects_non_spike_methods():
    samples = make_samples(np.zeros((4, 2, 2)), method="bqrvc")
    with pytest.raises(ValueError, match="ci_selection"):
        inclusion_probabilities(samples)


def test_inclusion_invariant_under_duplication():
    rng = np.random.default_rng(0)
    alpha = rng.normal(size=(10, 3, 2)) * (rng.random((10, 3, 1)) > 0.4)
    alpha[:, 0, :] = 1.0
    samples = make_samples(alpha)
    doubled = make_samples(np.repeat(alpha, 3, axis=0))
    np.testing.assert_allclose(
        inclusion_probabilities(samples).probs, inclusion_probabilities(doubled).probs
    )


def test_ci_selection_rules():
    m = 400
    rng = np.random.default_rng(1)
    alpha = np.zeros((m, 3, 2))
    alpha[:, 1, 0] = 1.0                      # constant +1: CI = [1,1], selected
    alpha[:, 2, :] = rng.normal(size=(m, 2))  # symmetric around 0: not selected
    samples = make_samples(alpha, method="bvc", scalars={"sigma_sq": np.ones(m),
                                                         "lambda_sq": np.ones(m),
                                                         "pi0": np.zeros(m)})
    assert ci_selection(samples) == [1]

    alpha[:, 2, 1] = 3.0 + 0.1 * rng.normal(size=m)
    samples = make_samples(alpha, method="bvc", scalars={"sigma_sq": np.ones(m),
                                                         "lambda_sq": np.ones(m),
                                                         "pi0": np.zeros(m)})
    sel = ci_selection(samples)
    assert sel == [1, 2]
    # verify against direct quantile computation
    lo = np.percentile(alpha[:, 2, 1], 2.5)
    assert lo > 0


def test_curve_estimate_identical_draws():
    cfg = SplineConfig(1, 0)
    grid = default_grid(20)
    coef = np.array([1.0, -2.0])
    alpha = np.tile(coef, (6, 2, 1))
    samples = make_samples(alpha)
    est = curve_estimate(samples, 1, grid=grid)
    expected = basis_values(grid, cfg) @ coef
    np.testing.assert_allclose(est.median, expected, atol=1e-12)
    np.testing.assert_allclose(est.upper - est.lower, 0.0, atol=1e-12)


def test_curve_estimate_zero_block():
    samples = make_samples(np.zeros((5, 2, 2)))
    est = curve_estimate(samples, 1, grid=default_grid(10))
    np.testing.assert_array_equal(est.median, 0.0)
    np.testing.assert_array_equal(est.lower, 0.0)
    np.testing.assert_array_equal(est.upper, 0.0)


def test_curve_estimate_three_draw_median():
    alpha = np.zeros((3, 2, 2))
    alpha[:, 1, 0] = [1.0, 5.0, 2.0]
    samples = make_samples(alpha)
    grid = np.array([0.0])  # basis at 0 is (1, 0)
    est = curve_estimate(samples, 1, grid=grid)
    assert est.median[0] == pytest.approx(2.0)  # elementwise middle value


def test_curve_bands_nested_by_level():
    rng = np.random.default_rng(5)
    alpha = rng.normal(size=(500, 2, 2))
    samples = make_samples(alpha)
    grid = default_grid(30)
    wide = curve_estimate(samples, 1, grid=grid, level=0.95)
    narrow = curve_estimate(samples, 1, grid=grid, level=0.90)
    assert np.all(wide.lower <= narrow.lower + 1e-12)
    assert np.all(narrow.upper <= wide.upper + 1e-12)


def test_scalar_summaries():
    assert scalar_summary(np.full(9, 2.3))["median"] == pytest.approx(2.3)
    assert scalar_summary(np.array([1.0, 3.0]))["median"] == pytest.approx(2.0)
    rng = np.random.default_rng(2)
    draws = rng.normal(size=1001)
    s = scalar_summary(draws)
    assert s["median"] == pytest.approx(np.sort(draws)[500])
    assert s["lower"] == pytest.approx(np.percentile(draws, 2.5))

    m = 50
    samples = make_samples(
        np.zeros((m, 2, 2)),
        scalars={"theta": np.arange(m, dtype=float), "eta_sq": np.ones(m),
                 "pi0": np.linspace(0, 1, m)},
        beta=np.linspace(-1, 1, m)[:, None],
    )
    out = posterior_scalar_summaries(samples)
    assert set(out) == {"theta", "eta_sq", "pi0", "beta"}
    assert out["beta"][0]["median"] == pytest.approx(0.0, abs=1e-12)


def test_inclusion_summary_validation():
    with pytest.raises(ValueError):
        InclusionSummary(probs=np.array([1.2]))
