import math

import numpy as np
import pytest
from scipy.optimize import brentq

from permuperc.branching import (
    GwConfig,
    exact_truncated_binomial_mean,
    simulate_gw,
    solve_gamma,
    survival_probability_mc,
    truncated_binomial_mean,
    truncation_parameters,
)
from permuperc.verify import check_gamma, check_truncated_mean


def test_gamma_subcritical():
    for c in (0.1, 0.5, 1.0):
        assert solve_gamma(c) == 0.0
    with pytest.raises(ValueError):
        solve_gamma(0.0)


def test_gamma_two_against_brent():
    ref = brentq(lambda g: g - 1 + math.exp(-2 * g), 0.1, 1.0, xtol=1e-15)
    assert abs(solve_gamma(2.0) - ref) < 1e-12
    assert f"{solve_gamma(2.0):.6f}" == "0.796812"


def test_gamma_grid_properties():
    ok, detail = check_gamma()
    assert ok, detail
    for c in (1.05, 1.1, 1.2, 1.25):
        assert solve_gamma(c) > c - 1


def test_gw_trivial():
    out = simulate_gw(GwConfig(n=10, p=0.0, max_generations=5))
    assert (out.survived, out.total_size, out.generation_sizes) == (False, 1, [1, 0])


def test_gw_outcome_invariants():
    rng = np.random.default_rng(0)
    for _ in range(200):
        out = simulate_gw(GwConfig(n=20, p=0.08, max_generations=10), rng)
        assert out.generation_sizes[0] == 1
        assert out.total_size == sum(out.generation_sizes)
        assert out.survived == (out.generation_sizes[-1] > 0)


def test_gw_survival_matches_gamma():
    est, se = survival_probability_mc(100, 2.0, trials=10_000, max_generations=25, seed=3)
    assert abs(est - solve_gamma(2.0)) <= 0.02


def test_gw_growth_rate():
    rng = np.random.default_rng(11)
    roots = []
    while len(roots) < 300:
        out = simulate_gw(GwConfig(n=100, p=0.02, max_generations=20), rng)
        if out.survived:
            roots.append(out.generation_sizes[20] ** (1 / 20))
    assert abs(np.median(roots) - 2.0) <= 0.15


def test_gw_total_size_borel():
    """Small total sizes follow the Borel law of the Poisson(c) tree."""
    c, trials = 1.5, 20_000
    rng = np.random.default_rng(2)
    sizes = np.array([simulate_gw(GwConfig(n=200, p=c / 200, max_generations=40), rng).total_size
                      for _ in range(trials)])
    for k in range(1, 5):
        borel = math.exp(-c * k) * (c * k) ** (k - 1) / math.factorial(k)
        est = np.mean(sizes == k)
        se = math.sqrt(borel * (1 - borel) / trials)
        assert abs(est - borel) <= 4 * se + 0.005


def test_truncated_mean_untruncated():
    est, se = truncated_binomial_mean(40, 0.1, 40, trials=50_000, seed=1)
    assert abs(est - 4.0) <= 4 * se


def test_truncated_mean_exact_agrees():
    for mp, p, K in [(95, 0.02, 11), (30, 0.3, 4), (10, 0.5, 1)]:
        est, se = truncated_binomial_mean(mp, p, K, trials=50_000, seed=mp)
        assert abs(est - exact_truncated_binomial_mean(mp, p, K)) <= 4 * se


def test_truncated_mean_bound_example():
    p, mp, K = truncation_parameters(1.0, 100)
    assert (p, mp, K) == (0.02, 95, 11)
    est, se = truncated_binomial_mean(mp, p, K, trials=20_000, seed=0)
    assert est >= 1.25 - 3 * se


def test_truncated_mean_rejects():
    with pytest.raises(ValueError):
        truncated_binomial_mean(10, 0.5, 0, trials=10)
    with pytest.raises(ValueError):
        truncated_binomial_mean(0, 0.5, 1, trials=10)


def test_truncated_mean_grid():
    ok, detail = check_truncated_mean()
    assert ok, detail
