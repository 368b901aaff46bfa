"""Branching-process oracles: survival probability, Galton-Watson runs,
truncated binomial means."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .oracle import mix_index

GW_NODE_CAP = 10_000_000


def solve_gamma(c: float, tol: float = 1e-12) -> float:
    """Survival probability of a Poisson(c) branching process.

    Root of ``g = 1 - exp(-c g)`` in (0, 1) by bisection; 0 when ``c <= 1``.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    if c <= 1:
        return 0.0
    h = lambda g: g - 1.0 + math.exp(-c * g)  # noqa: E731
    lo, hi = 1e-15, 1.0
    # h < 0 just above 0 for c > 1; push lo up if roundoff hides the sign
    while h(lo) >= 0:
        lo *= 10
    while hi - lo > tol / 4:
        mid = 0.5 * (lo + hi)
        if h(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class GwConfig:
    n: int
    p: float
    max_generations: int
    seed: int = 0

    @property
    def c(self) -> float:
        return self.n * self.p


@dataclass
class GwOutcome:
    survived: bool
    total_size: int
    generation_sizes: list[int] = field(default_factory=list)


def simulate_gw(cfg: GwConfig, rng: np.random.Generator | None = None) -> GwOutcome:
    """One Galton-Watson tree with Bin(n, p) offspring.

    A generation of size Z has ``Bin(n Z, p)`` children in total.  The run
    counts as survived if generation ``max_generations`` is nonempty or the
    tree passes ``GW_NODE_CAP`` nodes.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    sizes = [1]
    total = 1
    z = 1
    for _ in range(cfg.max_generations):
        z = int(rng.binomial(cfg.n * z, cfg.p)) if z else 0
        sizes.append(z)
        total += z
        if z == 0:
            return GwOutcome(False, total, sizes)
        if total >= GW_NODE_CAP:
            return GwOutcome(True, total, sizes)
    return GwOutcome(True, total, sizes)


def survival_probability_mc(
    n: int, c: float, trials: int = 10_000, max_generations: int = 25, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo survival fraction of Bin(n, c/n) trees, with standard error."""
    rng = np.random.default_rng(mix_index(seed, 0x6757))
    cfg = GwConfig(n=n, p=c / n, max_generations=max_generations, seed=seed)
    hits = sum(simulate_gw(cfg, rng).survived for _ in range(trials))
    frac = hits / trials
    return frac, math.sqrt(frac * (1 - frac) / trials)


def truncated_binomial_mean(
    m_prime: int, p: float, K: int, trials: int, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo estimate of ``E[min(X, K)]``, ``X ~ Bin(m', p)``, with its standard error."""
    if m_prime < 1:
        raise ValueError("m' must be >= 1")
    if K < 1:
        raise ValueError("K must be >= 1")
    if trials < 2:
        raise ValueError("need at least two trials")
    rng = np.random.default_rng(mix_index(seed, 0x7472))
    y = np.minimum(rng.binomial(m_prime, p, size=trials), K)
    return float(y.mean()), float(y.std(ddof=1) / math.sqrt(trials))


def exact_truncated_binomial_mean(m_prime: int, p: float, K: int) -> float:
    from scipy.stats import binom

    k = np.arange(m_prime + 1)
    return float(np.sum(np.minimum(k, K) * binom.pmf(k, m_prime, p)))


def truncation_parameters(beta: float, m: int) -> tuple[float, int, int]:
    """(p, m', K) at the smallest values the truncated-mean bound allows."""
    p = (1 + beta) / m
    m_prime = math.ceil((1 - min(beta / 2, 1 / 18)) * m)
    K = max(1, math.ceil(max(2 * math.e * m * p, math.log2(beta ** -2))))
    return p, m_prime, K
