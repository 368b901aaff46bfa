"""Bond percolation on Perm(n) by full enumeration."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from math import factorial

import numpy as np

from .oracle import EdgeOracle
from .perm import canonical_edges, edge_ids
from .unionfind import DisjointSet, hitting_indices

log = logging.getLogger(__name__)

DEFAULT_MAX_N = 9
HARD_MAX_N = 11
CSV_FIELDS = (
    "n", "p", "seed", "largest", "second_largest", "num_components",
    "isolated", "connected", "giant_fraction",
)


class EnumerationTooLarge(ValueError):
    pass


def max_enumeration_n() -> int:
    raw = os.environ.get("PERMUPERC_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    return min(int(raw), HARD_MAX_N)


def memory_estimate(n: int) -> int:
    """Rough peak bytes for enumerating Perm(n): words, union-find, edge arrays."""
    v = factorial(n + 1)
    e = n * v // 2
    return v * (n + 1 + 4 + 4 + 8) + e * (4 + 4 + 1 + 8 + 8 + 1)


def check_enumerable(n: int, max_n: int | None = None) -> None:
    cap = max_enumeration_n() if max_n is None else min(max_n, HARD_MAX_N)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise EnumerationTooLarge(
            f"n={n} exceeds the enumeration cap {cap} "
            f"(estimated {memory_estimate(n) / 2**20:.0f} MiB); raise PERMUPERC_MAX_N"
        )
    if n > DEFAULT_MAX_N:
        log.warning("enumerating Perm(%d): about %.0f MiB", n, memory_estimate(n) / 2**20)


@dataclass(frozen=True)
class PercolationConfig:
    n: int
    p: float
    seed: int = 0
    r: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")
        if self.r is not None and self.r < 1:
            raise ValueError("r must be >= 1")

    @property
    def threshold(self) -> int:
        return self.n ** 2 if self.r is None else self.r

    @classmethod
    def from_c(cls, n: int, c: float, seed: int = 0, r: int | None = None):
        return cls(n=n, p=c / n, seed=seed, r=r)


@dataclass
class ComponentReport:
    n: int
    p: float
    seed: int
    component_sizes: list[int] = field(repr=False)
    num_components: int
    isolated_count: int
    largest: int
    second_largest: int
    giant_fraction: float
    connected: bool
    count_in_components_geq_r: int
    r: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def csv_row(self) -> dict:
        return {
            "n": self.n, "p": self.p, "seed": self.seed, "largest": self.largest,
            "second_largest": self.second_largest, "num_components": self.num_components,
            "isolated": self.isolated_count, "connected": self.connected,
            "giant_fraction": self.giant_fraction,
        }


def edge_uniforms(n: int, seed: int) -> np.ndarray:
    """Uniform of every canonical edge, in canonical edge order."""
    return EdgeOracle(seed, n).uniforms(edge_ids(n))


def open_mask(n: int, seed: int, p: float) -> np.ndarray:
    return edge_uniforms(n, seed) < p


def components_of(n: int, mask: np.ndarray) -> DisjointSet:
    lo, hi, _ = canonical_edges(n)
    ds = DisjointSet(factorial(n + 1))
    ds.union_edges(lo, hi, mask)
    return ds


def report_from_sizes(n: int, p: float, seed: int, sizes: np.ndarray, r: int) -> ComponentReport:
    total = factorial(n + 1)
    sizes_list = [int(s) for s in sizes]
    largest = sizes_list[0]
    return ComponentReport(
        n=n,
        p=p,
        seed=seed,
        component_sizes=sizes_list,
        num_components=len(sizes_list),
        isolated_count=int(np.count_nonzero(sizes == 1)),
        largest=largest,
        second_largest=sizes_list[1] if len(sizes_list) > 1 else 0,
        giant_fraction=largest / total,
        connected=len(sizes_list) == 1,
        count_in_components_geq_r=int(sizes[sizes >= r].sum()),
        r=r,
    )


def enumerate_components(cfg: PercolationConfig, max_n: int | None = None) -> ComponentReport:
    """Exact component structure of Perm(n)_p under the seeded oracle."""
    check_enumerable(cfg.n, max_n)
    mask = open_mask(cfg.n, cfg.seed, cfg.p)
    ds = components_of(cfg.n, mask)
    return report_from_sizes(cfg.n, cfg.p, cfg.seed, ds.component_sizes(), cfg.threshold)


def sprinkle_probability(p: float, p1: float) -> float:
    """The ``p2`` with ``(1 - p1)(1 - p2) = 1 - p``."""
    if not 0.0 <= p1 <= p <= 1.0:
        raise ValueError("need 0 <= p1 <= p <= 1")
    if p1 == 1.0:
        return 0.0
    return 1.0 - (1.0 - p) / (1.0 - p1)


def combined_probability(p1: float, p2: float) -> float:
    return 1.0 - (1.0 - p1) * (1.0 - p2)


def two_round_exposure(n: int, p1: float, p2: float, seed: int, r: int | None = None):
    """Reports for ``G1 = Perm(n)_{p1}`` and ``G2 = G1 + Perm(n)_{p2}``.

    Both rounds read the same uniforms: G1 keeps ``u < p1`` and G2 keeps
    ``u < p`` with ``1 - p = (1 - p1)(1 - p2)``, so ``G1 <= G2`` edgewise and
    the sprinkled edges ``p1 <= u < p`` are independent of G1 with the
    conditional probability ``p2``.
    """
    for q in (p1, p2):
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"probability {q} outside [0, 1]")
    check_enumerable(n)
    p = combined_probability(p1, p2)
    thr = n ** 2 if r is None else r
    u = edge_uniforms(n, seed)
    reports = []
    for q in (p1, p):
        ds = components_of(n, u < q)
        reports.append(report_from_sizes(n, q, seed, ds.component_sizes(), thr))
    return reports[0], reports[1]


@dataclass(frozen=True)
class HittingTimes:
    n: int
    seed: int
    t_min_deg_1: int
    t_connect: int

    @property
    def agree(self) -> bool:
        return self.t_min_deg_1 == self.t_connect


def hitting_times(n: int, seed: int) -> HittingTimes:
    """Random graph process: insert edges by ascending uniform (edge id breaks ties)."""
    check_enumerable(n)
    lo, hi, _ = canonical_edges(n)
    u = edge_uniforms(n, seed)
    ids = np.arange(u.size)  # canonical order is edge-id order
    order = np.lexsort((ids, u))
    t_deg, t_conn = hitting_indices(factorial(n + 1), lo, hi, order)
    return HittingTimes(n, seed, t_deg, t_conn)


def large_cluster_vertices(n: int, mask: np.ndarray, r: int) -> np.ndarray:
    """Boolean vertex mask of V_{>=r}: vertices in components of size >= r."""
    ds = components_of(n, mask)
    roots = ds.roots()
    counts = np.bincount(roots, minlength=roots.size)
    return counts[roots] >= r


def distance2_coverage(cfg: PercolationConfig, r: int | None = None) -> float:
    """Fraction of vertices within host distance two of V_{>=r}."""
    check_enumerable(cfg.n)
    thr = cfg.threshold if r is None else r
    lo, hi, _ = canonical_edges(cfg.n)
    marked = large_cluster_vertices(cfg.n, open_mask(cfg.n, cfg.seed, cfg.p), thr)
    for _ in range(2):
        grown = marked.copy()
        grown[lo[marked[hi]]] = True
        grown[hi[marked[lo]]] = True
        marked = grown
    return float(marked.mean())


def medium_component_census(cfg: PercolationConfig, lo: int, hi: float) -> int:
    """Number of components whose size lies in ``[lo, hi]``."""
    rep = enumerate_components(cfg)
    sizes = np.asarray(rep.component_sizes)
    return int(np.count_nonzero((sizes >= lo) & (sizes <= hi)))


def expected_isolated(n: int, p: float) -> float:
    """lambda(n, p) = (n+1)! (1-p)^n."""
    return factorial(n + 1) * (1.0 - p) ** n


def p_for_lambda(n: int, lam: float) -> float:
    """Solve ``(n+1)! (1-p)^n = lam`` for p."""
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if lam > factorial(n + 1):
        raise ValueError(f"lambda={lam} exceeds (n+1)! for n={n}")
    if lam == 0:
        return 1.0
    return 1.0 - (lam / factorial(n + 1)) ** (1.0 / n)
