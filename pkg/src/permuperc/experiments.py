"""Experiment drivers: sweeps over c, connectivity at fixed lambda, hitting times.

Rows are plain dataclasses; ``write_csv`` renders them with a provenance
header and 9 significant digits for floats.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from math import factorial
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .branching import solve_gamma
from .percolation import (
    ComponentReport,
    HittingTimes,
    check_enumerable,
    components_of,
    expected_isolated,
    hitting_times,
    open_mask,
    p_for_lambda,
    report_from_sizes,
)
from .perm import canonical_edges


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".9g")
    return str(x)


def header_line(config: dict) -> str:
    return "# " + json.dumps(config, sort_keys=True)


def write_csv(out: TextIO, config: dict, rows: Sequence, columns: Sequence[str] | None = None) -> None:
    out.write(header_line(config) + "\n")
    if columns is None:
        columns = [f.name for f in fields(rows[0])] if rows else []
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        d = row if isinstance(row, dict) else asdict(row)
        writer.writerow([fmt(d[c]) for c in columns])


def parallel_map(fn: Callable, items: Iterable, threads: int = 1) -> list:
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _stderr(xs: np.ndarray) -> float:
    return float(xs.std(ddof=1) / math.sqrt(xs.size)) if xs.size > 1 else 0.0


@dataclass
class SweepSpec:
    n: int
    grid: tuple[float, ...]
    trials: int = 50
    base_seed: int = 0
    r: int | None = None
    by: str = "c"  # grid holds c values or p values

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.grid:
            raise ValueError("empty grid")
        if list(self.grid) != sorted(self.grid):
            raise ValueError("grid must be sorted")
        if self.by not in ("c", "p"):
            raise ValueError("by must be 'c' or 'p'")

    def point(self, x: float) -> tuple[float, float]:
        """(c, p) for one grid value."""
        if self.by == "c":
            return x, x / self.n
        return x * self.n, x


@dataclass
class TrialResult:
    report: ComponentReport
    tree_components_geq_n: int


def run_trial(n: int, p: float, seed: int, r: int | None = None) -> TrialResult:
    """One percolation sample, plus the number of tree components of size >= n."""
    check_enumerable(n)
    lo, hi, _ = canonical_edges(n)
    mask = open_mask(n, seed, p)
    ds = components_of(n, mask)
    thr = n ** 2 if r is None else r
    report = report_from_sizes(n, p, seed, ds.component_sizes(), thr)
    roots = ds.roots()
    sizes = np.bincount(roots, minlength=roots.size)
    edges = np.bincount(roots[lo[mask]], minlength=roots.size)
    trees = (sizes >= n) & (edges == sizes - 1)
    return TrialResult(report, int(np.count_nonzero(trees)))


@dataclass
class SweepRow:
    n: int
    c: float
    p: float
    giant_fraction: float
    giant_fraction_stderr: float
    largest: float
    second_largest: float
    second_largest_stderr: float
    second_over_nlogn: float
    tree_components_geq_n: float
    gamma_c: float
    isolated: float
    isolated_stderr: float
    connectivity_rate: float
    connectivity_stderr: float
    lam: float
    trials: int


def sweep_point(n: int, c: float, p: float, seeds: Sequence[int], r: int | None, threads: int = 1) -> SweepRow:
    results = parallel_map(lambda s: run_trial(n, p, s, r), seeds, threads)
    reps = [t.report for t in results]
    giant = np.array([x.giant_fraction for x in reps])
    largest = np.array([x.largest for x in reps], dtype=float)
    second = np.array([x.second_largest for x in reps], dtype=float)
    iso = np.array([x.isolated_count for x in reps], dtype=float)
    conn = np.array([x.connected for x in reps], dtype=float)
    trees = np.array([t.tree_components_geq_n for t in results], dtype=float)
    return SweepRow(
        n=n, c=c, p=p,
        giant_fraction=float(giant.mean()),
        giant_fraction_stderr=_stderr(giant),
        largest=float(largest.mean()),
        second_largest=float(second.mean()),
        second_largest_stderr=_stderr(second),
        second_over_nlogn=float(second.mean() / (n * math.log(n))) if n > 1 else float("nan"),
        tree_components_geq_n=float(trees.mean()),
        gamma_c=solve_gamma(c) if c > 0 else 0.0,
        isolated=float(iso.mean()),
        isolated_stderr=_stderr(iso),
        connectivity_rate=float(conn.mean()),
        connectivity_stderr=_stderr(conn),
        lam=expected_isolated(n, p),
        trials=len(seeds),
    )


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[SweepRow]:
    seeds = [spec.base_seed + i for i in range(spec.trials)]
    rows = []
    for x in spec.grid:
        c, p = spec.point(x)
        rows.append(sweep_point(spec.n, c, p, seeds, spec.r, threads))
    return rows


@dataclass
class ConnectivityRow:
    n: int
    lam_target: float
    p: float
    connectivity_rate: float
    connectivity_stderr: float
    exp_minus_lambda: float
    isolated: float
    isolated_stderr: float
    trials: int


def run_connectivity(n: int, lambdas: Sequence[float], trials: int, base_seed: int = 0,
                     threads: int = 1) -> list[ConnectivityRow]:
    check_enumerable(n)
    seeds = [base_seed + i for i in range(trials)]
    rows = []
    for lam in lambdas:
        p = p_for_lambda(n, lam)
        reps = parallel_map(lambda s: run_trial(n, p, s).report, seeds, threads)
        conn = np.array([x.connected for x in reps], dtype=float)
        iso = np.array([x.isolated_count for x in reps], dtype=float)
        rows.append(ConnectivityRow(
            n=n, lam_target=lam, p=p,
            connectivity_rate=float(conn.mean()),
            connectivity_stderr=_stderr(conn),
            exp_minus_lambda=math.exp(-lam),
            isolated=float(iso.mean()),
            isolated_stderr=_stderr(iso),
            trials=trials,
        ))
    return rows


@dataclass
class HittingRow:
    n: int
    seed: int
    t_min_deg_1: int
    t_connect: int
    gap: int
    agree: bool


def run_hitting(n: int, trials: int, base_seed: int = 0, threads: int = 1) -> list[HittingRow]:
    def one(seed):
        h: HittingTimes = hitting_times(n, seed)
        return HittingRow(n, seed, h.t_min_deg_1, h.t_connect, h.t_connect - h.t_min_deg_1, h.agree)

    return parallel_map(one, [base_seed + i for i in range(trials)], threads)


def hitting_summary(rows: Sequence[HittingRow]) -> dict:
    gaps = [r.gap for r in rows]
    hist: dict[int, int] = {}
    for g in gaps:
        hist[g] = hist.get(g, 0) + 1
    return {
        "agreement": sum(r.agree for r in rows) / len(rows),
        "trials": len(rows),
        "gap_histogram": {str(k): hist[k] for k in sorted(hist)},
    }


def vertex_count(n: int) -> int:
    return factorial(n + 1)
