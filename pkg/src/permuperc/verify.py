"""Self-checks run by ``permuperc verify``.

Each check returns a ``CheckResult``; the CLI prints them as a table and
exits nonzero if any failed.
"""

from __future__ import annotations

import math
import random
import time
from collections import deque
from dataclasses import dataclass
from math import factorial
from typing import Callable

import numpy as np

from . import faces as fg
from .branching import (
    truncation_parameters,
    solve_gamma,
    survival_probability_mc,
    truncated_binomial_mean,
)
from .iso import (
    conjecture_face_boundary,
    edge_boundary,
    face_ranks,
    halfspace_witness,
    hypercube_face,
    i_k_bruteforce,
    laplacian_lambda1,
)
from .oracle import EdgeOracle
from .percolation import components_of, open_mask
from .perm import (
    Perm,
    all_permutations,
    apply_generator,
    canonical_edges,
    kendall_distance,
    rank,
    unrank,
)
from .pfs import PfsConfig, check_invariants, pfs_explore
from .trees import count_rooted_trees, tree_count_bounds


@dataclass
class CheckResult:
    module: str
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _bfs(n: int, src: Perm, gen: Callable[[Perm, int], Perm]) -> dict[Perm, int]:
    dist = {src: 0}
    q = deque([src])
    while q:
        x = q.popleft()
        for i in range(1, n + 1):
            y = gen(x, i)
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def check_isometry(n: int, gen: Callable[[Perm, int], Perm] = apply_generator) -> tuple[bool, str]:
    """Inversion-set Hamming distance equals BFS distance, all pairs."""
    verts = list(all_permutations(n))
    bad = 0
    for s in verts:
        d = _bfs(n, s, gen)
        for t in verts:
            if d.get(t) != kendall_distance(s, t):
                bad += 1
    return bad == 0, f"n={n}: {bad} mismatched pairs of {len(verts) ** 2}"


def check_regularity(n: int) -> tuple[bool, str]:
    lo, hi, _ = canonical_edges(n)
    deg = np.bincount(lo, minlength=factorial(n + 1)) + np.bincount(hi, minlength=factorial(n + 1))
    ok = lo.size == n * factorial(n + 1) // 2 and bool(np.all(deg == n)) and bool(np.all(lo < hi))
    return ok, f"n={n}: {lo.size} edges, degrees {set(deg.tolist())}"


def check_rank_roundtrip(n: int) -> tuple[bool, str]:
    ok = all(rank(p) == r and unrank(n, r) == p for r, p in enumerate(all_permutations(n)))
    return ok, f"n={n}: {factorial(n + 1)} ranks"


def check_projection(n: int, trials: int, max_k: int, seed: int, explicit: bool) -> tuple[bool, str]:
    rng = random.Random(seed)
    violations = 0
    host = fg.full_face(n)
    for _ in range(trials):
        k = rng.randint(1, max_k)
        xs = {unrank(n, rng.randrange(factorial(n + 1))) for _ in range(k)}
        out = fg.project(host, xs)
        faces = list(out.items())
        for x, f in faces:
            if not fg.contains(f, x) or f.dim < host.dim - (len(xs) - 1):
                violations += 1
        for a in range(len(faces)):
            for b in range(a + 1, len(faces)):
                fa, fb = faces[a][1], faces[b][1]
                if explicit:
                    clash = bool(set(fg.members(fa)) & set(fg.members(fb)))
                else:
                    clash = fg.faces_intersect(fa, fb)
                violations += clash
    return violations == 0, f"n={n}: {trials} sets, {violations} violations"


def _components_bfs(n: int, mask: np.ndarray) -> list[int]:
    lo, hi, _ = canonical_edges(n)
    N = factorial(n + 1)
    adj = [[] for _ in range(N)]
    for a, b in zip(lo[mask].tolist(), hi[mask].tolist()):
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * N
    sizes = []
    for s in range(N):
        if seen[s]:
            continue
        seen[s] = True
        q, c = [s], 0
        while q:
            x = q.pop()
            c += 1
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    q.append(y)
        sizes.append(c)
    return sorted(sizes, reverse=True)


def check_union_find(n: int, seeds: int) -> tuple[bool, str]:
    bad = 0
    for s in range(seeds):
        mask = open_mask(n, s, 1.5 / n)
        uf = components_of(n, mask).component_sizes().tolist()
        bad += uf != _components_bfs(n, mask)
    return bad == 0, f"n={n}: {bad} of {seeds} seeds differ from BFS"


def check_coupling(n: int, seeds: int) -> tuple[bool, str]:
    grid = [k / 10 / n for k in range(1, 31)]
    bad = 0
    for s in range(seeds):
        prev_mask, prev_largest = None, 0
        for p in grid:
            mask = open_mask(n, s, p)
            largest = int(components_of(n, mask).component_sizes()[0])
            if prev_mask is not None and (np.any(prev_mask & ~mask) or largest < prev_largest):
                bad += 1
            prev_mask, prev_largest = mask, largest
    return bad == 0, f"n={n}: {bad} violations over {seeds} seeds"


def check_pfs(n: int, seeds: int) -> tuple[bool, str]:
    host = fg.full_face(n)
    bad = 0
    for s in range(seeds):
        oracle = EdgeOracle(s, n)
        p = (s % 9 + 1) / 10
        v = unrank(n, s % factorial(n + 1))
        state = pfs_explore(host, v, oracle, PfsConfig(p=p, check=True))
        check_invariants(state, oracle)
        ds = components_of(n, open_mask(n, s, p))
        root = ds.find(rank(v))
        bad += any(ds.find(rank(w)) != root for w in state.explored)
        bad += len(state.queried) != len(set(state.queried))
    return bad == 0, f"n={n}: {bad} failures over {seeds} seeds"


def check_gamma() -> tuple[bool, str]:
    grid = [1.01 + 0.05 * i for i in range(80)]
    gs = [solve_gamma(c) for c in grid]
    resid = max(abs(g - 1 + math.exp(-c * g)) for c, g in zip(grid, gs))
    mono = all(a < b for a, b in zip(gs, gs[1:]))
    quant = all(solve_gamma(c) > c - 1 for c in (1.05, 1.1, 1.2, 1.25))
    return resid <= 1e-12 and mono and quant, f"max residual {resid:.1e}, increasing={mono}"


def check_gw_survival() -> tuple[bool, str]:
    est, se = survival_probability_mc(100, 2.0, trials=4000, max_generations=25, seed=1)
    return abs(est - solve_gamma(2.0)) <= 0.03, f"survival {est:.4f} vs gamma(2)={solve_gamma(2.0):.4f}"


def check_truncated_mean() -> tuple[bool, str]:
    worst = math.inf
    for beta in (0.1, 0.5, 1.0, 2.0):
        for m in (50, 100, 500):
            p, mp, K = truncation_parameters(beta, m)
            est, se = truncated_binomial_mean(mp, p, K, trials=20_000, seed=m)
            worst = min(worst, est + 3 * se - (1 + beta / 4))
    return worst >= 0, f"min margin {worst:.4f}"


def check_tree_counts() -> tuple[bool, str]:
    ok = count_rooted_trees(2, 2) == 12 and count_rooted_trees(2, 6) == 36
    for n in (1, 2, 3):
        N = factorial(n + 1)
        for m in range(1, 7):
            t = count_rooted_trees(n, m)
            lo, hi = tree_count_bounds(N, n, n, m)
            if t > hi or (n > m and t < lo):
                ok = False
    return ok, "hexagon values and bounds"


def check_harper() -> tuple[bool, str]:
    ok = True
    for k in range(1, 13):
        ik, _ = i_k_bruteforce(3, k)
        if float(ik) < 3 - math.log2(k) - 1e-12:
            ok = False
        if k in (1, 2, 4) and ik != 3 - int(math.log2(k)):
            ok = False
    return ok, "n=3, k<=12"


def check_spectral() -> tuple[bool, str]:
    errs = [abs(laplacian_lambda1(n) - (2 - 2 * math.cos(math.pi / (n + 1)))) for n in (1, 2, 3, 4)]
    return max(errs) <= 1e-9, f"max error {max(errs):.1e}"


def check_witnesses() -> tuple[bool, str]:
    ok = all(edge_boundary(n, halfspace_witness(n)) == factorial(n) for n in (3, 5))
    for n in range(1, 6):
        for r in range(1, (n + 1) // 2 + 1):
            ok &= edge_boundary(n, face_ranks(hypercube_face(n, r))) == 2 ** r * (n - r)
    k, b, ratio = conjecture_face_boundary(5)
    ok &= (k, b, ratio) == (36, 36, 1)
    return ok, "halfspace, hypercube faces, hexagon product"


CHECKS: dict[str, list[tuple[str, Callable[[], tuple[bool, str]]]]] = {
    "perm-core": [
        ("regularity n<=5", lambda: _all(check_regularity(n) for n in range(1, 6))),
        ("rank roundtrip n<=5", lambda: _all(check_rank_roundtrip(n) for n in range(1, 6))),
        ("isometry n<=4", lambda: _all(check_isometry(n) for n in range(1, 5))),
    ],
    "face-graph": [
        ("projection n<=4 explicit", lambda: _all(check_projection(n, 250, 5, n, True) for n in range(1, 5))),
        ("projection n=8", lambda: check_projection(8, 500, 5, 8, False)),
    ],
    "perc-engine": [
        ("union-find vs BFS n<=4", lambda: _all(check_union_find(n, 20) for n in range(1, 5))),
        ("coupling monotone n=5", lambda: check_coupling(5, 10)),
    ],
    "pfs-explorer": [
        ("pfs soundness n<=4", lambda: _all(check_pfs(n, 100) for n in range(2, 5))),
    ],
    "probab-oracles": [
        ("gamma fixed point", check_gamma),
        ("GW survival", check_gw_survival),
        ("truncated binomial mean", check_truncated_mean),
        ("tree counts", check_tree_counts),
    ],
    "iso-spectral": [
        ("Harper bound n=3", check_harper),
        ("spectral gap n<=4", check_spectral),
        ("witness boundaries", check_witnesses),
    ],
}


def _all(results) -> tuple[bool, str]:
    results = list(results)
    return all(ok for ok, _ in results), "; ".join(d for _, d in results)


def run_checks(module: str = "all") -> list[CheckResult]:
    if module != "all" and module not in CHECKS:
        raise ValueError(f"unknown module {module!r}; choose from all, {', '.join(CHECKS)}")
    out = []
    for mod, checks in CHECKS.items():
        if module not in ("all", mod):
            continue
        for name, fn in checks:
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # a crashing check is a failed check
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            out.append(CheckResult(mod, name, ok, detail, time.perf_counter() - t0))
    return out
