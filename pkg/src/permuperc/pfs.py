"""Projection-first search over a percolated face graph.

The search grows a tree from ``v`` in rounds.  Each frontier vertex ``x``
owns a face ``H(x)`` that meets the explored set only in ``x``; its open
edges inside ``H(x)`` are exposed, and ``{x} + N(x)`` is projected inside
``H(x)`` so every new vertex gets its own disjoint subface.  No edge is ever
queried twice and the search never backtracks.

``two_phase`` mode runs plain rounds first and then caps every vertex at
``K`` discovered children, exposing its edges one at a time in ascending
generator order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

from .faces import FaceChain, contains, faces_intersect, project
from .oracle import EdgeOracle
from .perm import Perm, apply_generator, rank

MAX_PFS_N = 19


def default_f(m: int) -> float:
    return math.sqrt(math.log(math.log(m))) if m > math.e else 1.0


def truncation_level(m: int, p: float, beta: float) -> int:
    """K = ceil(max{2e m p, log2(beta^-2)})."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    return max(1, math.ceil(max(2 * math.e * m * p, math.log2(beta ** -2))))


def default_tau1(m: int) -> int:
    if m < 3:
        return 1
    return max(1, round(math.log(math.log(m))))


@dataclass
class PfsConfig:
    p: float
    mode: str = "plain"
    max_rounds: int | None = None
    K: int | None = None
    tau1: int | None = None
    r: int | None = None
    beta: float | None = None
    check: bool = False
    f: Callable[[int], float] = default_f

    def __post_init__(self):
        if self.mode not in ("plain", "two_phase"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.K is not None and self.K < 1:
            raise ValueError("K must be >= 1")
        if self.tau1 is not None and self.tau1 < 0:
            raise ValueError("tau1 must be >= 0")

    def resolved(self, m: int) -> tuple[int | None, int]:
        """(K, tau1) for a host of dimension m; K is None in plain mode."""
        if self.mode == "plain":
            return None, 0
        K = self.K
        if K is None:
            beta = self.beta if self.beta is not None else m * self.p - 1
            K = truncation_level(m, self.p, beta)
        tau1 = self.tau1 if self.tau1 is not None else default_tau1(m)
        return K, tau1


@dataclass
class PfsState:
    host: FaceChain
    root: Perm
    p: float
    rounds: int = 0
    explored: dict[Perm, int] = field(default_factory=dict)  # vertex -> frontier index
    frontier: list[Perm] = field(default_factory=list)
    parent: dict[Perm, tuple[Perm, int]] = field(default_factory=dict)
    faces: dict[Perm, FaceChain] = field(default_factory=dict)
    weight: dict[Perm, int] = field(default_factory=dict)
    children: dict[Perm, int] = field(default_factory=dict)
    queried: list[int] = field(default_factory=list)
    exposures: list[tuple[int, int, bool]] = field(default_factory=list)  # (dim H(x), |N|, truncated phase)
    explored_sizes: list[int] = field(default_factory=list)
    frontier_sizes: list[int] = field(default_factory=list)
    min_face_dims: list[int] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.explored)

    @property
    def m(self) -> int:
        return self.host.dim

    def depth(self, x: Perm) -> int:
        return self.explored[x] - 1

    def summary(self) -> dict:
        return {
            "rounds": self.rounds,
            "explored_per_round": self.explored_sizes,
            "frontier_sizes": self.frontier_sizes,
            "max_weight": max(self.weight.values()) if self.weight else 0,
            "min_face_dim_per_round": self.min_face_dims,
            "edges_queried": len(self.queried),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary())


def _record(state: PfsState) -> None:
    state.explored_sizes.append(len(state.explored))
    state.frontier_sizes.append(len(state.frontier))
    state.min_face_dims.append(
        min(state.faces[x].dim for x in state.frontier) if state.frontier else -1
    )


def _expose(state: PfsState, oracle: EdgeOracle, x: Perm, cap: int | None) -> list[tuple[int, Perm]]:
    face = state.faces[x]
    n = len(x) - 1
    found = []
    for v in face.admissible:
        y = apply_generator(x, v)
        lower = x if x.index(v) < x.index(v + 1) else y
        e = rank(lower) * n + (v - 1)
        state.queried.append(e)
        if oracle.uniform(e) < state.p:
            found.append((v, y))
            if cap is not None and len(found) >= cap:
                break
    return found


def _run(host: FaceChain, v: Perm, oracle: EdgeOracle, cfg: PfsConfig) -> PfsState:
    if host.n > MAX_PFS_N:
        raise ValueError(f"hosts beyond Perm({MAX_PFS_N}) are not supported")
    if not contains(host, v):
        raise ValueError(f"{list(v)} is not in {host!r}")
    K, tau1 = cfg.resolved(host.dim)
    state = PfsState(host=host, root=v, p=cfg.p)
    state.explored[v] = 1
    state.frontier = [v]
    state.faces[v] = host
    state.weight[v] = 0
    _record(state)
    if cfg.check:
        check_invariants(state, oracle)
    limit = math.inf if cfg.max_rounds is None else cfg.max_rounds
    target = math.inf if cfg.r is None else cfg.r
    while state.frontier and state.rounds < limit and state.size < target:
        truncating = K is not None and state.rounds >= tau1
        cap = K if truncating else None
        t_next = state.rounds + 2
        new_frontier = []
        for x in state.frontier:
            found = _expose(state, oracle, x, cap)
            state.children[x] = len(found)
            state.exposures.append((state.faces[x].dim, len(found), truncating))
            if not found:
                continue
            proj = project(state.faces[x], [x] + [y for _, y in found])
            wy = state.weight[x] + len(found)
            for g, y in found:
                if cfg.check and y in state.explored:
                    raise AssertionError(f"{y} discovered twice")
                state.explored[y] = t_next
                state.parent[y] = (x, g)
                state.faces[y] = proj[y]
                state.weight[y] = wy
                new_frontier.append(y)
        state.frontier = new_frontier
        state.rounds += 1
        _record(state)
        if cfg.check:
            check_invariants(state, oracle)
    return state


def pfs_explore(host: FaceChain, v: Perm, oracle: EdgeOracle, cfg: PfsConfig) -> PfsState:
    if cfg.mode != "plain":
        raise ValueError("pfs_explore needs mode='plain'")
    return _run(host, v, oracle, cfg)


def pfs_prime_explore(host: FaceChain, v: Perm, oracle: EdgeOracle, cfg: PfsConfig) -> PfsState:
    if cfg.mode != "two_phase":
        raise ValueError("pfs_prime_explore needs mode='two_phase'")
    return _run(host, v, oracle, cfg)


def cluster_reaches(host: FaceChain, v: Perm, oracle: EdgeOracle, p: float, r: int) -> bool:
    """One-sided test: True means the percolation cluster of ``v`` has >= r vertices."""
    if r <= 1:
        return True
    state = _run(host, v, oracle, PfsConfig(p=p, r=r))
    return state.size >= r


def check_invariants(state: PfsState, oracle: EdgeOracle | None = None) -> None:
    """Assert the structural facts of the search at the current round.

    * the parent map is a tree on the explored set, built by open edges;
    * the explored set is the disjoint union of the frontiers A(1..t);
    * frontier faces are pairwise disjoint and meet the explored set only in
      their own vertex;
    * dim H(x) >= m - w(x) for every frontier vertex.
    """
    t = state.rounds + 1
    W = state.explored
    if len(state.parent) != len(W) - 1 or state.root in state.parent:
        raise AssertionError("parent map is not a spanning tree of W")
    for y, (x, g) in state.parent.items():
        if x not in W or W[x] != W[y] - 1:
            raise AssertionError(f"tree edge {x}->{y} does not go back one round")
        if apply_generator(x, g) != y:
            raise AssertionError("tree edge is not a host edge")
        if oracle is not None:
            n = len(x) - 1
            lower = x if x.index(g) < x.index(g + 1) else y
            if not oracle.uniform(rank(lower) * n + g - 1) < state.p:
                raise AssertionError("tree edge is closed")
    if any(i < 1 or i > t for i in W.values()):
        raise AssertionError("round index out of range")
    current = [x for x, i in W.items() if i == t]
    if sorted(current) != sorted(state.frontier) or len(set(state.frontier)) != len(state.frontier):
        raise AssertionError("frontier differs from the newest layer of W")
    if len(state.queried) != len(set(state.queried)):
        raise AssertionError("an edge was queried twice")
    front = state.frontier
    for x in front:
        fx = state.faces[x]
        if not contains(fx, x):
            raise AssertionError("frontier vertex outside its face")
        if fx.dim < state.m - state.weight[x]:
            raise AssertionError("dimension ledger violated")
    for a in range(len(front)):
        for b in range(a + 1, len(front)):
            if faces_intersect(state.faces[front[a]], state.faces[front[b]]):
                raise AssertionError("frontier faces intersect")
    for x in front:
        fx = state.faces[x]
        for w in W:
            if w != x and contains(fx, w):
                raise AssertionError("face meets the explored set")
