"""Labelled trees: uniform sampling via Pruefer codes, and exact counts of
rooted subtrees of small permutahedra."""

from __future__ import annotations

import heapq
import math
from collections import deque
from fractions import Fraction
from typing import Iterator

import numpy as np

from .oracle import mix_index
from .perm import neighbor_table

MAX_COUNT_N = 3
MAX_COUNT_M = 6


def prufer_to_edges(seq: list[int], m: int) -> list[tuple[int, int]]:
    """Decode a Pruefer sequence over ``1..m`` (length m-2) into tree edges."""
    if len(seq) != m - 2:
        raise ValueError("Pruefer sequence must have length m - 2")
    degree = [1] * (m + 1)
    for a in seq:
        degree[a] += 1
    leaves = [v for v in range(1, m + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for a in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, a))
        degree[a] -= 1
        if degree[a] == 1:
            heapq.heappush(leaves, a)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def sample_uniform_tree(m: int, seed: int) -> list[tuple[int, int]]:
    """A uniformly random labelled tree on ``1..m`` as an edge list."""
    if m < 2:
        raise ValueError("m must be >= 2")
    rng = np.random.default_rng(mix_index(seed, 0x7072))
    seq = rng.integers(1, m + 1, size=m - 2).tolist()
    return prufer_to_edges(seq, m)


def _adjacency(edges, m):
    adj = [[] for _ in range(m + 1)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def max_degree(edges, m: int) -> int:
    deg = [0] * (m + 1)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return max(deg)


def _bfs_far(adj, src):
    dist = {src: 0}
    q = deque([src])
    last = src
    while q:
        x = q.popleft()
        last = x
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return last, dist[last]


def diameter(edges, m: int) -> int:
    adj = _adjacency(edges, m)
    far, _ = _bfs_far(adj, 1)
    _, d = _bfs_far(adj, far)
    return d


def depth(edges, m: int, root: int) -> int:
    return _bfs_far(_adjacency(edges, m), root)[1]


# --- exact rooted-subtree counts ----------------------------------------

def connected_subsets(adj: list[list[int]], k: int) -> Iterator[frozenset[int]]:
    """Every connected vertex set of size ``k``, each exactly once (ESU)."""
    nbrs = [set(a) for a in adj]

    def extend(sub, closed, ext, v):
        if len(sub) == k:
            yield frozenset(sub)
            return
        ext = set(ext)
        while ext:
            w = min(ext)
            ext.discard(w)
            excl = {u for u in nbrs[w] if u > v and u not in closed}
            yield from extend(sub | {w}, closed | nbrs[w], ext | excl, v)

    for v in range(len(adj)):
        yield from extend({v}, nbrs[v] | {v}, {u for u in nbrs[v] if u > v}, v)


def _bareiss_det(mat: list[list[int]]) -> int:
    a = [row[:] for row in mat]
    size = len(a)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def spanning_tree_count(vertices: frozenset[int], adj: list[list[int]]) -> int:
    """Kirchhoff: a cofactor of the Laplacian of the induced subgraph."""
    vs = sorted(vertices)
    index = {v: i for i, v in enumerate(vs)}
    L = [[0] * len(vs) for _ in vs]
    for v in vs:
        for u in adj[v]:
            if u in index:
                L[index[v]][index[v]] += 1
                L[index[v]][index[u]] -= 1
    return _bareiss_det([row[1:] for row in L[1:]])


def host_adjacency(n: int) -> list[list[int]]:
    return [list(map(int, row)) for row in neighbor_table(n)]


def count_rooted_trees(n: int, m: int) -> int:
    """Number of rooted m-vertex trees in Perm(n) (tree subgraph x choice of root)."""
    if not (1 <= n <= MAX_COUNT_N and 1 <= m <= MAX_COUNT_M):
        raise ValueError(f"count_rooted_trees limited to n <= {MAX_COUNT_N}, m <= {MAX_COUNT_M}")
    adj = host_adjacency(n)
    total = sum(spanning_tree_count(s, adj) for s in connected_subsets(adj, m))
    return m * total


def tree_count_bounds(num_vertices: int, min_deg: int, max_deg: int, m: int) -> tuple[Fraction, Fraction]:
    """Lower and upper bounds on the rooted m-vertex tree count of a graph.

    lower = N m^(m-2) (delta - m)^(m-1) / (m-1)!,  upper = N (e Delta)^(m-1).
    The lower bound is only meaningful when delta > m.
    """
    lower = Fraction(num_vertices) * Fraction(m) ** (m - 2) * Fraction(min_deg - m) ** (m - 1) / math.factorial(m - 1)
    upper = Fraction(num_vertices * (math.e * max_deg) ** (m - 1))
    return lower, upper
