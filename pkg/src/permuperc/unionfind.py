"""Array-backed union-find (path halving, union by size) on vertex ranks."""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@numba.njit(cache=True)
def _union_masked(parent, size, lo, hi, mask):
    merges = 0
    for k in range(lo.shape[0]):
        if not mask[k]:
            continue
        a = _find(parent, lo[k])
        b = _find(parent, hi[k])
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        merges += 1
    return merges


@numba.njit(cache=True)
def _roots(parent):
    out = np.empty(parent.shape[0], dtype=np.int32)
    for i in range(parent.shape[0]):
        out[i] = _find(parent, i)
    return out


@numba.njit(cache=True)
def _hitting(num_vertices, lo, hi, order):
    """Insert edges in ``order``; return 1-based indices at which min degree
    first reaches 1 and at which the graph first becomes connected."""
    parent = np.arange(num_vertices, dtype=np.int32)
    size = np.ones(num_vertices, dtype=np.int32)
    degree = np.zeros(num_vertices, dtype=np.int32)
    isolated = num_vertices
    components = num_vertices
    t_deg = -1
    t_conn = -1
    if num_vertices == 1:
        return 0, 0
    for k in range(order.shape[0]):
        e = order[k]
        u = lo[e]
        v = hi[e]
        if degree[u] == 0:
            isolated -= 1
        if degree[v] == 0:
            isolated -= 1
        degree[u] += 1
        degree[v] += 1
        a = _find(parent, u)
        b = _find(parent, v)
        if a != b:
            if size[a] < size[b]:
                a, b = b, a
            parent[b] = a
            size[a] += size[b]
            components -= 1
        if t_deg < 0 and isolated == 0:
            t_deg = k + 1
        if components == 1:
            t_conn = k + 1
            break
    return t_deg, t_conn


class DisjointSet:
    """Union-find over ``0..N-1`` with int32 storage."""

    def __init__(self, num: int):
        self.parent = np.arange(num, dtype=np.int32)
        self.size = np.ones(num, dtype=np.int32)

    def find(self, i: int) -> int:
        return int(_find(self.parent, i))

    def union(self, a: int, b: int) -> bool:
        lo = np.array([a], dtype=np.int32)
        hi = np.array([b], dtype=np.int32)
        return bool(_union_masked(self.parent, self.size, lo, hi, np.ones(1, np.bool_)))

    def union_edges(self, lo: np.ndarray, hi: np.ndarray, mask: np.ndarray) -> int:
        """Union every edge ``(lo[k], hi[k])`` with ``mask[k]``; return merge count."""
        return int(_union_masked(self.parent, self.size, lo, hi, mask))

    def roots(self) -> np.ndarray:
        return _roots(self.parent)

    def component_sizes(self) -> np.ndarray:
        """Component sizes, descending."""
        counts = np.bincount(self.roots())
        sizes = counts[counts > 0]
        return np.sort(sizes)[::-1]


def hitting_indices(num_vertices: int, lo: np.ndarray, hi: np.ndarray, order: np.ndarray):
    t_deg, t_conn = _hitting(num_vertices, lo, hi, order.astype(np.int64))
    return int(t_deg), int(t_conn)
