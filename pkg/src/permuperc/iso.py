"""Edge-isoperimetry and the spectral gap of small permutahedra."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from math import factorial

import numpy as np

from .faces import FaceChain, members
from .perm import apply_generator, neighbor_table, rank, word_table

MAX_DP_VERTICES = 24  # bitmask scan over all 2^N subsets
MAX_COMBINATION_K = 3  # for Perm(4)
MAX_SPECTRAL_N = 4


def edge_boundary(n: int, S) -> int:
    """Number of Perm(n) edges with exactly one endpoint in the rank set S."""
    S = np.fromiter(S, dtype=np.int64)
    if S.size == 0:
        return 0
    table = neighbor_table(n)
    inside = np.zeros(table.shape[0], dtype=bool)
    inside[S] = True
    return int(np.count_nonzero(~inside[table[inside]]))


def face_boundary(face: FaceChain) -> tuple[int, int]:
    """(|F|, |boundary of F|) for a face, counted edge by edge."""
    verts = set(members(face))
    n = face.n
    boundary = 0
    for x in verts:
        for i in range(1, n + 1):
            if apply_generator(x, i) not in verts:
                boundary += 1
    return len(verts), boundary


def face_ranks(face: FaceChain) -> frozenset[int]:
    return frozenset(rank(x) for x in members(face))


def halfspace_witness(n: int) -> frozenset[int]:
    """Ranks of {sigma : sigma(1) <= (n+1)/2}, defined for odd n."""
    if n % 2 == 0:
        raise ValueError("the halfspace witness needs n odd")
    words = word_table(n)
    return frozenset(np.flatnonzero(words[:, 0] <= (n + 1) // 2).tolist())


def hypercube_face(n: int, r: int) -> FaceChain:
    """Face with r two-element blocks {1,2},...,{2r-1,2r}: an r-cube.

    The remaining positions are singleton blocks, so the face has exactly
    2^r members.
    """
    if not 1 <= r <= (n + 1) // 2:
        raise ValueError(f"r={r} outside 1..{(n + 1) // 2}")
    blocks = [frozenset((2 * j - 1, 2 * j)) for j in range(1, r + 1)]
    blocks.extend(frozenset((j,)) for j in range(2 * r + 1, n + 2))
    return FaceChain(tuple(blocks))


def harper_bound(n: int, k: int) -> float:
    return n - math.log2(k)


def _adjacency_masks(n: int) -> list[int]:
    table = neighbor_table(n)
    return [sum(1 << int(u) for u in row) for row in table]


def _internal_edge_table(n: int) -> np.ndarray:
    """Internal edge count of every vertex subset, indexed by bitmask."""
    N = factorial(n + 1)
    masks = _adjacency_masks(n)
    e = np.zeros(1 << N, dtype=np.uint8)
    for j in range(N):
        lower = np.arange(1 << j, dtype=np.uint32)
        nb = np.uint32(masks[j] & ((1 << j) - 1))
        e[1 << j : 1 << (j + 1)] = e[: 1 << j] + np.bitwise_count(lower & nb)
    return e


_DP_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _dp_tables(n: int):
    if n not in _DP_CACHE:
        e = _internal_edge_table(n)
        pc = np.bitwise_count(np.arange(e.size, dtype=np.uint32)).astype(np.uint8)
        _DP_CACHE.clear()
        _DP_CACHE[n] = (e, pc)
    return _DP_CACHE[n]


def i_k_bruteforce(n: int, k: int) -> tuple[Fraction, frozenset[int]]:
    """Exact min of |boundary(S)|/|S| over all k-subsets, and one minimiser.

    ``|boundary(S)| = n k - 2 e(S)``, so this maximises the internal edge
    count ``e(S)``.
    """
    N = factorial(n + 1)
    if not 1 <= k <= N:
        raise ValueError(f"k={k} outside 1..{N}")
    if N <= MAX_DP_VERTICES:
        e, pc = _dp_tables(n)
        idx = np.flatnonzero(pc == k)
        best = int(idx[np.argmax(e[idx])])
        inner = int(e[best])
        members_ = frozenset(i for i in range(N) if best >> i & 1)
    elif n == 4 and k <= MAX_COMBINATION_K:
        nbrs = [set(map(int, row)) for row in neighbor_table(n)]
        inner, members_ = -1, frozenset()
        for combo in combinations(range(N), k):
            cnt = sum(1 for a, b in combinations(combo, 2) if b in nbrs[a])
            if cnt > inner:
                inner, members_ = cnt, frozenset(combo)
    else:
        raise ValueError(f"brute force i_k out of cost bounds for n={n}, k={k}")
    return Fraction(n * k - 2 * inner, k), members_


def isoperimetric_constant(n: int) -> Fraction:
    """i(Perm(n)) = min over 1 <= k <= |V|/2 of i_k, by brute force."""
    N = factorial(n + 1)
    return min(i_k_bruteforce(n, k)[0] for k in range(1, N // 2 + 1))


def laplacian(n: int) -> np.ndarray:
    table = neighbor_table(n)
    N = table.shape[0]
    L = n * np.eye(N)
    for i in range(n):
        L[np.arange(N), table[:, i]] -= 1.0
    return L


def laplacian_lambda1(n: int) -> float:
    """Second-smallest eigenvalue of nI - A."""
    if not 1 <= n <= MAX_SPECTRAL_N:
        raise ValueError(f"dense eigensolve limited to n <= {MAX_SPECTRAL_N}")
    vals = np.linalg.eigvalsh(laplacian(n))
    return float(vals[1])


def conjecture_face_boundary(n: int) -> tuple[int, int, Fraction]:
    """The product-of-hexagons face: (k, boundary, boundary/k)."""
    if n % 3 != 2:
        raise ValueError("needs n = 2 mod 3")
    t = (n + 1) // 3
    face = FaceChain(tuple(frozenset(range(3 * j + 1, 3 * j + 4)) for j in range(t)))
    k, boundary = face_boundary(face)
    return k, boundary, Fraction(boundary, k)


def rank_list_hex(ranks) -> str:
    return ",".join(format(r, "x") for r in sorted(ranks))
