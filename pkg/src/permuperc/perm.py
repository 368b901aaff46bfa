"""Permutations of S_{n+1} as vertices of the permutahedron.

A vertex is a tuple ``w`` of the values 1..n+1 where ``w[j-1]`` is the image
of position ``j``.  The generator ``tau_i`` acts on the left, i.e. it swaps
the *values* ``i`` and ``i+1`` wherever they sit in the word.
"""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Iterator, Sequence

import numpy as np

Perm = tuple[int, ...]


def check_permutation(word: Sequence[int]) -> Perm:
    """Validate ``word`` and return it as a tuple."""
    w = tuple(int(x) for x in word)
    if len(w) < 2:
        raise ValueError("a vertex needs n >= 1, i.e. at least two letters")
    if sorted(w) != list(range(1, len(w) + 1)):
        raise ValueError(f"{list(w)} is not a permutation of 1..{len(w)}")
    return w


def dimension(pi: Perm) -> int:
    return len(pi) - 1


def identity(n: int) -> Perm:
    return tuple(range(1, n + 2))


def reversal(n: int) -> Perm:
    return tuple(range(n + 1, 0, -1))


def inverse(pi: Perm) -> Perm:
    inv = [0] * len(pi)
    for pos, val in enumerate(pi, start=1):
        inv[val - 1] = pos
    return tuple(inv)


def apply_generator(pi: Perm, i: int) -> Perm:
    """Return ``tau_i pi``: swap the positions holding values ``i`` and ``i+1``."""
    n = len(pi) - 1
    if not 1 <= i <= n:
        raise ValueError(f"generator index {i} outside 1..{n}")
    w = list(pi)
    a = w.index(i)
    b = w.index(i + 1)
    w[a], w[b] = w[b], w[a]
    return tuple(w)


def neighbors(pi: Perm) -> list[tuple[int, Perm]]:
    return [(i, apply_generator(pi, i)) for i in range(1, len(pi))]


def rank(pi: Perm) -> int:
    """Lexicographic rank of ``pi`` among the words of S_{n+1}."""
    m = len(pi)
    r = 0
    for j in range(m):
        smaller = 0
        vj = pi[j]
        for k in range(j + 1, m):
            if pi[k] < vj:
                smaller += 1
        r += smaller * factorial(m - 1 - j)
    return r


def unrank(n: int, r: int) -> Perm:
    m = n + 1
    if not 0 <= r < factorial(m):
        raise ValueError(f"rank {r} outside [0, {factorial(m)})")
    pool = list(range(1, m + 1))
    out = []
    for j in range(m - 1, -1, -1):
        f = factorial(j)
        d, r = divmod(r, f)
        out.append(pool.pop(d))
    return tuple(out)


def all_permutations(n: int) -> Iterator[Perm]:
    """All vertices of Perm(n), in rank order."""
    return permutations(range(1, n + 2))


def pair_index(a: int, b: int, m: int) -> int:
    """Bit index of the pair {a, b}, a < b, in lexicographic pair order on 1..m."""
    # pairs (1,2),(1,3),...,(1,m),(2,3),...
    return (a - 1) * (2 * m - a) // 2 + (b - a - 1)


def inversion_set(pi: Perm) -> int:
    """Bit vector (as an int) of the position pairs {a,b} that ``pi`` reverses.

    Bit ``pair_index(a, b)`` is set iff ``(b - a) * (pi(b) - pi(a)) < 0``.
    """
    m = len(pi)
    bits = 0
    idx = 0
    for a in range(m):
        va = pi[a]
        for b in range(a + 1, m):
            if pi[b] < va:
                bits |= 1 << idx
            idx += 1
    return bits


def inversion_count(pi: Perm) -> int:
    return inversion_set(pi).bit_count()


def inversion_pairs(bits: int, m: int) -> set[frozenset[int]]:
    out = set()
    idx = 0
    for a in range(1, m + 1):
        for b in range(a + 1, m + 1):
            if bits >> idx & 1:
                out.add(frozenset((a, b)))
            idx += 1
    return out


def inversion_hex(pi: Perm) -> str:
    """Hex encoding of the inversion bit vector, least significant bit first pair."""
    m = len(pi)
    nbits = m * (m - 1) // 2
    return format(inversion_set(pi), "0%dx" % max(1, (nbits + 3) // 4))


def kendall_distance(pi: Perm, sigma: Perm) -> int:
    if len(pi) != len(sigma):
        raise ValueError("permutations of different sizes")
    return (inversion_set(pi) ^ inversion_set(sigma)).bit_count()


def graph_diameter(n: int) -> int:
    """Diameter of Perm(n): C(n+1, 2), the inversion count of the reversal."""
    return n * (n + 1) // 2


def edge_id(pi: Perm, i: int) -> int:
    """Canonical id of the edge {pi, tau_i pi}: rank(lower endpoint) * n + (i - 1)."""
    n = len(pi) - 1
    if not 1 <= i <= n:
        raise ValueError(f"generator index {i} outside 1..{n}")
    # the endpoint with i before i+1 is lexicographically smaller
    lower = pi if pi.index(i) < pi.index(i + 1) else apply_generator(pi, i)
    return rank(lower) * n + (i - 1)


def edge_endpoints(n: int, e: int) -> tuple[Perm, Perm, int]:
    r, g = divmod(e, n)
    u = unrank(n, r)
    return u, apply_generator(u, g + 1), g + 1


def to_json(pi: Perm) -> str:
    return json.dumps(list(pi))


def from_json(text: str) -> Perm:
    return check_permutation(json.loads(text))


# --- vectorised host structure -------------------------------------------

def rank_words(words: np.ndarray) -> np.ndarray:
    """Lexicographic ranks of the rows of ``words`` (shape (N, n+1))."""
    N, m = words.shape
    ranks = np.zeros(N, dtype=np.int64)
    for j in range(m - 1):
        col = words[:, j : j + 1]
        smaller = (words[:, j + 1 :] < col).sum(axis=1)
        ranks += smaller * factorial(m - 1 - j)
    return ranks


@lru_cache(maxsize=4)
def word_table(n: int) -> np.ndarray:
    """Every vertex of Perm(n) as a row, row index = rank."""
    m = n + 1
    words = np.fromiter(
        (v for p in permutations(range(1, m + 1)) for v in p),
        dtype=np.int8,
        count=factorial(m) * m,
    )
    return words.reshape(factorial(m), m)


@lru_cache(maxsize=4)
def canonical_edges(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All edges of Perm(n) once each, as (lower rank, upper rank, generator).

    Sorted by edge id, so ``lower * n + generator - 1`` is strictly increasing.
    """
    words = word_table(n)
    N, m = words.shape
    pos = np.argsort(words, axis=1).astype(np.int8)  # pos[:, v-1] = 0-based position of v
    lowers, uppers, gens = [], [], []
    for i in range(1, n + 1):
        pa = pos[:, i - 1]
        pb = pos[:, i]
        rows = np.flatnonzero(pa < pb)
        swapped = words[rows].copy()
        idx = np.arange(rows.size)
        swapped[idx, pa[rows]] = i + 1
        swapped[idx, pb[rows]] = i
        lowers.append(rows.astype(np.int64))
        uppers.append(rank_words(swapped))
        gens.append(np.full(rows.size, i, dtype=np.int64))
    lo = np.concatenate(lowers)
    hi = np.concatenate(uppers)
    g = np.concatenate(gens)
    order = np.argsort(lo * n + g - 1, kind="stable")
    return (
        lo[order].astype(np.int32),
        hi[order].astype(np.int32),
        g[order].astype(np.int8),
    )


def edge_ids(n: int) -> np.ndarray:
    lo, _, g = canonical_edges(n)
    return lo.astype(np.uint64) * np.uint64(n) + (g.astype(np.uint64) - np.uint64(1))


@lru_cache(maxsize=4)
def neighbor_table(n: int) -> np.ndarray:
    """``table[r, i-1]`` = rank of ``tau_i`` applied to vertex ``r``."""
    lo, hi, g = canonical_edges(n)
    table = np.empty((factorial(n + 1), n), dtype=np.int32)
    gi = g.astype(np.int64) - 1
    table[lo, gi] = hi
    table[hi, gi] = lo
    return table
