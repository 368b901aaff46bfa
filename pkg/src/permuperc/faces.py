"""Faces of the permutahedron as ordered partitions of positions.

A face is an ordered sequence of disjoint position blocks ``B_1, ..., B_{k+1}``
covering ``{1..n+1}``.  Block ``B_j`` receives the values
``c_{j-1}+1 .. c_j`` with ``c_j = |B_1| + ... + |B_j|``.  This is the coset of
the parabolic subgroup generated by the ``tau_v`` with ``v`` not a cut
``c_j``; its graph is the product of permutahedra of dimensions ``|B_j| - 1``.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Iterator

from .perm import Perm, apply_generator


@dataclass(frozen=True)
class FaceChain:
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if seen & b:
                raise ValueError("blocks overlap")
            seen |= b
        if seen != set(range(1, len(seen) + 1)) or len(seen) < 2:
            raise ValueError(f"blocks do not partition 1..m: {self.to_list()}")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "FaceChain":
        return cls(tuple(frozenset(int(p) for p in b) for b in blocks))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks) - 1

    @cached_property
    def cuts(self) -> tuple[int, ...]:
        """Cumulative block sizes ``c_1 < ... < c_k`` (the last, n+1, excluded)."""
        out, c = [], 0
        for b in self.blocks[:-1]:
            c += len(b)
            out.append(c)
        return tuple(out)

    @cached_property
    def value_ranges(self) -> tuple[tuple[int, int], ...]:
        out, c = [], 0
        for b in self.blocks:
            out.append((c + 1, c + len(b)))
            c += len(b)
        return tuple(out)

    @property
    def dim(self) -> int:
        return sum(len(b) - 1 for b in self.blocks)

    @property
    def factor_dims(self) -> tuple[int, ...]:
        return tuple(len(b) - 1 for b in self.blocks if len(b) >= 2)

    @cached_property
    def admissible(self) -> tuple[int, ...]:
        """Generators ``tau_v`` that keep a vertex inside the face."""
        cuts = set(self.cuts)
        return tuple(v for v in range(1, self.n + 1) if v not in cuts)

    @cached_property
    def chain(self) -> tuple[frozenset[int], ...]:
        """The nested position sets ``I_1 < ... < I_k``."""
        out, acc = [], frozenset()
        for b in self.blocks[:-1]:
            acc = acc | b
            out.append(acc)
        return tuple(out)

    def size(self) -> int:
        out = 1
        for b in self.blocks:
            for k in range(2, len(b) + 1):
                out *= k
        return out

    def to_list(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_json(cls, text: str) -> "FaceChain":
        return cls.from_blocks(json.loads(text))

    def __repr__(self) -> str:
        return f"FaceChain({self.to_list()})"


def full_face(n: int) -> FaceChain:
    if n < 1:
        raise ValueError("n must be >= 1")
    return FaceChain((frozenset(range(1, n + 2)),))


def _check_size(face: FaceChain, pi: Perm) -> None:
    if len(pi) != face.n + 1:
        raise ValueError(f"vertex of S_{len(pi)} against a face of Perm({face.n})")


def contains(face: FaceChain, pi: Perm) -> bool:
    _check_size(face, pi)
    for block, (lo, hi) in zip(face.blocks, face.value_ranges):
        for p in block:
            if not lo <= pi[p - 1] <= hi:
                return False
    return True


def face_neighbors(face: FaceChain, pi: Perm) -> list[tuple[int, Perm]]:
    if not contains(face, pi):
        raise ValueError(f"{list(pi)} is not in {face!r}")
    return [(v, apply_generator(pi, v)) for v in face.admissible]


def split_level(face: FaceChain, v: int) -> bool:
    """Whether cutting at value level ``v`` refines the chain."""
    return 1 <= v <= face.n and v not in face.cuts


def _block_of_level(face: FaceChain, v: int) -> int:
    for j, (lo, hi) in enumerate(face.value_ranges):
        if lo <= v < hi:
            return j
    raise ValueError(f"level {v} is not available in {face!r}")


def _split_key(face: FaceChain, j: int, pi: Perm, v: int) -> frozenset[int]:
    return frozenset(p for p in face.blocks[j] if pi[p - 1] <= v)


def refine(face: FaceChain, pi: Perm, v: int) -> FaceChain:
    """The child face of ``face`` containing ``pi`` after cutting at level ``v``."""
    if not split_level(face, v):
        raise ValueError(f"level {v} is not available in {face!r}")
    if not contains(face, pi):
        raise ValueError(f"{list(pi)} is not in {face!r}")
    j = _block_of_level(face, v)
    low = _split_key(face, j, pi, v)
    high = face.blocks[j] - low
    return FaceChain(face.blocks[:j] + (low, high) + face.blocks[j + 1 :])


def project(face: FaceChain, xs: Iterable[Perm]) -> dict[Perm, FaceChain]:
    """Disjoint subfaces of ``face``, one per vertex of ``xs``.

    Each returned face contains its vertex and has dimension at least
    ``face.dim - (len(xs) - 1)``.  Splits use the smallest level that
    separates the current group; groups recurse in order of their lower
    position block.
    """
    xs = list(xs)
    if not xs:
        raise ValueError("need at least one vertex")
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate vertices")
    for x in xs:
        if not contains(face, x):
            raise ValueError(f"{list(x)} is not in {face!r}")
    out: dict[Perm, FaceChain] = {}
    _project(face, xs, out)
    return out


def _project(face: FaceChain, xs: list[Perm], out: dict[Perm, FaceChain]) -> None:
    if len(xs) == 1:
        out[xs[0]] = face
        return
    for v in face.admissible:
        j = _block_of_level(face, v)
        groups: dict[frozenset[int], list[Perm]] = {}
        for x in xs:
            groups.setdefault(_split_key(face, j, x, v), []).append(x)
        if len(groups) > 1:
            for key in sorted(groups, key=sorted):
                members = groups[key]
                child = FaceChain(
                    face.blocks[:j] + (key, face.blocks[j] - key) + face.blocks[j + 1 :]
                )
                _project(child, members, out)
            return
    # distinct vertices always differ at some level
    raise AssertionError("no separating level for distinct vertices")


def members(face: FaceChain) -> Iterator[Perm]:
    """Enumerate every vertex of the face."""
    m = face.n + 1
    per_block = []
    for block, (lo, hi) in zip(face.blocks, face.value_ranges):
        pos = sorted(block)
        per_block.append([(pos, vals) for vals in permutations(range(lo, hi + 1))])
    for choice in product(*per_block):
        w = [0] * m
        for pos, vals in choice:
            for p, val in zip(pos, vals):
                w[p - 1] = val
        yield tuple(w)


def faces_intersect(f: FaceChain, g: FaceChain) -> bool:
    """Whether two faces of the same Perm(n) share a vertex.

    Each position gets the intersection of its two allowed value intervals;
    the faces meet iff positions can be matched to distinct values inside
    their intervals (greedy earliest-deadline matching).
    """
    if f.n != g.n:
        raise ValueError("faces of different permutahedra")
    m = f.n + 1
    lo = [0] * (m + 1)
    hi = [0] * (m + 1)
    for face, first in ((f, True), (g, False)):
        for block, (a, b) in zip(face.blocks, face.value_ranges):
            for p in block:
                if first:
                    lo[p], hi[p] = a, b
                else:
                    lo[p], hi[p] = max(lo[p], a), min(hi[p], b)
    starts: dict[int, list[int]] = {}
    for p in range(1, m + 1):
        if lo[p] > hi[p]:
            return False
        starts.setdefault(lo[p], []).append(hi[p])
    heap: list[int] = []
    for v in range(1, m + 1):
        for end in starts.get(v, ()):
            heapq.heappush(heap, end)
        if not heap:
            return False
        if heapq.heappop(heap) < v:
            return False
    return True
