"""Seeded per-edge uniforms.

Every edge id gets one uniform from a splitmix64-style finaliser of
``seed XOR (id * C)``; an edge is open at ``p`` iff its uniform is below
``p``.  Using the same uniforms for every ``p`` gives the monotone coupling
of the percolated subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
SPREAD = 0xD1B54A32D192ED03
INV_2_53 = 1.0 / (1 << 53)


def finalize(x: int) -> int:
    """64-bit finaliser (splitmix64 output function, with the golden increment)."""
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def mix_index(seed: int, i: int) -> int:
    """Derive a child seed; used to split one base seed across trials."""
    return finalize((seed & MASK64) ^ ((i * SPREAD) & MASK64))


def to_unit(z: int) -> float:
    # top 53 bits, so the result is exactly representable and < 1
    return (z >> 11) * INV_2_53


def finalize_array(x: np.ndarray) -> np.ndarray:
    z = x.astype(np.uint64, copy=True)
    z += np.uint64(GOLDEN)
    z ^= z >> np.uint64(30)
    z *= np.uint64(MIX1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(MIX2)
    z ^= z >> np.uint64(31)
    return z


@dataclass(frozen=True)
class EdgeOracle:
    seed: int
    n: int

    def uniform(self, e: int) -> float:
        return to_unit(mix_index(self.seed, e))

    def is_open(self, e: int, p: float) -> bool:
        return self.uniform(e) < p

    def uniforms(self, ids: np.ndarray) -> np.ndarray:
        x = np.asarray(ids, dtype=np.uint64) * np.uint64(SPREAD)
        x ^= np.uint64(self.seed & MASK64)
        z = finalize_array(x)
        return (z >> np.uint64(11)).astype(np.float64) * INV_2_53


def edge_uniform(oracle: EdgeOracle, e: int) -> float:
    return oracle.uniform(e)


def edge_open(oracle: EdgeOracle, e: int, p: float) -> bool:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    return oracle.uniform(e) < p
