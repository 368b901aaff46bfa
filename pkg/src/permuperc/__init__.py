"""Bond percolation on the permutahedron Perm(n) and its face graphs."""

from .branching import simulate_gw, solve_gamma, truncated_binomial_mean
from .faces import FaceChain, contains, face_neighbors, full_face, project, refine, split_level
from .oracle import EdgeOracle, edge_open, edge_uniform
from .percolation import (
    ComponentReport,
    PercolationConfig,
    distance2_coverage,
    enumerate_components,
    hitting_times,
    medium_component_census,
    two_round_exposure,
)
from .perm import apply_generator, edge_id, inversion_set, kendall_distance, neighbors, rank, unrank
from .pfs import PfsConfig, PfsState, cluster_reaches, pfs_explore, pfs_prime_explore

__version__ = "0.1.0"
