"""Reference centralities the M-Centrality ranking is compared against.

Every function takes a :class:`Graph` and returns a :class:`CentralityVector`
whose ``params`` record the settings used. Distance-based measures (Gravity,
Collective Influence) walk bounded BFS balls block by block so memory stays
proportional to the block size, not ``n**2``.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from mcentrality.dtos import CentralityVector, FloatArray, Preference
from mcentrality.errors import ConvergenceError, InvalidParameterError
from mcentrality.graph import Graph, distance_blocks
from mcentrality.kshell import CorenessVector, kcore_decomposition

__all__ = [
    "degree_centrality",
    "gravity",
    "collective_influence",
    "cluster_rank",
    "dil",
    "personalized_pagerank",
    "common_neighbor_counts",
    "clustering_coefficients",
]

logger = logging.getLogger(__name__)

PAGERANK_TOL = 1e-10
PAGERANK_MAX_ITER = 10_000


def degree_centrality(g: Graph) -> CentralityVector:
    return CentralityVector("degree", g.degrees.astype(np.float64))


def gravity(
    g: Graph, radius: int = 3, coreness: Optional[CorenessVector] = None
) -> CentralityVector:
    """Coreness as mass, hop distance as distance: sum of ``K_i K_j / d^2`` within ``radius``."""
    if radius < 1:
        raise InvalidParameterError("gravity radius must be at least 1")
    ks = (kcore_decomposition(g) if coreness is None else coreness).astype(np.float64)
    scores = np.zeros(g.n, dtype=np.float64)
    for chunk, dist in distance_blocks(g, max_depth=radius):
        within = np.isfinite(dist) & (dist > 0)
        inv_sq = np.divide(1.0, dist * dist, out=np.zeros_like(dist), where=within)
        scores[chunk] = ks[chunk] * (inv_sq @ ks)
    return CentralityVector("gravity", scores, {"radius": radius})


def collective_influence(g: Graph, ell: int = 3) -> CentralityVector:
    """``(k_i - 1)`` times the summed reduced degree on the ball boundary at ``ell``."""
    if ell < 1:
        raise InvalidParameterError("collective influence radius must be at least 1")
    reduced = g.degrees.astype(np.float64) - 1.0
    scores = np.zeros(g.n, dtype=np.float64)
    for chunk, dist in distance_blocks(g, max_depth=ell):
        frontier = (dist == ell).astype(np.float64)
        scores[chunk] = reduced[chunk] * (frontier @ reduced)
    scores = np.where(scores > 0.0, scores, 0.0)
    return CentralityVector("ci", scores, {"ell": ell})


def common_neighbor_counts(g: Graph) -> FloatArray:
    """Triangles through each CSR entry ``(sources[e], indices[e])``."""
    if g.indices.size == 0:
        return np.zeros(0, dtype=np.float64)
    a = g.adjacency
    paths2 = (a @ a).tocsr()
    return np.asarray(paths2[g.sources, g.indices]).ravel()


def clustering_coefficients(g: Graph) -> FloatArray:
    deg = g.degrees.astype(np.float64)
    triangles = np.bincount(g.sources, weights=common_neighbor_counts(g), minlength=g.n) / 2.0
    coeff = np.zeros(g.n, dtype=np.float64)
    ok = deg >= 2
    coeff[ok] = 2.0 * triangles[ok] / (deg[ok] * (deg[ok] - 1.0))
    return coeff


def cluster_rank(g: Graph) -> CentralityVector:
    """Undirected ClusterRank: ``10**(-c_i) * sum_{j in N_i} (k_j + 1)``."""
    deg = g.degrees.astype(np.float64)
    followers = np.bincount(g.sources, weights=deg[g.indices] + 1.0, minlength=g.n)
    scores = np.power(10.0, -clustering_coefficients(g)) * followers
    return CentralityVector("clusterrank", scores)


def dil(g: Graph) -> CentralityVector:
    """Degree plus the importance of incident lines.

    For edge ``e = (i, j)`` with ``p`` triangles: ``U = (k_i - p - 1)(k_j - p - 1)``,
    ``I = U / (p / 2 + 1)`` and node ``i`` receives ``I (k_i - 1) / (k_i + k_j - 2)``.
    """
    deg = g.degrees.astype(np.float64)
    ki = deg[g.sources]
    kj = deg[g.indices]
    p = common_neighbor_counts(g)
    importance = (ki - p - 1.0) * (kj - p - 1.0) / (p / 2.0 + 1.0)
    denom = ki + kj - 2.0
    share = np.divide(
        importance * (ki - 1.0), denom, out=np.zeros_like(denom), where=denom > 0
    )
    scores = deg + np.bincount(g.sources, weights=share, minlength=g.n)
    return CentralityVector("dil", scores)


def _preference_vector(g: Graph, preference: Preference) -> FloatArray:
    deg = g.degrees.astype(np.float64)
    total = deg.sum()
    if preference is Preference.DEGREE and total > 0:
        return deg / total
    return np.full(g.n, 1.0 / g.n)


def personalized_pagerank(
    g: Graph,
    teleport_prob: float = 0.15,
    preference: Preference = Preference.DEGREE,
    tol: float = PAGERANK_TOL,
    max_iter: int = PAGERANK_MAX_ITER,
) -> CentralityVector:
    """Stationary distribution of a random walk that restarts per ``preference``.

    With probability ``1 - teleport_prob`` the walker follows a uniformly
    chosen incident edge; otherwise, or when stuck on an isolated node, it
    jumps according to the preference distribution.
    """
    if not 0.0 < teleport_prob < 1.0:
        raise InvalidParameterError("teleport probability must lie in (0, 1)")
    preference = Preference(preference)
    n = g.n
    deg = g.degrees.astype(np.float64)
    dangling = deg == 0
    inv_deg = np.divide(1.0, deg, out=np.zeros(n), where=~dangling)
    v = _preference_vector(g, preference)
    a = g.adjacency
    follow = 1.0 - teleport_prob

    x = v.copy()
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        walked = a @ (x * inv_deg) + x[dangling].sum() * v
        nxt = follow * walked + teleport_prob * v
        nxt /= nxt.sum()
        residual = float(np.abs(nxt - x).sum())
        x = nxt
        if residual < tol:
            logger.debug("personalized pagerank converged after %d sweeps", iteration)
            break
    else:
        raise ConvergenceError("personalized pagerank did not converge", residual, max_iter)
    return CentralityVector(
        "ppr", x, {"teleport": teleport_prob, "preference": preference.value}
    )
