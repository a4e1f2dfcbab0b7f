"""K-core decomposition by bin-sort peeling.

Nodes sit in buckets keyed by residual degree; the node with the smallest
residual degree is removed next and its coreness is that degree. Each
removal moves every higher-degree neighbor down one bucket in constant
time, so the whole decomposition is ``O(n + m)``. Within a bucket nodes are
taken smallest index first.
"""

import logging

import numpy as np
from numba import njit

from mcentrality.dtos import IntArray
from mcentrality.graph import Graph

logger = logging.getLogger(__name__)

CorenessVector = IntArray


@njit(cache=True)
def _bin_sort_peel(indptr: np.ndarray, indices: np.ndarray, degree: np.ndarray) -> np.ndarray:
    n = degree.shape[0]
    deg = degree.copy()
    max_deg = 0
    for v in range(n):
        if deg[v] > max_deg:
            max_deg = deg[v]

    # bucket start offsets into vert
    bins = np.zeros(max_deg + 1, dtype=np.int64)
    for v in range(n):
        bins[deg[v]] += 1
    start = 0
    for d in range(max_deg + 1):
        count = bins[d]
        bins[d] = start
        start += count

    pos = np.empty(n, dtype=np.int64)
    vert = np.empty(n, dtype=np.int64)
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(max_deg, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0

    for i in range(n):
        v = vert[i]
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            du = deg[u]
            if du > deg[v]:
                # swap u with the first node of its bucket, then shrink the bucket
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bins[du] += 1
                deg[u] = du - 1
    return deg


def kcore_decomposition(g: Graph) -> CorenessVector:
    if g.n == 0:
        coreness = np.zeros(0, dtype=np.int64)
    else:
        coreness = _bin_sort_peel(
            np.ascontiguousarray(g.indptr, dtype=np.int64),
            np.ascontiguousarray(g.indices, dtype=np.int64),
            g.degrees.astype(np.int64),
        )
        logger.debug("peeled %d nodes, max coreness %d", g.n, int(coreness.max()))
    coreness.setflags(write=False)
    return coreness


def max_coreness(g: Graph) -> int:
    if g.n == 0:
        return 0
    return int(kcore_decomposition(g).max())
