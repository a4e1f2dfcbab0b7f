"""M-Centrality: coreness combined with local degree variation.

``M_i = mu * K_s(i) + (1 - mu) * dD(i)`` where ``dD`` sums, over the
neighbors ``j`` of ``i``, ``k_i * |k_j - k_i| / sum_{j in N_i} k_j`` and
``mu`` comes from the entropy of the two normalised attributes unless it
is given explicitly.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy import special

from mcentrality.dtos import EntropyWeights, FloatArray, MCentralityVector
from mcentrality.errors import (DegenerateAttributeError,
                                InvalidParameterError, TooFewNodesError)
from mcentrality.graph import Graph
from mcentrality.kshell import CorenessVector, kcore_decomposition

logger = logging.getLogger(__name__)

DeltaDVector = FloatArray

ATTRIBUTE_NAMES = ("coreness", "delta_d")

# entropies this close to 1 on both attributes count as perfectly flat
_FLAT_TOLERANCE = 1e-12


def delta_d(g: Graph) -> DeltaDVector:
    deg = g.degrees.astype(np.float64)
    src, dst = g.sources, g.indices
    neighbor_sum = np.bincount(src, weights=deg[dst], minlength=g.n)
    variation = np.bincount(src, weights=np.abs(deg[dst] - deg[src]), minlength=g.n)
    out = np.zeros(g.n, dtype=np.float64)
    has_nbrs = neighbor_sum > 0
    out[has_nbrs] = deg[has_nbrs] * variation[has_nbrs] / neighbor_sum[has_nbrs]
    return out


def _normalised_entropy(values: np.ndarray) -> Optional[float]:
    """Shannon entropy of ``values / sum`` scaled by ``1 / ln n``; None if the sum is 0."""
    total = float(values.sum())
    if total <= 0.0:
        return None
    r = values / total
    return float(special.entr(r).sum() / math.log(values.shape[0]))


def entropy_weights(ks: CorenessVector, dd: DeltaDVector) -> EntropyWeights:
    if ks.shape != dd.shape:
        raise InvalidParameterError("attribute vectors differ in length")
    n = int(ks.shape[0])
    if n < 2:
        raise TooFewNodesError("entropy weighting needs at least two nodes")

    entropies: list[float] = []
    degenerate: list[str] = []
    for name, values in zip(ATTRIBUTE_NAMES, (ks.astype(np.float64), dd)):
        e = _normalised_entropy(values)
        if e is None:
            # an all-zero attribute gets maximal entropy, hence weight 0
            degenerate.append(name)
            e = 1.0
        entropies.append(e)

    if len(degenerate) == 2:
        raise DegenerateAttributeError("coreness and delta_d are both identically zero")
    denominator = 2.0 - sum(entropies)
    if degenerate:
        logger.warning("Attribute %s is identically zero; its weight is set to 0", degenerate[0])
        mu = 0.0 if degenerate[0] == "coreness" else 1.0
    elif denominator <= _FLAT_TOLERANCE:
        logger.warning("Both attributes have maximal entropy; using equal weights")
        mu = 0.5
    else:
        mu = (1.0 - entropies[0]) / denominator
    return EntropyWeights(
        mu=float(min(1.0, max(0.0, mu))),
        entropy_global=entropies[0],
        entropy_local=entropies[1],
        degenerate=tuple(degenerate),
    )


def m_centrality(g: Graph, mu_override: Optional[float] = None) -> MCentralityVector:
    if mu_override is not None and not 0.0 <= mu_override <= 1.0:
        raise InvalidParameterError(f"mu must lie in [0, 1], got {mu_override}")
    ks = kcore_decomposition(g)
    dd = delta_d(g)
    weights: Optional[EntropyWeights] = None
    if mu_override is None:
        weights = entropy_weights(ks, dd)
        mu = weights.mu
        logger.info(
            "Entropy weight mu=%.4f (E_ks=%.4f, E_dd=%.4f)",
            mu,
            weights.entropy_global,
            weights.entropy_local,
        )
    else:
        mu = float(mu_override)
    scores = mu * ks + (1.0 - mu) * dd
    return MCentralityVector(
        scores=scores, mu_used=mu, coreness=ks, delta_d=dd, weights=weights
    )
