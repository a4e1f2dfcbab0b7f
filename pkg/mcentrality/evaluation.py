"""Ranking quality metrics: monotonicity, Kendall tau-b, efficiency decline and RBO."""

from __future__ import annotations

import logging
import warnings
from typing import Optional, Sequence, Union

import numpy as np
from scipy import stats

from mcentrality.dtos import (AttackReport, AttackStep, CentralityVector,
                              EfficiencyNorm, FloatArray, IntArray,
                              MethodComparison, RankingList, RboParams,
                              TauResult)
from mcentrality.errors import InvalidParameterError, TooFewNodesError
from mcentrality.graph import (Graph, connected_components, distance_blocks,
                               induced_subgraph)

logger = logging.getLogger(__name__)

TIE_EPSILON = 1e-9

Scores = Union[CentralityVector, FloatArray, Sequence[float]]


def _as_scores(scores: Scores) -> FloatArray:
    if isinstance(scores, CentralityVector):
        scores = scores.scores
    return np.asarray(scores, dtype=np.float64)


def _quantize(values: FloatArray, tie_epsilon: float) -> FloatArray:
    if tie_epsilon <= 0.0:
        return values
    return np.round(values / tie_epsilon)


def rank_nodes(scores: Scores, tie_epsilon: float = TIE_EPSILON) -> RankingList:
    """Descending order, ties broken by node index, competition ranks (1, 1, 3, ...)."""
    q = _quantize(_as_scores(scores), tie_epsilon)
    n = q.shape[0]
    order = np.lexsort((np.arange(n), -q)).astype(np.int64)
    if n == 0:
        empty = np.empty(0, dtype=np.int64)
        return RankingList(order, empty, empty)
    sorted_q = q[order]
    starts = np.flatnonzero(np.r_[True, sorted_q[1:] != sorted_q[:-1]])
    group_sizes = np.diff(np.r_[starts, n]).astype(np.int64)
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.repeat(starts + 1, group_sizes)
    return RankingList(order=order, ranks=ranks, group_sizes=group_sizes)


def monotonicity(r: RankingList) -> float:
    n = r.n
    if n < 2:
        raise TooFewNodesError("monotonicity needs at least two nodes")
    sizes = r.group_sizes.astype(np.float64)
    tied_pairs = float((sizes * (sizes - 1.0)).sum())
    return (1.0 - tied_pairs / (n * (n - 1.0))) ** 2


def kendall_tau(x: Scores, y: Scores, tie_epsilon: float = TIE_EPSILON) -> TauResult:
    """Tau-b; a list that is constant after tie merging yields 0 flagged degenerate."""
    a = _quantize(_as_scores(x), tie_epsilon)
    b = _quantize(_as_scores(y), tie_epsilon)
    if a.shape != b.shape:
        raise InvalidParameterError("score sequences differ in length")
    if a.shape[0] < 2:
        raise TooFewNodesError("kendall tau needs at least two nodes")
    if np.all(a == a[0]) or np.all(b == b[0]):
        logger.warning("Kendall tau is undefined for a constant ranking; reporting 0")
        return TauResult(0.0, degenerate=True)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        tau, _ = stats.kendalltau(a, b, variant="b")
    return TauResult(float(tau), degenerate=False)


def _inverse_distance_sum(g: Graph) -> float:
    total = 0.0
    for _, dist in distance_blocks(g):
        reachable = np.isfinite(dist) & (dist > 0)
        total += float(np.reciprocal(dist[reachable]).sum())
    return total


def network_efficiency(g: Graph) -> float:
    n = g.n
    if n < 2:
        raise TooFewNodesError("network efficiency needs at least two nodes")
    return _inverse_distance_sum(g) / (n * (n - 1.0))


def efficiency_decline(
    g: Graph,
    order: Sequence[int],
    steps: int,
    normalization: EfficiencyNorm = EfficiencyNorm.RESIDUAL,
) -> AttackReport:
    """Remove ``order[:steps]`` one node at a time and track efficiency and fragmentation.

    Step 0 describes the intact graph. With ``residual`` normalisation each
    step divides by the surviving node count; ``original`` keeps ``n(n-1)`` of
    the intact graph.
    """
    normalization = EfficiencyNorm(normalization)
    order_arr = np.asarray(order, dtype=np.int64)
    if steps < 0:
        raise InvalidParameterError("steps must be non-negative")
    if order_arr.size and (order_arr.min() < 0 or order_arr.max() >= g.n):
        raise InvalidParameterError("removal order contains an unknown node")
    victims = order_arr[:steps]
    if victims.size < steps or np.unique(victims).size != victims.size:
        raise InvalidParameterError(f"removal order must provide {steps} distinct nodes")

    n0 = g.n
    eta0 = network_efficiency(g)

    def measure(sub: Graph) -> tuple[int, int, float]:
        comps = connected_components(sub)
        giant = int(comps.sizes.max()) if comps.count else 0
        if normalization is EfficiencyNorm.ORIGINAL:
            eta = _inverse_distance_sum(sub) / (n0 * (n0 - 1.0))
        else:
            eta = network_efficiency(sub) if sub.n >= 2 else 0.0
        return comps.count, giant, eta

    def decline(eta: float) -> float:
        return 1.0 - eta / eta0 if eta0 > 0.0 else 0.0

    components, giant, _ = measure(g)
    records = [AttackStep(0, None, None, components, giant, eta0, 0.0)]
    keep = np.ones(n0, dtype=bool)
    for step, node in enumerate(victims.tolist(), start=1):
        keep[node] = False
        components, giant, eta = measure(induced_subgraph(g, keep))
        records.append(
            AttackStep(step, node, g.labels[node], components, giant, eta, decline(eta))
        )
        logger.debug("removed %s: %d components, eta=%.5f", g.labels[node], components, eta)
    return AttackReport(
        order=tuple(victims.tolist()),
        eta0=eta0,
        steps=tuple(records),
        normalization=normalization,
    )


def rbo(x: RankingList, y: RankingList, params: RboParams) -> float:
    """Rank-biased overlap with prefix agreement ``|X_d & Y_d| / |X_d | Y_d|``."""
    n = x.n
    if y.n != n or not np.array_equal(np.sort(x.order), np.sort(y.order)):
        raise InvalidParameterError("rankings cover different node sets")
    depth = n if params.depth is None else params.depth
    if depth > n:
        raise InvalidParameterError(f"RBO depth {depth} exceeds list length {n}")
    pos_x = np.empty(n, dtype=np.int64)
    pos_y = np.empty(n, dtype=np.int64)
    pos_x[x.order] = np.arange(n)
    pos_y[y.order] = np.arange(n)
    # a node is in both prefixes from depth max(pos_x, pos_y) + 1 onwards
    inter = np.cumsum(np.bincount(np.maximum(pos_x, pos_y), minlength=n))[:depth]
    d = np.arange(1, depth + 1, dtype=np.float64)
    agreement = inter / (2.0 * d - inter)
    p = params.p
    return float((1.0 - p) * np.sum(np.power(p, d - 1.0) * agreement))


def compare_methods(
    vectors: Sequence[CentralityVector],
    reference: CentralityVector,
    tie_epsilon: float = TIE_EPSILON,
) -> list[MethodComparison]:
    rows: list[MethodComparison] = []
    for vec in vectors:
        result = kendall_tau(vec.scores, reference.scores, tie_epsilon)
        rows.append(
            MethodComparison(
                method=vec.method,
                monotonicity=monotonicity(rank_nodes(vec, tie_epsilon)),
                tau=result.tau,
                degenerate=result.degenerate,
            )
        )
    return rows


def top_order(scores: Scores, count: Optional[int] = None) -> IntArray:
    """First ``count`` nodes of the descending ranking, the usual attack order."""
    order = rank_nodes(scores).order
    return order if count is None else order[:count]
