import logging

import numpy as np

from mcentrality.dtos import GraphStats, ThresholdFormula
from mcentrality.errors import ThresholdError
from mcentrality.graph import Graph, connected_components
from mcentrality.kshell import max_coreness
from mcentrality.sir import epidemic_threshold

logger = logging.getLogger(__name__)


def graph_stats(
    g: Graph, formula: ThresholdFormula = ThresholdFormula.HMF_CORRECTED
) -> GraphStats:
    """Summary row for one network: size, degree moments, core depth and threshold."""
    deg = g.degrees.astype(np.float64)
    comps = connected_components(g)
    try:
        beta_th = epidemic_threshold(g, formula)
    except ThresholdError as exc:
        logger.warning("No epidemic threshold for this graph: %s", exc)
        beta_th = float("nan")
    return GraphStats(
        n=g.n,
        m=g.m,
        mean_degree=float(deg.mean()) if g.n else 0.0,
        max_degree=int(deg.max()) if g.n else 0,
        mean_degree_sq=float((deg * deg).mean()) if g.n else 0.0,
        max_coreness=max_coreness(g),
        giant_size=int(comps.sizes.max()) if comps.count else 0,
        beta_th=beta_th,
        threshold_formula=ThresholdFormula(formula),
    )
