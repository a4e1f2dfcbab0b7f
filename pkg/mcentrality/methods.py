"""Name to implementation map for every ranking method the CLI exposes."""

from typing import Dict, Iterable, List

import numpy as np

from mcentrality import baselines
from mcentrality.dtos import CentralityVector, MethodParams
from mcentrality.errors import UnknownMethodError
from mcentrality.graph import Graph
from mcentrality.interfaces import CentralityMethod
from mcentrality.kshell import kcore_decomposition
from mcentrality.m_centrality import delta_d, m_centrality


def _m(g: Graph, params: MethodParams) -> CentralityVector:
    return m_centrality(g, params.mu).as_centrality()


def _kshell(g: Graph, params: MethodParams) -> CentralityVector:
    return CentralityVector("kshell", kcore_decomposition(g).astype(np.float64))


def _deltad(g: Graph, params: MethodParams) -> CentralityVector:
    return CentralityVector("deltad", delta_d(g))


def _degree(g: Graph, params: MethodParams) -> CentralityVector:
    return baselines.degree_centrality(g)


def _gravity(g: Graph, params: MethodParams) -> CentralityVector:
    return baselines.gravity(g, radius=params.radius)


def _ci(g: Graph, params: MethodParams) -> CentralityVector:
    return baselines.collective_influence(g, ell=params.ell)


def _clusterrank(g: Graph, params: MethodParams) -> CentralityVector:
    return baselines.cluster_rank(g)


def _dil(g: Graph, params: MethodParams) -> CentralityVector:
    return baselines.dil(g)


def _ppr(g: Graph, params: MethodParams) -> CentralityVector:
    return baselines.personalized_pagerank(
        g, teleport_prob=params.teleport, preference=params.preference
    )


def build_method_map() -> Dict[str, CentralityMethod]:
    pairs: List[tuple[str, CentralityMethod]] = [
        ("m", _m),
        ("deltad", _deltad),
        ("kshell", _kshell),
        ("degree", _degree),
        ("gravity", _gravity),
        ("ci", _ci),
        ("clusterrank", _clusterrank),
        ("dil", _dil),
        ("ppr", _ppr),
    ]
    return dict(pairs)


METHODS = build_method_map()

BASELINES = ("gravity", "ci", "clusterrank", "dil", "ppr")


def compute_centrality(g: Graph, name: str, params: MethodParams) -> CentralityVector:
    try:
        method = METHODS[name]
    except KeyError:
        raise UnknownMethodError(
            f"unknown method {name!r}; choose from {', '.join(METHODS)}"
        ) from None
    return method(g, params)


def compute_all(
    g: Graph, names: Iterable[str], params: MethodParams
) -> List[CentralityVector]:
    return [compute_centrality(g, name, params) for name in names]
