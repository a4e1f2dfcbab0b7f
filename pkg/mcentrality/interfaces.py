from typing import Protocol

from mcentrality.dtos import CentralityVector, MethodParams
from mcentrality.graph import Graph


class CentralityMethod(Protocol):
    """Anything that scores every node of a graph (M-Centrality, baselines, ...)"""

    def __call__(self, g: Graph, params: MethodParams) -> CentralityVector: ...
