"""Immutable simple undirected graph in compressed sparse row form.

Nodes are dense indices ``0..n-1`` assigned in first-appearance order while
reading an edge list; ``labels[i]`` keeps the original string label.
"""

from __future__ import annotations

import io
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterator, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from mcentrality.dtos import IntArray
from mcentrality.errors import (EmptyGraphError, GraphParseError,
                                InvalidParameterError, NodeOutOfRangeError)

logger = logging.getLogger(__name__)

COMMENT_PREFIXES = ("#", "%")

# Cells per distance block when computing bounded BFS distances in bulk.
_BLOCK_CELLS = 1 << 22

EdgeSource = Union[bytes, str, IO[bytes], IO[str]]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    indptr: IntArray
    indices: IntArray
    labels: tuple[str, ...]

    @classmethod
    def from_edge_pairs(
        cls,
        n: int,
        pairs: Union[np.ndarray, Sequence[tuple[int, int]]],
        labels: Optional[Sequence[str]] = None,
    ) -> "Graph":
        """Build a graph from index pairs; self-loops and duplicates are dropped."""
        arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise NodeOutOfRangeError(f"edge endpoint outside 0..{n - 1}")
        arr = arr[arr[:, 0] != arr[:, 1]]
        canon = np.unique(np.sort(arr, axis=1), axis=0)
        return cls._from_canonical(n, canon, labels)

    @classmethod
    def _from_canonical(
        cls, n: int, canon: np.ndarray, labels: Optional[Sequence[str]]
    ) -> "Graph":
        rows = np.concatenate([canon[:, 0], canon[:, 1]])
        cols = np.concatenate([canon[:, 1], canon[:, 0]])
        order = np.lexsort((cols, rows))
        indices = cols[order].astype(np.int64)
        counts = np.bincount(rows, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise InvalidParameterError("one label per node is required")
        return cls(_frozen(indptr), _frozen(indices), tuple(labels))

    @property
    def n(self) -> int:
        return int(self.indptr.shape[0] - 1)

    @property
    def m(self) -> int:
        return int(self.indices.shape[0] // 2)

    @cached_property
    def degrees(self) -> IntArray:
        return _frozen(np.diff(self.indptr))

    @cached_property
    def sources(self) -> IntArray:
        """Row index of every CSR entry, aligned with ``indices``."""
        return _frozen(np.repeat(np.arange(self.n, dtype=np.int64), self.degrees))

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(self.indices.shape[0], dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise NodeOutOfRangeError(f"unknown node label {label!r}") from None

    def neighbors(self, node: int) -> IntArray:
        self.check_node(node)
        return self.indices[self.indptr[node] : self.indptr[node + 1]]

    def gather_neighbors(self, nodes: IntArray) -> IntArray:
        """Concatenated neighbor lists of ``nodes``, in the given node order."""
        starts = self.indptr[nodes]
        counts = self.indptr[nodes + 1] - starts
        total = int(counts.sum())
        if total == 0:
            return np.empty(0, dtype=np.int64)
        offsets = np.repeat(starts - np.cumsum(counts) + counts, counts)
        return self.indices[offsets + np.arange(total)]

    def edges(self) -> np.ndarray:
        """Edge array of shape (m, 2) with ``i < j``, sorted."""
        mask = self.sources < self.indices
        return np.column_stack([self.sources[mask], self.indices[mask]])

    def check_node(self, node: int) -> None:
        if not 0 <= node < self.n:
            raise NodeOutOfRangeError(f"node {node} outside 0..{self.n - 1}")


@dataclass(frozen=True)
class EdgeListResult:
    graph: Graph
    lines: int
    self_loops: int
    duplicates: int

    @property
    def dropped(self) -> int:
        return self.self_loops + self.duplicates


@dataclass(frozen=True, eq=False)
class Components:
    count: int
    membership: IntArray

    @property
    def sizes(self) -> IntArray:
        return np.bincount(self.membership, minlength=self.count)

    def parts(self) -> list[IntArray]:
        order = np.argsort(self.membership, kind="stable")
        bounds = np.cumsum(self.sizes)[:-1]
        return list(np.split(order, bounds))


def _iter_lines(source: EdgeSource) -> Iterator[str]:
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    for lineno, raw in enumerate(source, start=1):
        if not isinstance(raw, bytes):
            yield raw
            continue
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphParseError(f"line is not valid UTF-8 ({exc.reason})", lineno) from None


def read_edge_list(source: EdgeSource) -> EdgeListResult:
    """Parse a whitespace separated edge list, keeping the drop tally."""
    index: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    lines = 0
    for lineno, line in enumerate(_iter_lines(source), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(COMMENT_PREFIXES):
            continue
        tokens = stripped.split()
        if len(tokens) < 2:
            raise GraphParseError(f"expected two node labels, got {stripped!r}", lineno)
        # third and later columns (weights) are ignored
        u = index.setdefault(tokens[0], len(index))
        v = index.setdefault(tokens[1], len(index))
        us.append(u)
        vs.append(v)
        lines += 1

    if not index:
        raise EmptyGraphError("edge list contains no edges")

    arr = np.column_stack([np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)])
    loops = arr[:, 0] == arr[:, 1]
    arr = np.sort(arr[~loops], axis=1)
    canon = np.unique(arr, axis=0)
    self_loops = int(loops.sum())
    duplicates = int(arr.shape[0] - canon.shape[0])
    graph = Graph._from_canonical(len(index), canon, list(index))
    if self_loops or duplicates:
        logger.warning(
            "Dropped %d self-loop(s) and %d duplicate edge(s) out of %d lines",
            self_loops,
            duplicates,
            lines,
        )
    return EdgeListResult(graph, lines, self_loops, duplicates)


def parse_edge_list(source: EdgeSource) -> Graph:
    return read_edge_list(source).graph


def serialize_edge_list(g: Graph) -> str:
    return "".join(f"{g.labels[i]} {g.labels[j]}\n" for i, j in g.edges())


def induced_subgraph(g: Graph, keep: np.ndarray) -> Graph:
    """Subgraph on the boolean mask ``keep``; surviving nodes keep their order."""
    keep = np.asarray(keep, dtype=bool)
    new_index = np.full(g.n, -1, dtype=np.int64)
    new_index[keep] = np.arange(int(keep.sum()))
    edges = g.edges()
    survives = keep[edges[:, 0]] & keep[edges[:, 1]]
    canon = new_index[edges[survives]]
    labels = [label for label, k in zip(g.labels, keep) if k]
    return Graph._from_canonical(len(labels), canon.reshape(-1, 2), labels)


def connected_components(g: Graph) -> Components:
    """Component ids are numbered by their smallest member index."""
    if g.n == 0:
        return Components(0, np.empty(0, dtype=np.int64))
    count, raw = csgraph.connected_components(g.adjacency, directed=False)
    _, first = np.unique(raw, return_index=True)
    renumber = np.empty(count, dtype=np.int64)
    renumber[np.argsort(first)] = np.arange(count)
    return Components(int(count), renumber[raw])


def largest_connected_component(g: Graph) -> Graph:
    if g.n == 0:
        raise EmptyGraphError("cannot take the largest component of an empty graph")
    comps = connected_components(g)
    # ids follow smallest member index, so argmax picks the lowest on ties
    giant = int(np.argmax(comps.sizes))
    if comps.count == 1:
        return g
    return induced_subgraph(g, comps.membership == giant)


def remove_nodes(g: Graph, victims: Union[Sequence[int], np.ndarray]) -> Graph:
    victims = np.asarray(victims, dtype=np.int64)
    if victims.size == 0:
        return g
    if victims.min() < 0 or victims.max() >= g.n:
        raise NodeOutOfRangeError("removal set contains an unknown node")
    keep = np.ones(g.n, dtype=bool)
    keep[victims] = False
    return induced_subgraph(g, keep)


def bfs_distances(g: Graph, source: int, max_depth: Optional[int] = None) -> dict[int, int]:
    g.check_node(source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        d = dist[u]
        if max_depth is not None and d >= max_depth:
            continue
        for v in g.indices[g.indptr[u] : g.indptr[u + 1]].tolist():
            if v not in dist:
                dist[v] = d + 1
                queue.append(v)
    return dist


def distance_blocks(
    g: Graph, max_depth: Optional[int] = None
) -> Iterator[tuple[IntArray, np.ndarray]]:
    """Yield ``(sources, distances)`` row blocks covering every node.

    Distances are hop counts as floats; ``inf`` marks unreachable pairs and
    pairs further apart than ``max_depth``.
    """
    n = g.n
    if n == 0:
        return
    step = max(1, _BLOCK_CELLS // n)
    limit = np.inf if max_depth is None else float(max_depth)
    for start in range(0, n, step):
        chunk = np.arange(start, min(n, start + step), dtype=np.int64)
        dist = csgraph.dijkstra(
            g.adjacency, directed=False, indices=chunk, unweighted=True, limit=limit
        )
        yield chunk, np.atleast_2d(dist)
