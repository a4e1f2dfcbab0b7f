import os
from pathlib import Path
from typing import Sequence

import networkx as nx
import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from mcentrality.graph import Graph, parse_edge_list

DATA_DIR = Path(__file__).parent / "data"

# the first k-core call compiles the peeling kernel
settings.register_profile("mcentrality", deadline=None)
settings.load_profile("mcentrality")


def make_graph(n: int, edges: Sequence[tuple[int, int]]) -> Graph:
    return Graph.from_edge_pairs(n, np.asarray(edges, dtype=np.int64).reshape(-1, 2))


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(map(tuple, g.edges().tolist()))
    return h


def from_networkx(h: nx.Graph) -> Graph:
    text = "".join(f"{u} {v}\n" for u, v in h.edges())
    return parse_edge_list(text)


@st.composite
def graphs(draw, min_nodes: int = 1, max_nodes: int = 40) -> Graph:
    n = draw(st.integers(min_value=min_nodes, max_value=max_nodes))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    edges = draw(st.lists(pairs, max_size=3 * n))
    return make_graph(n, edges)


@pytest.fixture
def triangle() -> Graph:
    return make_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3() -> Graph:
    return make_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def star() -> Graph:
    return make_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


@pytest.fixture(scope="session")
def les_miserables() -> Graph:
    h = nx.les_miserables_graph()
    text = "".join(f"{u} {v}\n" for u, v in h.edges())
    return parse_edge_list(text)


@pytest.fixture(scope="session")
def dolphins_path() -> Path:
    path = Path(os.environ.get("MCENTRALITY_DOLPHINS", DATA_DIR / "dolphins.txt"))
    if not path.is_file():
        pytest.skip("Dolphins edge list not available")
    return path


@pytest.fixture(scope="session")
def dolphins(dolphins_path: Path) -> Graph:
    return parse_edge_list(dolphins_path.read_bytes())
