import itertools

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from purepairs.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, b in zip(pairs, bits) if b])


@st.composite
def graph_and_subset(draw, min_n=1, max_n=9):
    g = draw(graphs(min_n, max_n))
    x = draw(st.sets(st.integers(0, g.n - 1))) if g.n else set()
    return g, frozenset(x)


@pytest.fixture
def tmp_graph_file(tmp_path):
    from purepairs.graph import write_graph

    def make(g, name="g.txt"):
        path = tmp_path / name
        write_graph(g, path)
        return str(path)
    return make
