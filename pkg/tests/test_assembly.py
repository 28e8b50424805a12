import pytest

from purepairs.constructions.assembly import (Embedding, decompose_pattern, find_pattern, reduce_and_find,
                                              regime_checks)
from purepairs.constructions.params import STRICT
from purepairs.detectors import contains_induced, is_induced_embedding
from purepairs.generators import (cycle_pattern, engineered_pattern_host, gnp, path_pattern, realized_host,
                                  subdivided_clique, theta_pattern)
from purepairs.graph import Graph, complete_graph, cycle_graph, empty_graph, path_graph
from purepairs.graph import is_anticomplete_pair
from purepairs.structures import PatternGraph, realize_pattern

EPS = 1e-12


def embedded(g, p, rep):
    h = realize_pattern(p)
    return is_induced_embedding(g, h, rep.certificate.mapping()) and contains_induced(g, h).found


def test_path_plus_isolated_vertices():
    p = path_pattern(5)
    g = realized_host(p, isolated=4)
    rep = find_pattern(g, p, 1.0, EPS)
    assert rep.ok and embedded(g, p, rep)
    assert rep.certificate.mapping() == tuple(range(6))


def test_c6_plus_triangle():
    p = cycle_pattern(6)
    g = Graph.from_edges(9, list(cycle_graph(6).edges()) + [(6, 7), (7, 8), (6, 8)])
    rep = find_pattern(g, p, 1.0, EPS)
    assert rep.ok and embedded(g, p, rep)
    assert set(rep.certificate.mapping()) == set(range(6))


@pytest.mark.parametrize("noise", [0, 6])
def test_theta_in_engineered_host(noise):
    p = theta_pattern(5)
    g, images = engineered_pattern_host(p, noise=noise, seed=3)
    assert is_induced_embedding(g, realize_pattern(p), images)
    rep = find_pattern(g, p, 1.0, EPS, strategies=("troupe", "local"))
    assert rep.ok and rep.summary["strategy"] == "local" and embedded(g, p, rep)


@pytest.mark.parametrize("p", [cycle_pattern(10), theta_pattern(9), subdivided_clique(4, 5)])
def test_library_patterns_local(p):
    g, _ = engineered_pattern_host(p, noise=4, seed=1)
    rep = find_pattern(g, p, 1.0, EPS, strategies=("local",))
    assert rep.ok and embedded(g, p, rep)


def test_failure_lists_every_strategy():
    rep = find_pattern(empty_graph(10), cycle_pattern(9), 1.0, EPS)
    assert not rep.ok
    assert [a[0] for a in rep.summary["attempts"]] == ["troupe", "local", "search"]


def test_unknown_strategy():
    with pytest.raises(ValueError):
        find_pattern(path_graph(3), path_pattern(5), 1.0, EPS, strategies=("magic",))


def test_strict_mode_checks_regime():
    g, _ = engineered_pattern_host(theta_pattern(5), seed=0)
    rep = find_pattern(g, theta_pattern(5), 1.0, 0.1, mode=STRICT)
    assert not rep.ok and rep.stage == "hypotheses"
    checks = regime_checks(g, theta_pattern(5), 1.0, 0.1)
    assert checks["branch_length"] is False


def test_embedding_mapping_matches_routes():
    p = theta_pattern(5)
    g, _ = engineered_pattern_host(p, seed=2)
    emb = find_pattern(g, p, 1.0, EPS, strategies=("local",)).certificate
    assert isinstance(emb, Embedding)
    m = emb.mapping()
    assert len(m) == len(set(m)) == realize_pattern(p).n
    for route in emb.routes:
        assert route[0] in emb.branch and route[-1] in emb.branch


def test_decompose_pattern_round_trip():
    h = realize_pattern(theta_pattern(5))
    q, order = decompose_pattern(h)
    assert realize_pattern(q).n == h.n and sorted(q.lengths) == [5, 5, 5]


# --- driver --------------------------------------------------------------------

def test_edgeless_host_gives_halving_pair():
    g = empty_graph(10)
    rep = reduce_and_find(g, realize_pattern(cycle_pattern(9)), realize_pattern(cycle_pattern(9)), 0.5, 0.1)
    cert = rep.certificate
    assert rep.ok and cert["kind"] == "pure_pair" and cert["pair_kind"] == "anticomplete"
    assert {len(cert["a"]), len(cert["b"])} == {5}
    assert is_anticomplete_pair(g, cert["a"], cert["b"])


def test_pattern_plus_independent_set():
    h = realize_pattern(cycle_pattern(9))
    g = Graph.from_edges(h.n + 20, h.edges())
    rep = reduce_and_find(g, h, h, 0.5, 0.1)
    assert rep.ok and rep.certificate["kind"] == "embedding"
    assert is_induced_embedding(g, h, rep.certificate["mapping"])


@pytest.mark.parametrize("seed", range(3))
def test_random_host_returns_a_valid_certificate(seed):
    g = gnp(60, 0.05, seed)
    h = realize_pattern(cycle_pattern(9))
    rep = reduce_and_find(g, h, h, 0.5, 0.1)
    assert rep.ok
    cert = rep.certificate
    if cert["kind"] == "embedding":
        host = g if cert["side"] == "graph" else None
        assert host is not None and is_induced_embedding(g, h, cert["mapping"])
    else:
        assert cert["pair_kind"] == "anticomplete" and is_anticomplete_pair(g, cert["a"], cert["b"])
