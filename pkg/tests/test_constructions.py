import random

import pytest
from hypothesis import given, strategies as st

from purepairs.constructions.coverings import (battery_potential, build_covering_sequence, build_multicovering,
                                               heart_base_ok, merge_choice, merge_type,
                                               refine_covering_sequence)
from purepairs.constructions.expansion import expansion_params, make_expanding, radius_bullets, small_rad
from purepairs.constructions.params import STRICT
from purepairs.constructions.spiders import (build_spider, build_troupe, heart_is_minimal, spider_from_multicovering,
                                             spider_height_bound, spiders_to_lobsters)
from purepairs.detectors import is_tau_expanding
from purepairs.generators import gnp
from purepairs.graph import Graph, bfs_layers, complete_bipartite, complete_graph, cycle_graph, empty_graph, induced_subgraph
from purepairs.structures import (Covering, CoveringSequence, validate_multicovering, validate_sequence,
                                  validate_spider, validate_troupe)


def two_communities(n, p, seed):
    a, b = gnp(n, p, seed), gnp(n, p, seed + 100)
    return Graph.from_edges(2 * n, list(a.edges()) + [(u + n, v + n) for u, v in b.edges()])


# --- make_expanding / small_rad ---------------------------------------------------

def test_complete_and_trivial_graphs_need_no_deletion():
    for g in (complete_graph(7), complete_graph(1)):
        rep = make_expanding(g, 0.5)
        assert rep.ok and rep.certificate == frozenset()


@pytest.mark.parametrize("seed", range(8))
def test_make_expanding_on_gnp16(seed):
    g = gnp(16, 0.5, seed)
    rep = make_expanding(g, 0.5)
    if not rep.ok:
        assert rep.stage == "Y budget exhausted"
        return
    tau, alpha = expansion_params(g.n, 0.5)
    y = rep.certificate
    assert len(y) <= alpha
    rest, _ = induced_subgraph(g, [v for v in range(g.n) if v not in y])
    assert is_tau_expanding(rest, tau, "exact").verified


def test_budget_exhaustion_yields_an_anticomplete_pair():
    g = Graph.from_edges(12, [(i, i + 6) for i in range(6)])
    rep = make_expanding(g, 0.5)
    assert not rep.ok
    a, b = rep.summary["anticomplete_pair"]
    assert not any(g.has_edge(u, v) for u in a for v in b)


def test_small_rad_star():
    rep = small_rad(complete_bipartite(1, 9), 1.0)
    sr = rep.certificate
    assert rep.ok and sr.u == 0 and sr.k == 1
    assert radius_bullets(complete_bipartite(1, 9), 0, 1) == (True, True)


def test_small_rad_c8_succeeds_at_radius_one():
    # two neighbours reach n/4 = 2, so k = 1 already meets both bullets
    rep = small_rad(cycle_graph(8), 0.5)
    assert rep.ok and rep.certificate.k == 1
    assert radius_bullets(cycle_graph(8), rep.certificate.u, 1) == (True, True)


def test_small_rad_fails_on_a_long_path_at_radius_one():
    rep = small_rad(empty_graph(8), 1.0)
    assert not rep.ok and rep.stage == "radius"


@pytest.mark.parametrize("seed", range(8))
def test_small_rad_bullets(seed):
    g = gnp(16, 0.5, seed)
    rep = small_rad(g, 0.5)
    if rep.ok:
        sr = rep.certificate
        assert 1 <= sr.k < 3 and all(radius_bullets(g, sr.u, sr.k))
        layers, _ = bfs_layers(g, sr.u)
        assert list(sr.levelling.layers) == [frozenset(x) for x in layers[: sr.k + 1]]


def test_small_rad_strict_rejects_unverified_coherence():
    rep = small_rad(empty_graph(10), 0.5, mode=STRICT)
    assert not rep.ok


# --- covering sequences -------------------------------------------------------------

def test_zero_terms_is_empty():
    rep = build_covering_sequence(cycle_graph(5), 1.0, 0, 0.1)
    assert rep.ok and len(rep.certificate) == 0


def test_star_gives_one_covering():
    g = complete_bipartite(1, 9)
    rep = build_covering_sequence(g, 1.0, 1, 0.1)
    assert rep.ok
    (cov,) = rep.certificate.terms
    assert cov.apex == 0 and cov.base == frozenset(range(1, 10))


@pytest.mark.parametrize("seed", range(6))
def test_sequences_validate(seed):
    g = gnp(60, 0.08, seed)
    for n_terms in (1, 2, 3):
        rep = build_covering_sequence(g, 0.5, n_terms, 0.01)
        if rep.ok:
            seq = rep.certificate
            assert len(seq) == n_terms and validate_sequence(g, seq, 2) and heart_base_ok(g, seq)
            assert all(len(t.base) >= 2 ** (-i - 1) * g.n for i, t in enumerate(seq.terms, 1))


def test_refine_anticomplete_terms_stay_disjoint():
    # two stars far apart
    g = Graph.from_edges(8, [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (4, 7)])
    seq = CoveringSequence([Covering(0, {0}, {1, 2, 3}), Covering(4, {4}, {5, 6, 7})])
    rep = refine_covering_sequence(g, seq, 1.0, 2)
    assert rep.ok and rep.certificate[0] == "disjoint" and rep.certificate[1] == seq


def test_refine_shared_base_gives_multicovering():
    # two apexes both covering {2, 3, 4}
    g = Graph.from_edges(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
    seq = CoveringSequence([Covering(0, {0}, {2, 3, 4}), Covering(1, {1}, {2, 3, 4})])
    assert not heart_base_ok(g, seq)
    g2 = Graph.from_edges(7, [(0, 2), (0, 3), (0, 4), (1, 5), (1, 6)])
    seq2 = CoveringSequence([Covering(0, {0}, {2, 3, 4}), Covering(1, {1}, {5, 6})])
    rep = refine_covering_sequence(g2, seq2, 1.0, 1)
    assert rep.ok and len(rep.certificate[1]) == 1


# --- battery bookkeeping ------------------------------------------------------------

def test_merge_type_example():
    assert merge_type((3, 2, 1), 2, 0) == (4, 2)


@given(st.lists(st.integers(1, 6), min_size=2, max_size=8))
def test_merge_ledger(types):
    types = tuple(sorted(types, reverse=True))
    while len(types) > 1:
        t = merge_choice(types)
        new = merge_type(types, t, 0)
        assert battery_potential(new) >= battery_potential(types)
        assert len(new) == len(types) - 1
        types = tuple(sorted(new, reverse=True))


def test_merge_into_self_is_an_error():
    with pytest.raises(ValueError):
        merge_type((1, 1), 0, 0)


def test_merge_choice_picks_last_smallest():
    assert merge_choice((3, 1, 2, 1)) == 3


# --- multicoverings, spiders, troupes -----------------------------------------------

def test_multicovering_length_one():
    rep = build_multicovering(gnp(40, 0.1, 1), 0.5, 1, 0.01)
    assert rep.ok and len(rep.certificate) == 1


@pytest.mark.parametrize("seed", range(6))
def test_multicoverings_validate(seed):
    g = gnp(60, 0.08, seed)
    for n_target in (2, 3):
        rep = build_multicovering(g, 0.5, n_target, 0.01)
        if rep.ok:
            assert len(rep.certificate) == n_target
            assert validate_multicovering(g, rep.certificate, 3)
        else:
            assert rep.stage


def test_spider_from_hand_built_multicovering():
    # hearts {0} and {1}, common base {2, 3, 4}; apexes far apart
    g = Graph.from_edges(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
    mc = CoveringSequence([Covering(0, {0}, {2, 3, 4}), Covering(1, {1}, {2, 3, 4})])
    assert validate_multicovering(g, mc)
    sp = spider_from_multicovering(g, mc)
    assert sp.apex == 2 and sp.mass == 2 and validate_spider(g, sp, 2 + 1)


def test_spiders_from_random_graphs():
    found = 0
    for seed in range(10):
        g = gnp(60, 0.08, seed)
        rep = build_spider(g, 0.5, 2, 0.01)
        if rep.ok:
            found += 1
            assert validate_spider(g, rep.certificate, spider_height_bound(0.5))
    assert found


def test_troupe_of_one_matches_spider():
    g = gnp(60, 0.08, 2)
    t = build_troupe(g, 0.5, 1, 2, 0.01)
    s = build_spider(g, 0.5, 2, 0.01)
    assert t.ok and s.ok and len(t.certificate.members) == 1


def test_two_community_troupes():
    found = 0
    for seed in range(10):
        g = two_communities(50, 0.2, seed)
        rep = build_troupe(g, 0.5, 2, 2, 0.01)
        if not rep.ok:
            continue
        found += 1
        troupe = rep.certificate
        assert validate_troupe(g, troupe, spider_height_bound(0.5)) and rep.checks["hearts_minimal"]
        lob = spiders_to_lobsters(g, troupe, 0.5, 0.01)
        if lob.ok:
            assert lob.certificate.kind == "lobster" and validate_troupe(g, lob.certificate)
    assert found


def test_heart_minimality_recheck():
    g = cycle_graph(6)
    # heart {0, 1, 2} attaches {3, 5}; without 2 it still attaches {2, 5}
    assert not heart_is_minimal(g, 0, {0, 1, 2}, set(range(6)), 3, 2)
    assert heart_is_minimal(g, 0, {0, 1, 2}, set(range(6)), 3, 3)


def test_lobsters_need_spiders():
    from purepairs.structures import Troupe
    with pytest.raises(ValueError):
        spiders_to_lobsters(cycle_graph(5), Troupe([], "lobster"), 0.5, 0.01)
