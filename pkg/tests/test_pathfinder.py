import itertools

import pytest
from hypothesis import given, strategies as st

from purepairs.constructions.params import ParamSet, need, STRICT, PERMISSIVE
from purepairs.constructions.pathfinder import (InducedPathOutcome, PartitionOutcome, find_path, get_path,
                                                get_path_relaxed, repeat_bound, repeat_index)
from purepairs.generators import LevellingPairSpec, engineered_levelling_pair
from purepairs.graph import Graph, GraphInputError, empty_graph
from purepairs.oracles import induced_path_oracle
from purepairs.structures import Levelling

from checks import find_path_problem, path_certificate_problem


def scan(rho, k, values):
    """Least valid index by direct scan."""
    K = len(values)
    for i in range(1, K - k + 1):
        if all(rho * values[i - 1] >= values[j - 1] for j in range(i + 1, i + k + 1)):
            return i
    return None


# --- parameters ----------------------------------------------------------------

def test_paramset_derived_values():
    p = ParamSet(0.5, 0.01, 100, d=0.2, p=3)
    assert p.inv_c == 2 and p.r == 4 and p.rho == pytest.approx(10.0)
    assert p.K(2) == 15 and p.k(2) == 3
    assert p.w(1) == pytest.approx(0.2 / 12)


def test_paramset_rejects_bad_constants():
    with pytest.raises(ValueError):
        ParamSet(0.3, 0.1, 10)
    with pytest.raises(ValueError):
        ParamSet(1.0, 0.0, 10)


def test_need_rounding():
    assert need(2.0, STRICT) == 2 and need(2.1, STRICT) == 3
    assert need(1e-9, STRICT) == 0 and need(1e-9, PERMISSIVE) == 1


# --- repeat index --------------------------------------------------------------

@pytest.mark.parametrize("rho,k,values,want", [
    (1, 1, (0, 0, 0), 1),
    (2, 2, (0, 1, 1, 0, 0, 1, 1), 2),
    (2, 1, (0, 1, 2, 4), 2),
])
def test_repeat_examples(rho, k, values, want):
    assert repeat_index(rho, k, values) == want == scan(rho, k, values)


def test_repeat_input_errors():
    with pytest.raises(ValueError):
        repeat_index(2, 3, [1, 2, 3])
    with pytest.raises(ValueError):
        repeat_index(0.5, 1, [1, 2])
    with pytest.raises(ValueError):
        repeat_index(2, 1, [1, -1])


def test_repeat_can_fail_when_entries_grow():
    assert repeat_index(1, 1, (0, 1, 2, 3)) is None


@given(st.integers(1, 3), st.data())
def test_repeat_matches_scan(rho, data):
    values = data.draw(st.lists(st.integers(0, 5), min_size=2, max_size=12))
    k = data.draw(st.integers(1, len(values) - 1))
    assert repeat_index(rho, k, values) == scan(rho, k, values)


def test_repeat_exhaustive_small():
    for K in range(2, 6):
        for k in range(1, K):
            for rho in (1, 2, 3):
                bound = repeat_bound(rho, K, k)
                for vals in itertools.product(range(3), repeat=K):
                    got = repeat_index(rho, k, vals)
                    if all(v < bound for v in vals):
                        assert got is not None
                    assert got == scan(rho, k, vals)


# --- find_path -----------------------------------------------------------------

P1 = ParamSet(1.0, 1e-6, 1)


def test_anticomplete_base_case_partitions():
    g = empty_graph(20)
    blocks = [{i} for i in range(2, 10)]  # K = 3 - 1 = 2 for ell = 1
    rep = find_path(g, P1, 1, {0, 1}, blocks[:2])
    cert = rep.certificate
    assert rep.ok and isinstance(cert, PartitionOutcome)
    assert all(cert.part(i) == {0, 1} for i in range(1, cert.K - cert.k + 1))


def test_single_edge_gives_length_one():
    g = Graph.from_edges(4, [(0, 3)])
    rep = find_path(g, P1, 1, {0}, [{2}, {3}])
    assert rep.ok and rep.certificate == InducedPathOutcome((0, 3), (2,))


def test_engineered_length_two():
    # b0 -> b_1 (star), b_1 matched into b_3; r = 3, K = 8, k = 2
    n = 2 + 3 * 8
    blocks = [set(range(2 + 3 * j, 5 + 3 * j)) for j in range(8)]
    edges = [(0, v) for v in blocks[0]] + [(u, u + 6) for u in sorted(blocks[0])]
    g = Graph.from_edges(n, edges)
    rep = find_path(g, P1, 2, {0, 1}, blocks)
    assert rep.ok and isinstance(rep.certificate, InducedPathOutcome)
    cert = rep.certificate
    assert cert.indices == (1, 3) and find_path_problem(g, cert, {0, 1}, blocks) is None
    assert induced_path_oracle(g, cert.path[0], cert.path[-1], 2)[0]


def test_block_geometry_errors():
    g = empty_graph(6)
    with pytest.raises(GraphInputError):
        find_path(g, P1, 1, {0}, [{0}, {1}])
    with pytest.raises(GraphInputError):
        find_path(g, P1, 1, set(), [{1}, {2}])
    with pytest.raises(GraphInputError):
        find_path(g, P1, 1, {0}, [{1}])


@st.composite
def block_instances(draw):
    ell = draw(st.integers(1, 2))
    K = 3 ** ell - 1
    size = draw(st.integers(1, 3))
    n = size * (K + 1)
    p = draw(st.floats(0.05, 0.5))
    seed = draw(st.integers(0, 10 ** 6))
    from purepairs.generators import gnp
    g = gnp(n, p, seed)
    b0 = set(range(size))
    blocks = [set(range(size * (j + 1), size * (j + 2))) for j in range(K)]
    return g, ell, b0, blocks


@given(block_instances())
def test_find_path_outcomes_are_sound(inst):
    g, ell, b0, blocks = inst
    rep = find_path(g, P1, ell, b0, blocks)
    if rep.ok:
        assert find_path_problem(g, rep.certificate, b0, blocks) is None


# --- get_path ------------------------------------------------------------------

def params_for(g, d=0.2):
    return ParamSet(1.0, 1e-9, g.n, d=d)


def test_matching_fixture_gives_length_three():
    g, lv1, lv2 = engineered_levelling_pair(LevellingPairSpec(matching=True, cross_density=0.0), 0)
    assert induced_path_oracle(g, lv1.apex, lv2.apex, 3)[0]
    rep = get_path(g, params_for(g), 1, lv1, lv2)
    assert rep.ok and path_certificate_problem(g, rep.certificate, 1, lv1, lv2) is None
    assert rep.certificate.length == 3


@pytest.mark.parametrize("ell", [1, 2])
def test_shared_apex_gives_cycle(ell):
    spec = LevellingPairSpec(s=2, t=2, width=4, base1=12, base2=12, cross_density=0.2,
                             inner_density=0.2, parents=1, shared_apex=True)
    g, lv1, lv2 = engineered_levelling_pair(spec, 0)
    rep = get_path(g, params_for(g), ell, lv1, lv2)
    assert rep.ok and rep.certificate.cycle and rep.certificate.length == ell + 4
    assert path_certificate_problem(g, rep.certificate, ell, lv1, lv2) is None


def test_height_one_shared_apex_fails_cleanly():
    # the common apex sees the whole first base, so no cycle can leave it
    g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (2, 4)])
    rep = get_path(g, params_for(g, 0.3), 1, Levelling([{0}, {1, 2}]), Levelling([{0}, {3, 4}]))
    assert not rep.ok and rep.stage == "goodness escalation"


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_taller_fixtures(ell):
    spec = LevellingPairSpec(s=2, t=2, width=4, base1=16, base2=16, cross_density=0.2,
                             inner_density=0.2, parents=1)
    found = 0
    for seed in range(12):
        g, lv1, lv2 = engineered_levelling_pair(spec, seed)
        rep = get_path(g, params_for(g), ell, lv1, lv2, budget=200000)
        if rep.ok:
            found += 1
            assert path_certificate_problem(g, rep.certificate, ell, lv1, lv2) is None
        else:
            assert rep.stage
    assert found > 0


def test_relaxed_on_disjoint_bases_matches_contract():
    spec = LevellingPairSpec(s=2, t=2, width=3, base1=10, base2=10, parents=1)
    g, lv1, lv2 = engineered_levelling_pair(spec, 3)
    rep = get_path_relaxed(g, params_for(g), 1, lv1, lv2)
    assert rep.ok and path_certificate_problem(g, rep.certificate, 1, lv1, lv2, relaxed=True) is None


def test_fully_shared_base():
    # two height-2 levellings whose bases coincide
    edges = [(0, 1), (1, 3), (1, 4), (2, 5), (2, 6), (5, 3), (6, 4), (3, 7)]
    g = Graph.from_edges(8, edges + [(2, 7)])
    lv1 = Levelling([{0}, {1}, {3, 4}])
    lv2 = Levelling([{2}, {5, 6}, {3, 4}])
    rep = get_path_relaxed(g, params_for(g, 0.3), 1, lv1, lv2)
    if rep.ok:
        assert path_certificate_problem(g, rep.certificate, 1, lv1, lv2, relaxed=True) is None
    else:
        assert rep.stage


@pytest.mark.parametrize("seed", range(15))
def test_relaxed_fixtures_are_sound(seed):
    spec = LevellingPairSpec(s=2, t=2, width=4, base1=12, base2=12, cross_density=0.2,
                             inner_density=0.2, parents=1, relaxed=True, shared_base=2)
    g, lv1, lv2 = engineered_levelling_pair(spec, seed)
    for ell in (1, 2):
        rep = get_path_relaxed(g, params_for(g), ell, lv1, lv2, budget=200000)
        if rep.ok:
            assert path_certificate_problem(g, rep.certificate, ell, lv1, lv2, relaxed=True) is None


def test_structure_violation_is_reported():
    g, lv1, lv2 = engineered_levelling_pair(LevellingPairSpec(), 0)
    g2 = Graph.from_edges(g.n, list(g.edges()) + [(lv1.apex, lv2.apex)])
    rep = get_path(g2, params_for(g2), 1, lv1, lv2)
    assert not rep.ok and rep.stage == "input"


def test_strict_mode_reports_unmet_hypotheses():
    g, lv1, lv2 = engineered_levelling_pair(LevellingPairSpec(), 0)
    rep = get_path(g, ParamSet(1.0, 0.1, g.n, d=0.01), 1, lv1, lv2, mode=STRICT)
    assert not rep.ok and rep.stage == "hypotheses"
