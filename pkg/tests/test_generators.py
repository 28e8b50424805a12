import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from purepairs.constructions.pathfinder import getpath2_structure, getpath_structure
from purepairs.detectors import _girth, branch_length, find_hole_of_length
from purepairs.generators import (LevellingPairSpec, comparability_graph, engineered_levelling_pair,
                                  engineered_pattern_host, gnp, pattern_library, realized_host, rng_for,
                                  theta_pattern)
from purepairs.graph import GraphInputError, complete_graph
from purepairs.structures import realize_pattern, validate_levelling


def test_rng_is_pcg64():
    assert isinstance(rng_for(1).bit_generator, np.random.PCG64)
    assert rng_for(7).random() == np.random.Generator(np.random.PCG64(7)).random()


def test_gnp_extremes():
    assert gnp(9, 0.0, 1).m == 0
    assert gnp(9, 1.0, 1) == complete_graph(9)


def test_gnp_edge_count():
    g = gnp(50, 0.5, 0)
    assert abs(g.m - 612.5) <= 4 * 17.5
    assert g.m == 590  # pinned for seed 0


@given(st.integers(0, 30), st.floats(0, 1), st.integers(0, 2 ** 32))
def test_gnp_is_deterministic(n, p, seed):
    assert gnp(n, p, seed) == gnp(n, p, seed)


def test_gnp_rejects_bad_probability():
    with pytest.raises(ValueError):
        gnp(5, 1.5)


def test_single_order_is_complete():
    assert comparability_graph(10, 1, 4) == complete_graph(10)


def test_comparability_regression():
    g = comparability_graph(8, 2, 0)
    assert sorted(g.edges()) == [(0, 2), (0, 4), (0, 5), (0, 6), (1, 2), (1, 4), (1, 5), (1, 6), (2, 3),
                                 (2, 4), (2, 5), (2, 7), (3, 4), (4, 5), (5, 6), (6, 7)]
    assert not find_hole_of_length(g, 5).found


@given(st.integers(2, 12), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_comparability_graphs_have_no_odd_holes(n, k, seed):
    g = comparability_graph(n, k, seed)
    for ell in (5, 7):
        out = find_hole_of_length(g, ell)
        assert out.verified and not out.found


def test_comparability_needs_an_order():
    with pytest.raises(ValueError):
        comparability_graph(5, 0)


# --- fixtures ----------------------------------------------------------------------

def test_matching_fixture():
    g, lv1, lv2 = engineered_levelling_pair(LevellingPairSpec(matching=True, cross_density=0.0), 0)
    assert len(lv1.base) == len(lv2.base) == 5 and lv1.height == lv2.height == 1
    assert all(sum(g.has_edge(u, v) for v in lv2.base) == 1 for u in lv1.base)


def test_shared_apex_fixture():
    g, lv1, lv2 = engineered_levelling_pair(LevellingPairSpec(s=2, t=2, shared_apex=True), 1)
    assert lv1.apex == lv2.apex


@st.composite
def specs(draw):
    relaxed = draw(st.booleans())
    matching = draw(st.booleans())
    b1 = draw(st.integers(1, 8))
    return LevellingPairSpec(
        s=draw(st.integers(1, 4)), t=draw(st.integers(1, 4)), width=draw(st.integers(1, 4)),
        base1=b1, base2=b1 if matching else draw(st.integers(1, 8)),
        cross_density=draw(st.floats(0, 1)), inner_density=draw(st.floats(0, 1)), matching=matching,
        parents=draw(st.integers(1, 3)), shared_apex=draw(st.booleans()) and not relaxed,
        shared_base=draw(st.integers(0, 3)) if relaxed else 0, relaxed=relaxed)


@given(specs(), st.integers(0, 10 ** 6))
def test_random_specs_pass_structure_checks(spec, seed):
    g, lv1, lv2 = engineered_levelling_pair(spec, seed)
    assert validate_levelling(g, lv1) and validate_levelling(g, lv2)
    check = getpath2_structure if spec.relaxed else getpath_structure
    assert check(g, lv1, lv2) is None
    assert engineered_levelling_pair(spec, seed)[0] == g


def test_two_hundred_seeded_specs():
    rng = np.random.default_rng(11)
    for i in range(200):
        relaxed = bool(rng.integers(2))
        spec = LevellingPairSpec(s=int(rng.integers(1, 4)), t=int(rng.integers(1, 4)),
                                 width=int(rng.integers(1, 4)), base1=int(rng.integers(1, 7)),
                                 base2=int(rng.integers(1, 7)), cross_density=float(rng.random()),
                                 relaxed=relaxed, shared_base=int(rng.integers(0, 3)) if relaxed else 0)
        g, lv1, lv2 = engineered_levelling_pair(spec, i)
        assert (getpath2_structure if relaxed else getpath_structure)(g, lv1, lv2) is None


@pytest.mark.parametrize("spec", [
    LevellingPairSpec(s=0),
    LevellingPairSpec(shared_base=1),
    LevellingPairSpec(matching=True, base1=3, base2=4),
    LevellingPairSpec(cross_density=2.0),
])
def test_infeasible_specs(spec):
    with pytest.raises(GraphInputError):
        engineered_levelling_pair(spec)


def test_spec_text():
    spec = LevellingPairSpec.from_text("s=2  # height\nrelaxed = yes\ncross_density=0.5\n\n")
    assert spec == LevellingPairSpec(s=2, relaxed=True, cross_density=0.5)
    with pytest.raises(GraphInputError):
        LevellingPairSpec.from_text("colour=red")


# --- patterns ---------------------------------------------------------------------

def test_library_branch_lengths():
    lib = pattern_library(5)
    assert branch_length(realize_pattern(lib["cycle9"])) == 9
    assert math.isinf(branch_length(realize_pattern(lib["path10"])))
    k4 = realize_pattern(lib["k4_5"])
    assert branch_length(k4) >= 5 and _girth(k4) == 15
    assert branch_length(realize_pattern(lib["theta5"])) == 5
    assert math.isinf(branch_length(realize_pattern(lib["star3_5"])))  # one branch vertex, no cycle


@pytest.mark.parametrize("name", sorted(pattern_library(5)))
def test_hosts_contain_their_pattern(name):
    from purepairs.detectors import is_induced_embedding
    p = pattern_library(5)[name]
    if min(p.lengths, default=5) < 5:
        pytest.skip("host needs routes of length five")
    g, images = engineered_pattern_host(p, noise=5, seed=2)
    assert is_induced_embedding(g, realize_pattern(p), images)


def test_realized_host():
    g = realized_host(theta_pattern(5), isolated=3)
    assert g.n == 17 and g.m == 15
