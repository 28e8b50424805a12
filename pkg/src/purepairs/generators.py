"""Seeded instance generators.

Every generator draws from ``numpy.random.Generator(PCG64(seed))`` in a
fixed order, so a seed reproduces the same graph on any platform with the
same numpy bit generator.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .graph import Graph, GraphInputError
from .structures import Levelling, PatternGraph, realize_pattern


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    """Binomial random graph; pairs ``(u, v)``, ``u < v``, are visited in
    lexicographic order and each is an edge when its draw is below ``p``."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = rng_for(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def comparability_graph(n: int, k: int, seed: int = 0) -> Graph:
    """Comparability graph of the intersection of ``k`` random linear orders
    (a poset of dimension at most ``k``)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = rng_for(seed)
    ranks = np.empty((k, n), dtype=np.int64)
    for i in range(k):
        ranks[i, rng.permutation(n)] = np.arange(n)
    less = np.ones((n, n), dtype=bool)
    for i in range(k):
        less &= ranks[i][:, None] < ranks[i][None, :]
    comp = less | less.T
    iu, ju = np.nonzero(np.triu(comp, k=1))
    return Graph.from_edges(n, zip(iu.tolist(), ju.tolist()))


# --- levelling-pair fixtures ---------------------------------------------------------

@dataclass(frozen=True)
class LevellingPairSpec:
    """Shape of a two-levelling fixture.

    ``relaxed`` builds the overlapping-base variant: ``shared_base`` vertices
    lie in both bases and the first penultimate level may see the second
    base.  Otherwise the vertex sets are disjoint apart from a shared apex.
    ``inner_density`` adds edges inside each base, which the path builders
    need for paths longer than the cross edge.
    """

    s: int = 1
    t: int = 1
    width: int = 2
    base1: int = 5
    base2: int = 5
    cross_density: float = 0.3
    matching: bool = False
    parents: int = 2
    shared_apex: bool = False
    shared_base: int = 0
    relaxed: bool = False
    inner_density: float = 0.0

    @classmethod
    def from_text(cls, text: str) -> "LevellingPairSpec":
        """Flat ``key=value`` lines; ``#`` starts a comment."""
        kinds = {f.name: f.type for f in fields(cls)}
        vals = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in kinds:
                raise GraphInputError(f"unknown spec key {key!r}")
            kind = kinds[key]
            if kind in (bool, "bool"):
                vals[key] = value.lower() in ("1", "true", "yes")
            elif kind in (float, "float"):
                vals[key] = float(value)
            else:
                vals[key] = int(value)
        return cls(**vals)


def _layered(rng, spec_parents: int, apex: int, sizes: list[int], start: int, edges: list) -> tuple[list[list[int]], int]:
    layers = [[apex]]
    nxt = start
    for size in sizes:
        layer = list(range(nxt, nxt + size))
        nxt += size
        prev = layers[-1]
        for v in layer:
            k = int(rng.integers(1, min(spec_parents, len(prev)) + 1))
            for u in rng.choice(prev, size=k, replace=False).tolist():
                edges.append((u, v))
        layers.append(layer)
    return layers, nxt


def engineered_levelling_pair(spec: LevellingPairSpec, seed: int = 0) -> tuple[Graph, Levelling, Levelling]:
    """Graph with two levellings meeting the structural hypotheses of the
    path builders (checked before returning).  Apex 0 roots the first
    levelling; the second apex follows the first levelling's vertices."""
    from .constructions.pathfinder import getpath2_structure, getpath_structure

    sp = spec
    if min(sp.s, sp.t) < 1 or sp.width < 1 or min(sp.base1, sp.base2) < 1 or sp.parents < 1:
        raise GraphInputError("heights, width, base sizes and parents must be positive")
    if not (0 <= sp.cross_density <= 1 and 0 <= sp.inner_density <= 1):
        raise GraphInputError("densities must lie in [0, 1]")
    if sp.shared_base and not sp.relaxed:
        raise GraphInputError("shared base vertices need the relaxed variant")
    if sp.matching and sp.base1 != sp.base2:
        raise GraphInputError("a matching needs equal base sizes")
    rng = rng_for(seed)
    edges: list = []
    l1, nxt = _layered(rng, sp.parents, 0, [sp.width] * (sp.s - 1) + [sp.base1], 1, edges)
    if sp.shared_apex:
        a2 = 0
    else:
        a2, nxt = nxt, nxt + 1
    l2, nxt = _layered(rng, sp.parents, a2, [sp.width] * (sp.t - 1) + [sp.base2], nxt, edges)
    shared = list(range(nxt, nxt + sp.shared_base))
    nxt += sp.shared_base
    for v in shared:
        edges.append((int(rng.choice(l1[-2])), v))
        edges.append((int(rng.choice(l2[-2])), v))
    b1, b2 = l1[-1], l2[-1]
    if sp.matching:
        edges.extend(zip(b1, b2))
    for u in b1:
        for v in b2:
            if rng.random() < sp.cross_density:
                edges.append((u, v))
    for base in (b1 + shared, b2):
        for i, u in enumerate(base):
            for v in base[i + 1:]:
                if rng.random() < sp.inner_density:
                    edges.append((u, v))
    if sp.relaxed:
        for u in l1[-2]:
            for v in b2:
                if rng.random() < sp.cross_density:
                    edges.append((u, v))
    g = Graph.from_edges(nxt, set((min(e), max(e)) for e in edges if e[0] != e[1]))
    lv1 = Levelling([set(x) for x in l1[:-1]] + [set(b1) | set(shared)])
    lv2 = Levelling([set(x) for x in l2[:-1]] + [set(b2) | set(shared)])
    problem = (getpath2_structure if sp.relaxed else getpath_structure)(g, lv1, lv2)
    if problem:
        raise GraphInputError(f"fixture failed its structural check: {problem}")
    return g, lv1, lv2


# --- patterns ------------------------------------------------------------------------

def path_pattern(length: int) -> PatternGraph:
    return PatternGraph(2, [(0, 1, length)])


def cycle_pattern(length: int) -> PatternGraph:
    return PatternGraph(1, cycles=[(0, length)])


def theta_pattern(length: int, k: int = 3) -> PatternGraph:
    return PatternGraph(2, [(0, 1, length)] * k)


def subdivided_star(legs: int, length: int) -> PatternGraph:
    return PatternGraph(legs + 1, [(0, i, length) for i in range(1, legs + 1)])


def subdivided_clique(m: int, length: int) -> PatternGraph:
    return PatternGraph(m, [(i, j, length) for i in range(m) for j in range(i + 1, m)])


def pattern_library(length: int = 5) -> dict[str, PatternGraph]:
    """Named patterns; subdivided entries use ``length`` per route."""
    return {
        "path10": path_pattern(9),
        "cycle9": cycle_pattern(9),
        f"cycle{2 * length}": cycle_pattern(2 * length),
        f"theta{length}": theta_pattern(length),
        f"star3_{length}": subdivided_star(3, length),
        f"k4_{length}": subdivided_clique(4, length),
    }


# --- hosts for pattern assembly ---------------------------------------------------

def engineered_pattern_host(pattern: PatternGraph, noise: int = 0, noise_p: float = 0.1,
                            seed: int = 0) -> tuple[Graph, tuple[int, ...]]:
    """Host containing ``pattern`` as an induced subgraph, laid out so that
    height-two lobsters exist at the branch vertices.

    A route of length ``l`` from ``alpha`` to ``beta`` becomes
    ``A_alpha, y_1, c_1, ..., c_r, x, A_beta`` with ``r = l - 3``, plus extra
    hubs ``y_2 .. y_(r-1)`` on ``A_alpha`` with ``y_j ~ c_j``.  Hubs are
    numbered along the chain.  ``noise`` extra vertices attach at random to
    chain vertices and to each other only.  Returns the host and the host
    vertex of each vertex of ``realize_pattern(pattern)``.
    """
    if any(l < 5 for l in pattern.lengths):
        raise GraphInputError("every route needs length at least 5")
    rng = rng_for(seed)
    edges = []
    nxt = pattern.num_branch
    chains = []
    images = list(range(pattern.num_branch))
    for a, b, l in pattern.routes():
        r = l - 3
        hubs = list(range(nxt, nxt + r - 1))
        nxt += r - 1
        chain = list(range(nxt, nxt + r))
        nxt += r
        x = nxt
        nxt += 1
        for y, cv in zip(hubs, chain):
            edges += [(a, y), (y, cv)]
        edges += list(zip(chain, chain[1:]))
        edges += [(chain[-1], x), (x, b)]
        chains.extend(chain)
        images.extend([hubs[0]] + chain + [x])
    extra = list(range(nxt, nxt + noise))
    nxt += noise
    for i, v in enumerate(extra):
        for u in chains + extra[:i]:
            if rng.random() < noise_p:
                edges.append((u, v))
    g = Graph.from_edges(nxt, edges)
    return g, tuple(images)


def realized_host(pattern: PatternGraph, isolated: int = 0) -> Graph:
    """``realize_pattern(pattern)`` plus isolated vertices."""
    h = realize_pattern(pattern)
    return Graph.from_edges(h.n + isolated, h.edges())
