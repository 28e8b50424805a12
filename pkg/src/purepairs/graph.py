"""Immutable simple graphs over dense integer vertices.

Adjacency is stored as one Python ``int`` bitmask per vertex, so set algebra
over vertex subsets is word-parallel.  Public functions accept any iterable of
vertices and return ``frozenset`` objects; the ``*_mask`` helpers expose the
bitmask form for the search kernels.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Union

VertexSet = frozenset


class GraphInputError(ValueError):
    """Raised for malformed graphs, vertex sets or edge-list files."""


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_mask(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def members(mask: int) -> frozenset:
    return frozenset(iter_mask(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Graph:
    """A finite simple graph on vertices ``0 .. n-1``.

    Instances are immutable; build them with :meth:`from_edges` or
    :meth:`from_masks`.
    """

    __slots__ = ("_n", "_adj", "_m")

    def __init__(self, n: int, adj: tuple[int, ...]):
        self._n = n
        self._adj = adj
        self._m = sum(popcount(a) for a in adj) // 2

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise GraphInputError(f"negative vertex count {n}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphInputError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_masks(cls, adj: Iterable[int]) -> "Graph":
        adj = tuple(adj)
        n = len(adj)
        for v, a in enumerate(adj):
            if a >> n or (a >> v) & 1:
                raise GraphInputError(f"bad adjacency mask at vertex {v}")
            for u in iter_mask(a):
                if not (adj[u] >> v) & 1:
                    raise GraphInputError(f"asymmetric adjacency between {u} and {v}")
        return cls(n, adj)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return self._n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"

    @property
    def vertices(self) -> range:
        return range(self._n)

    @property
    def full_mask(self) -> int:
        return (1 << self._n) - 1

    def adj_mask(self, v: int) -> int:
        return self._adj[v]

    @property
    def masks(self) -> tuple[int, ...]:
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._adj[u] >> v) & 1)

    def neighbours(self, v: int) -> frozenset:
        return members(self._adj[v])

    def degree(self, v: int) -> int:
        return popcount(self._adj[v])

    def degrees(self) -> list[int]:
        return [popcount(a) for a in self._adj]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, a in enumerate(self._adj):
            for v in iter_mask(a >> (u + 1)):
                yield u, u + 1 + v

    def nbhd_mask(self, mask: int) -> int:
        """Union of the neighbourhoods of the vertices in ``mask``."""
        out = 0
        adj = self._adj
        while mask:
            low = mask & -mask
            out |= adj[low.bit_length() - 1]
            mask ^= low
        return out

    def check_mask(self, mask: int) -> None:
        if mask < 0 or mask >> self._n:
            raise GraphInputError("vertex set not contained in V(G)")


SetLike = Union[Iterable[int], int]


def as_mask(g: Graph, x: SetLike) -> int:
    if isinstance(x, int):
        m = x
    else:
        m = 0
        for v in x:
            if not isinstance(v, int) or not 0 <= v < g.n:
                raise GraphInputError(f"vertex {v!r} not in V(G) (n={g.n})")
            m |= 1 << v
    g.check_mask(m)
    return m


def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph(g.n, tuple(full & ~a & ~(1 << v) for v, a in enumerate(g.masks)))


def induced_subgraph(g: Graph, x: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Return ``(G[X], index_map)`` where ``index_map[i]`` is the host vertex
    that became vertex ``i``; vertices keep their relative order."""
    order = tuple(sorted(members(as_mask(g, x))))
    pos = {v: i for i, v in enumerate(order)}
    adj = []
    for v in order:
        a = 0
        for u in iter_mask(g.adj_mask(v)):
            if u in pos:
                a |= 1 << pos[u]
        adj.append(a)
    return Graph(len(order), tuple(adj)), order


def open_nbhd(g: Graph, x: SetLike) -> frozenset:
    m = as_mask(g, x)
    return members(g.nbhd_mask(m) & ~m)


def closed_nbhd(g: Graph, x: SetLike) -> frozenset:
    m = as_mask(g, x)
    return members(g.nbhd_mask(m) | m)


def _disjoint_masks(g: Graph, a: SetLike, b: SetLike) -> tuple[int, int]:
    am, bm = as_mask(g, a), as_mask(g, b)
    if am & bm:
        raise GraphInputError("sets must be disjoint")
    return am, bm


def is_complete_pair(g: Graph, a: SetLike, b: SetLike) -> bool:
    am, bm = _disjoint_masks(g, a, b)
    return all(g.adj_mask(v) & bm == bm for v in iter_mask(am))


def is_anticomplete_pair(g: Graph, a: SetLike, b: SetLike) -> bool:
    am, bm = _disjoint_masks(g, a, b)
    return g.nbhd_mask(am) & bm == 0


def covers(g: Graph, a: SetLike, b: SetLike) -> bool:
    """True iff every vertex of ``b`` has a neighbour in ``a``."""
    am, bm = _disjoint_masks(g, a, b)
    return bm & ~g.nbhd_mask(am) == 0


def bfs_layers_mask(g: Graph, u: int, within: int | None = None) -> tuple[list[int], int]:
    """BFS distance classes from ``u`` inside ``G[within]`` as masks.

    Returns ``(layers, unreached)``.
    """
    allowed = g.full_mask if within is None else within
    if not (allowed >> u) & 1:
        raise GraphInputError(f"start vertex {u} not in the allowed set")
    seen = 1 << u
    frontier = seen
    layers = [frontier]
    while True:
        nxt = g.nbhd_mask(frontier) & allowed & ~seen
        if not nxt:
            break
        layers.append(nxt)
        seen |= nxt
        frontier = nxt
    return layers, allowed & ~seen


def bfs_layers(g: Graph, u: int) -> tuple[list[frozenset], frozenset]:
    """Distance classes from ``u``; the second item lists unreached vertices."""
    if not 0 <= u < g.n:
        raise GraphInputError(f"vertex {u} not in V(G)")
    layers, rest = bfs_layers_mask(g, u)
    return [members(m) for m in layers], members(rest)


def distances_within(g: Graph, u: int, within: int) -> dict[int, int]:
    layers, _ = bfs_layers_mask(g, u, within)
    return {v: i for i, layer in enumerate(layers) for v in iter_mask(layer)}


def is_connected_mask(g: Graph, m: int) -> bool:
    if m == 0:
        return True
    start = (m & -m).bit_length() - 1
    _, rest = bfs_layers_mask(g, start, m)
    return rest == 0


def is_connected_set(g: Graph, x: SetLike) -> bool:
    """``G[X]`` connected; the empty set counts as connected."""
    return is_connected_mask(g, as_mask(g, x))


# --- named graphs used throughout tests and generators -------------------

def path_graph(k: int) -> Graph:
    """Path with ``k`` vertices."""
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def empty_graph(k: int) -> Graph:
    return Graph(k, (0,) * k)


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for h in graphs:
        edges.extend((u + offset, v + offset) for u, v in h.edges())
        offset += h.n
    return Graph.from_edges(offset, edges)


# --- edge-list text format ------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v`` with ``u < v``."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphInputError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((lineno, int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphInputError(f"line {lineno}: non-integer token in {raw!r}") from None
    if not rows:
        raise GraphInputError("missing header line 'n m'")
    _, n, m = rows[0]
    body = rows[1:]
    if n < 0 or m < 0:
        raise GraphInputError("header values must be non-negative")
    if len(body) != m:
        raise GraphInputError(f"header announces {m} edges, found {len(body)}")
    seen = set()
    for lineno, u, v in body:
        if not 0 <= u < v < n:
            raise GraphInputError(f"line {lineno}: need 0 <= u < v < n, got {u} {v}")
        if (u, v) in seen:
            raise GraphInputError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add((u, v))
    return Graph.from_edges(n, [(u, v) for _, u, v in body])


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))
