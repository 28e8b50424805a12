"""Layered structures (levellings, coverings, spiders, lobsters, troupes,
batteries), their validators, a line-oriented text format, and pattern
graphs built from branch vertices joined by paths and anchored cycles.

Validators never raise on a malformed structure; they return a
:class:`Report` naming the first rule that fails and a concrete witness.
Vertices outside ``V(G)`` are an input error and do raise.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .graph import (Graph, GraphInputError, as_mask, distances_within, is_connected_mask,
                    iter_mask, mask_of, members, popcount)

# --- data types -----------------------------------------------------------------


def _fs(x: Iterable[int]) -> frozenset:
    return frozenset(int(v) for v in x)


@dataclass(frozen=True)
class Levelling:
    """Layers ``L_0 .. L_k``; ``L_0`` should hold only the apex."""

    layers: tuple

    def __init__(self, layers):
        object.__setattr__(self, "layers", tuple(_fs(layer) for layer in layers))

    @property
    def height(self) -> int:
        return len(self.layers) - 1

    @property
    def apex(self) -> int:
        return min(self.layers[0])

    @property
    def base(self) -> frozenset:
        return self.layers[-1]

    @property
    def penultimate(self) -> frozenset:
        return self.layers[-2]

    @property
    def heart(self) -> frozenset:
        return frozenset().union(*self.layers[:-1])

    @property
    def vertices(self) -> frozenset:
        return frozenset().union(*self.layers)

    def with_base(self, base: Iterable[int]) -> "Levelling":
        return Levelling(self.layers[:-1] + (_fs(base),))

    def as_covering(self) -> "Covering":
        return Covering(self.apex, self.heart, self.base)


@dataclass(frozen=True)
class Covering:
    apex: int
    heart: frozenset
    base: frozenset

    def __init__(self, apex, heart, base):
        object.__setattr__(self, "apex", int(apex))
        object.__setattr__(self, "heart", _fs(heart))
        object.__setattr__(self, "base", _fs(base))

    @property
    def vertices(self) -> frozenset:
        return self.heart | self.base

    def with_base(self, base) -> "Covering":
        return Covering(self.apex, self.heart, base)


@dataclass(frozen=True)
class CoveringSequence:
    """Coverings with pairwise disjoint, pairwise anticomplete hearts.  The
    same type doubles as a multicovering when every base coincides."""

    terms: tuple

    def __init__(self, terms=()):
        object.__setattr__(self, "terms", tuple(terms))

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def base(self) -> frozenset:
        return self.terms[0].base if self.terms else frozenset()

    @property
    def vertices(self) -> frozenset:
        return frozenset().union(*(t.vertices for t in self.terms))

    def with_base(self, base) -> "CoveringSequence":
        return CoveringSequence(t.with_base(base) for t in self.terms)


Multicovering = CoveringSequence


@dataclass(frozen=True)
class Battery:
    multicoverings: tuple

    def __init__(self, multicoverings=()):
        object.__setattr__(self, "multicoverings", tuple(multicoverings))

    @property
    def type(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.multicoverings)

    def __len__(self) -> int:
        return len(self.multicoverings)


@dataclass(frozen=True)
class Spider:
    apex: int
    members: tuple

    def __init__(self, apex, members):
        object.__setattr__(self, "apex", int(apex))
        object.__setattr__(self, "members", tuple(members))

    @property
    def heart(self) -> frozenset:
        return frozenset().union(*(m.heart for m in self.members))

    @property
    def mass(self) -> int:
        return min((len(m.base) for m in self.members), default=0)


@dataclass(frozen=True)
class Lobster:
    apex: int
    members: tuple

    def __init__(self, apex, members):
        object.__setattr__(self, "apex", int(apex))
        object.__setattr__(self, "members", tuple(members))

    @property
    def heart(self) -> frozenset:
        return frozenset().union(*(m.heart for m in self.members))

    @property
    def mass(self) -> int:
        return min((len(m.base) for m in self.members), default=0)

    @property
    def height(self) -> int:
        return max((m.height for m in self.members), default=0)


@dataclass(frozen=True)
class Troupe:
    members: tuple
    kind: str = "spider"

    def __init__(self, members, kind="spider"):
        if kind not in ("spider", "lobster"):
            raise ValueError(f"troupe kind must be 'spider' or 'lobster', got {kind!r}")
        object.__setattr__(self, "members", tuple(members))
        object.__setattr__(self, "kind", kind)


@dataclass(frozen=True)
class Report:
    ok: bool
    rule: str | None = None
    witness: object = None
    info: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            extra = " ".join(f"{k}={v}" for k, v in self.info.items())
            return ("ok " + extra).strip()
        return f"violation: {self.rule} (witness {self.witness})"


OK = Report(True)


def _fail(rule: str, witness=None) -> Report:
    return Report(False, rule, witness)


def _edge_between(g: Graph, am: int, bm: int):
    """Lowest edge ``(u, v)`` with ``u`` in ``am`` and ``v`` in ``bm``, or None."""
    for u in iter_mask(am):
        hit = g.adj_mask(u) & bm
        if hit:
            return u, (hit & -hit).bit_length() - 1
    return None


# --- validators -------------------------------------------------------------------

def validate_levelling(g: Graph, lv: Levelling) -> Report:
    layers = [as_mask(g, layer) for layer in lv.layers]
    if len(layers) < 2:
        return _fail("height at least 1", len(layers) - 1)
    seen = 0
    for i, m in enumerate(layers):
        if seen & m:
            return _fail("layers disjoint", (i, (seen & m & -(seen & m)).bit_length() - 1))
        seen |= m
    if popcount(layers[0]) != 1:
        return _fail("|L_0| = 1", members(layers[0]))
    for i in range(1, len(layers)):
        bare = layers[i] & ~g.nbhd_mask(layers[i - 1])
        if bare:
            return _fail(f"L_{i - 1} covers L_{i}", (bare & -bare).bit_length() - 1)
    low = 0
    for i in range(2, len(layers)):
        low |= layers[i - 2]
        e = _edge_between(g, low, layers[i])
        if e is not None:
            return _fail(f"L_0..L_{i - 2} anticomplete to L_{i}", e)
    return Report(True, info={"height": len(layers) - 1})


def covering_height(g: Graph, cov: Covering) -> int | float:
    """``1 +`` eccentricity of the apex in ``G[H]``; ``inf`` when the apex
    does not reach the whole heart."""
    hm = as_mask(g, cov.heart)
    if not (hm >> cov.apex) & 1:
        return math.inf
    dist = distances_within(g, cov.apex, hm)
    if len(dist) < popcount(hm):
        return math.inf
    return 1 + max(dist.values())


def validate_covering(g: Graph, cov: Covering, max_height: float | None = None) -> Report:
    hm, bm = as_mask(g, cov.heart), as_mask(g, cov.base)
    if not 0 <= cov.apex < g.n:
        raise GraphInputError(f"apex {cov.apex} not in V(G)")
    if hm & bm:
        return _fail("heart and base disjoint", min(members(hm & bm)))
    if not (hm >> cov.apex) & 1:
        return _fail("apex in heart", cov.apex)
    bare = bm & ~g.nbhd_mask(hm)
    if bare:
        return _fail("heart covers base", (bare & -bare).bit_length() - 1)
    if not is_connected_mask(g, hm):
        return _fail("heart connected", None)
    h = covering_height(g, cov)
    if max_height is not None and h > max_height + 1e-9:
        return _fail("height bound", h)
    return Report(True, info={"height": h})


def _pairwise_hearts(g: Graph, hearts: Sequence[int], strip: int = 0) -> Report:
    for i in range(len(hearts)):
        for j in range(i + 1, len(hearts)):
            a, b = hearts[i] & ~strip, hearts[j] & ~strip
            if a & b:
                return _fail("hearts disjoint", (i, j, min(members(a & b))))
            e = _edge_between(g, a, b)
            if e is not None:
                return _fail("hearts anticomplete", (i, j, e))
    return OK


def validate_sequence(g: Graph, seq: CoveringSequence, max_height: float | None = None) -> Report:
    for i, term in enumerate(seq.terms):
        r = validate_covering(g, term, max_height)
        if not r:
            return _fail(f"term {i}: {r.rule}", r.witness)
    r = _pairwise_hearts(g, [as_mask(g, t.heart) for t in seq.terms])
    if not r:
        return r
    return Report(True, info={"length": len(seq)})


def validate_multicovering(g: Graph, mc: CoveringSequence, max_height: float | None = None) -> Report:
    r = validate_sequence(g, mc, max_height)
    if not r:
        return r
    for i, term in enumerate(mc.terms[1:], 1):
        if term.base != mc.terms[0].base:
            return _fail("common base", i)
    return Report(True, info={"length": len(mc), "base": len(mc.base)})


def validate_battery(g: Graph, battery: Battery, c: float, x: float, n: int | None = None) -> Report:
    """The four battery bullets, with mass floor ``x * 3^(1-d_i) * n``."""
    n = g.n if n is None else n
    vs = [as_mask(g, m.vertices) for m in battery.multicoverings]
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if vs[i] & vs[j]:
                return _fail("vertex sets disjoint", (i, j))
    for i, mc in enumerate(battery.multicoverings):
        if len(mc) < 1:
            return _fail("positive length", i)
        r = validate_multicovering(g, mc)
        if not r:
            return _fail(f"multicovering {i}: {r.rule}", r.witness)
        if any(covering_height(g, t) > 1 + 1 / c + 1e-9 for t in mc.terms):
            return _fail("height at most 1+1/c", i)
        if covering_height(g, mc.terms[0]) > 1 / c + 1e-9:
            return _fail("first term height at most 1/c", i)
        if len(mc.base) < x * 3 ** (1 - len(mc)) * n - 1e-9:
            return _fail("base mass", (i, len(mc.base)))
    bases = [as_mask(g, m.base) for m in battery.multicoverings]
    for i in range(len(vs)):
        for j in range(len(vs)):
            if i == j:
                continue
            e = _edge_between(g, vs[i] & ~bases[i], vs[j])
            if e is not None:
                return _fail("cross edges base to base", (i, j, e))
    return Report(True, info={"type": battery.type})


def validate_spider(g: Graph, spider: Spider, max_height: float | None = None) -> Report:
    for i, mem in enumerate(spider.members):
        if mem.apex != spider.apex:
            return _fail("shared apex", i)
        r = validate_covering(g, mem, max_height)
        if not r:
            return _fail(f"member {i}: {r.rule}", r.witness)
    r = _pairwise_hearts(g, [as_mask(g, m.heart) for m in spider.members], 1 << spider.apex)
    if not r:
        return r
    return Report(True, info={"length": len(spider.members), "mass": spider.mass})


def validate_lobster(g: Graph, lobster: Lobster) -> Report:
    a = lobster.apex
    strip = 1 << a
    for i, mem in enumerate(lobster.members):
        r = validate_levelling(g, mem)
        if not r:
            return _fail(f"member {i}: {r.rule}", r.witness)
        if mem.apex != a:
            return _fail("shared apex", i)
    hearts = [as_mask(g, m.heart) & ~strip for m in lobster.members]
    for i in range(len(hearts)):
        for j in range(i + 1, len(hearts)):
            if hearts[i] & hearts[j]:
                return _fail("hearts disjoint", (i, j))
    pens = [as_mask(g, m.penultimate) for m in lobster.members]
    bases = [as_mask(g, m.base) for m in lobster.members]
    for i, hi in enumerate(hearts):
        for j, mem in enumerate(lobster.members):
            if i == j:
                continue
            vj = as_mask(g, mem.vertices) & ~strip
            for u in iter_mask(hi):
                for v in iter_mask(g.adj_mask(u) & vj):
                    fwd = (pens[i] >> u) & 1 and (bases[j] >> v) & 1
                    back = (pens[i] >> v) & 1 and (bases[j] >> u) & 1
                    if not (fwd or back):
                        return _fail("cross edges penultimate to base", (i, j, (u, v)))
    return Report(True, info={"length": len(lobster.members), "mass": lobster.mass})


def validate_troupe(g: Graph, troupe: Troupe, max_height: float | None = None) -> Report:
    for i, t in enumerate(troupe.members):
        r = validate_spider(g, t, max_height) if troupe.kind == "spider" else validate_lobster(g, t)
        if not r:
            return _fail(f"{troupe.kind} {i}: {r.rule}", r.witness)
    r = _pairwise_hearts(g, [as_mask(g, t.heart) for t in troupe.members])
    if not r:
        return r
    if troupe.kind == "lobster":
        lvs = [m for t in troupe.members for m in t.members]
        for i, lv in enumerate(lvs):
            low = as_mask(g, frozenset().union(*lv.layers[:-2])) if lv.height >= 2 else 0
            for j, other in enumerate(lvs):
                if i == j:
                    continue
                e = _edge_between(g, low, as_mask(g, other.base))
                if e is not None:
                    return _fail("upper levels anticomplete to other bases", (i, j, e))
    return Report(True, info={"size": len(troupe.members)})


# --- vertical paths --------------------------------------------------------------

def levelling_vertical_path(g: Graph, lv: Levelling, target: int) -> tuple[int, ...]:
    """Induced path from the apex down to ``target`` using one vertex per
    layer; parents are the lowest-index neighbour one layer up."""
    depth = next((i for i, layer in enumerate(lv.layers) if target in layer), None)
    if depth is None:
        raise GraphInputError(f"vertex {target} not in the levelling")
    path = [target]
    for i in range(depth - 1, -1, -1):
        up = g.adj_mask(path[-1]) & as_mask(g, lv.layers[i])
        if not up:
            raise GraphInputError(f"layer {i} does not cover vertex {path[-1]}")
        path.append((up & -up).bit_length() - 1)
    return tuple(reversed(path))


# --- text format -----------------------------------------------------------------

_SIMPLE = {"levelling", "covering", "sequence", "multicovering", "battery", "spider",
           "lobster", "path", "cycle", "pair"}


def _fmt_set(xs) -> str:
    xs = sorted(xs)
    return " ".join(map(str, xs)) if xs else "-"


def _fmt_header(kind: str, **params) -> str:
    parts = [kind] + [f"{k}={v}" for k, v in params.items() if v is not None]
    return " ".join(parts)


def _ints(xs) -> str:
    return ",".join(map(str, xs)) if xs else "-"


def format_structure(obj, **params) -> str:
    """Serialise a structure; extra ``params`` land in the header line."""
    lines: list[str] = []
    if isinstance(obj, Levelling):
        lines.append(_fmt_header("levelling", **params))
        lines.extend(_fmt_set(layer) for layer in obj.layers)
    elif isinstance(obj, Covering):
        lines.append(_fmt_header("covering", apex=obj.apex, **params))
        lines += [_fmt_set(obj.heart), _fmt_set(obj.base)]
    elif isinstance(obj, CoveringSequence):
        kind = params.pop("kind", "sequence")
        lines.append(_fmt_header(kind, apexes=_ints([t.apex for t in obj.terms]), **params))
        for t in obj.terms:
            lines += [_fmt_set(t.heart), _fmt_set(t.base)]
    elif isinstance(obj, Battery):
        apexes = [t.apex for m in obj.multicoverings for t in m.terms]
        lines.append(_fmt_header("battery", lengths=_ints(obj.type), apexes=_ints(apexes), **params))
        for m in obj.multicoverings:
            for t in m.terms:
                lines += [_fmt_set(t.heart), _fmt_set(t.base)]
    elif isinstance(obj, Spider):
        lines.append(_fmt_header("spider", apex=obj.apex, **params))
        for m in obj.members:
            lines += [_fmt_set(m.heart), _fmt_set(m.base)]
    elif isinstance(obj, Lobster):
        lines.append(_fmt_header("lobster", apex=obj.apex,
                                 heights=_ints([m.height for m in obj.members]), **params))
        for m in obj.members:
            lines.extend(_fmt_set(layer) for layer in m.layers)
    elif isinstance(obj, Troupe):
        lines.append(_fmt_header("troupe", kind=obj.kind, size=len(obj.members), **params))
        for t in obj.members:
            lines.append(format_structure(t).rstrip("\n"))
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def format_path(seq, cycle: bool = False) -> str:
    return f"{'cycle' if cycle else 'path'}\n{' '.join(map(str, seq))}\n"


def format_pair(a, b, kind: str) -> str:
    return f"pair kind={kind}\n{_fmt_set(a)}\n{_fmt_set(b)}\n"


@dataclass(frozen=True)
class Block:
    kind: str
    params: dict
    rows: list


def _parse_row(line: str, lineno: int) -> tuple[int, ...]:
    if line == "-":
        return ()
    try:
        return tuple(int(tok) for tok in line.split())
    except ValueError:
        raise GraphInputError(f"line {lineno}: expected vertex ids, got {line!r}") from None


def _blocks(text: str) -> list[Block]:
    out: list[Block] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line[0].isalpha():
            kind, *rest = line.split()
            params = {}
            for tok in rest:
                if "=" not in tok:
                    raise GraphInputError(f"line {lineno}: bad header token {tok!r}")
                k, v = tok.split("=", 1)
                params[k] = v
            out.append(Block(kind, params, []))
        else:
            if not out:
                raise GraphInputError(f"line {lineno}: set line before any header")
            out[-1].rows.append(_parse_row(line, lineno))
    return out


def _int_list(s: str) -> list[int]:
    return [] if s in ("", "-") else [int(x) for x in s.split(",")]


def _pairs(rows, n_terms, what):
    if len(rows) != 2 * n_terms:
        raise GraphInputError(f"{what}: expected {2 * n_terms} set lines, found {len(rows)}")
    return [(rows[2 * i], rows[2 * i + 1]) for i in range(n_terms)]


def _build(block: Block, rest: list[Block]):
    kind, p, rows = block.kind, block.params, block.rows
    try:
        if kind == "levelling":
            return Levelling(rows)
        if kind == "covering":
            (h, b), = _pairs(rows, 1, kind)
            return Covering(int(p["apex"]), h, b)
        if kind in ("sequence", "multicovering"):
            apexes = _int_list(p.get("apexes", "-"))
            return CoveringSequence(Covering(a, h, b) for a, (h, b) in zip(apexes, _pairs(rows, len(apexes), kind)))
        if kind == "battery":
            lengths, apexes = _int_list(p["lengths"]), _int_list(p["apexes"])
            if sum(lengths) != len(apexes):
                raise GraphInputError("battery: lengths and apexes disagree")
            terms = [Covering(a, h, b) for a, (h, b) in zip(apexes, _pairs(rows, len(apexes), kind))]
            mcs, pos = [], 0
            for d in lengths:
                mcs.append(CoveringSequence(terms[pos:pos + d]))
                pos += d
            return Battery(mcs)
        if kind == "spider":
            a = int(p["apex"])
            return Spider(a, [Covering(a, h, b) for h, b in _pairs(rows, len(rows) // 2, kind)])
        if kind == "lobster":
            a = int(p["apex"])
            heights = _int_list(p["heights"])
            if sum(h + 1 for h in heights) != len(rows):
                raise GraphInputError("lobster: heights and layer lines disagree")
            mems, pos = [], 0
            for h in heights:
                mems.append(Levelling(rows[pos:pos + h + 1]))
                pos += h + 1
            return Lobster(a, mems)
        if kind in ("path", "cycle"):
            if len(rows) != 1:
                raise GraphInputError(f"{kind}: expected one vertex line")
            return rows[0]
        if kind == "pair":
            if len(rows) != 2:
                raise GraphInputError("pair: expected two set lines")
            return (frozenset(rows[0]), frozenset(rows[1]), p.get("kind", "anticomplete"))
        if kind == "troupe":
            size = int(p["size"])
            subs = []
            for _ in range(size):
                if not rest:
                    raise GraphInputError("troupe: missing member blocks")
                subs.append(_build(rest.pop(0), rest))
            return Troupe(subs, p.get("kind", "spider"))
    except KeyError as exc:
        raise GraphInputError(f"{kind}: missing header parameter {exc.args[0]}") from None
    except ValueError as exc:
        if isinstance(exc, GraphInputError):
            raise
        raise GraphInputError(f"{kind}: {exc}") from None
    raise GraphInputError(f"unknown structure kind {kind!r}")


def parse_structure(text: str):
    """Parse one structure; returns ``(kind, object, header params)``."""
    blocks = _blocks(text)
    if not blocks:
        raise GraphInputError("empty structure file")
    first = blocks.pop(0)
    obj = _build(first, blocks)
    if blocks:
        raise GraphInputError(f"trailing block {blocks[0].kind!r}")
    return first.kind, obj, dict(first.params)


def check_structure(g: Graph, kind: str, obj, params: dict | None = None) -> Report:
    """Dispatch to the validator for ``kind``; header ``params`` supply
    optional bounds (``max_height``, ``c``, ``x``)."""
    params = params or {}
    mh = float(params["max_height"]) if "max_height" in params else None
    if kind == "levelling":
        return validate_levelling(g, obj)
    if kind == "covering":
        return validate_covering(g, obj, mh)
    if kind == "sequence":
        return validate_sequence(g, obj, mh)
    if kind == "multicovering":
        return validate_multicovering(g, obj, mh)
    if kind == "battery":
        return validate_battery(g, obj, float(params.get("c", 1)), float(params.get("x", 0)))
    if kind == "spider":
        return validate_spider(g, obj, mh)
    if kind == "lobster":
        return validate_lobster(g, obj)
    if kind == "troupe":
        return validate_troupe(g, obj, mh)
    if kind in ("path", "cycle"):
        from .oracles import is_induced_cycle, is_induced_path
        for v in obj:
            if not 0 <= v < g.n:
                raise GraphInputError(f"vertex {v} not in V(G)")
        good = is_induced_cycle(g, obj) if kind == "cycle" else is_induced_path(g, obj)
        if "length" in params:
            want = int(params["length"])
            have = len(obj) if kind == "cycle" else len(obj) - 1
            if have != want:
                return _fail("length", have)
        return Report(True, info={"length": len(obj) - (kind == "path")}) if good else _fail(f"induced {kind}")
    if kind == "pair":
        from .graph import is_anticomplete_pair, is_complete_pair
        a, b, pk = obj
        if not a or not b:
            return _fail("nonempty sides")
        if a & b:
            return _fail("disjoint sides", min(a & b))
        good = is_complete_pair(g, a, b) if pk == "complete" else is_anticomplete_pair(g, a, b)
        return Report(True, info={"sizes": (len(a), len(b))}) if good else _fail(f"{pk} pair")
    raise GraphInputError(f"unknown structure kind {kind!r}")


# --- pattern graphs ----------------------------------------------------------------

@dataclass(frozen=True)
class PatternGraph:
    """Branch vertices ``0 .. num_branch-1`` plus internally disjoint paths
    ``(alpha, beta, length)`` and cycles ``(anchor, length)``; lengths count
    edges."""

    num_branch: int
    paths: tuple = ()
    cycles: tuple = ()

    def __init__(self, num_branch, paths=(), cycles=()):
        object.__setattr__(self, "num_branch", int(num_branch))
        object.__setattr__(self, "paths", tuple((int(a), int(b), int(l)) for a, b, l in paths))
        object.__setattr__(self, "cycles", tuple((int(a), int(l)) for a, l in cycles))
        self.check()

    def check(self) -> None:
        m = self.num_branch
        if m < 1:
            raise GraphInputError("a pattern needs at least one branch vertex")
        single = set()
        for a, b, l in self.paths:
            if not (0 <= a < m and 0 <= b < m):
                raise GraphInputError(f"path ends ({a}, {b}) out of range")
            if a == b:
                raise GraphInputError("a path needs distinct ends; use a cycle for a loop")
            if l < 1:
                raise GraphInputError("path length must be at least 1")
            if l == 1:
                key = (min(a, b), max(a, b))
                if key in single:
                    raise GraphInputError(f"parallel length-1 paths between {key}")
                single.add(key)
        for a, l in self.cycles:
            if not 0 <= a < m:
                raise GraphInputError(f"cycle anchor {a} out of range")
            if l < 3:
                raise GraphInputError("cycle length must be at least 3")

    @property
    def lengths(self) -> list[int]:
        return [l for _, _, l in self.paths] + [l for _, l in self.cycles]

    @property
    def size(self) -> int:
        return self.num_branch + sum(l - 1 for _, _, l in self.paths) + sum(l - 1 for _, l in self.cycles)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_branch
        for a, b, _ in self.paths:
            deg[a] += 1
            deg[b] += 1
        for a, _ in self.cycles:
            deg[a] += 2
        return deg

    def routes(self) -> list[tuple[int, int, int]]:
        """Paths then cycles, as ``(alpha, beta, length)`` with ``alpha ==
        beta`` for cycles."""
        return list(self.paths) + [(a, a, l) for a, l in self.cycles]

    def meets_regime(self, c: float) -> bool:
        return all(l >= 4 / c + 5 - 1e-9 for l in self.lengths)

    def canonical(self) -> "PatternGraph":
        paths = sorted((min(a, b), max(a, b), l) for a, b, l in self.paths)
        return PatternGraph(self.num_branch, paths, sorted(self.cycles))


def realize_pattern(p: PatternGraph) -> Graph:
    """Branch vertex ``i`` becomes vertex ``i``; interiors follow in route
    order, each listed from ``alpha`` towards ``beta``."""
    edges = []
    nxt = p.num_branch
    for a, b, l in p.routes():
        prev = a
        for _ in range(l - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, b))
    return Graph.from_edges(nxt, edges)


def route_vertices(p: PatternGraph) -> list[tuple[int, ...]]:
    """For each route, the realised vertex sequence from alpha to beta
    (cycles end back at the anchor)."""
    out = []
    nxt = p.num_branch
    for a, b, l in p.routes():
        seq = [a] + list(range(nxt, nxt + l - 1)) + [b]
        nxt += l - 1
        out.append(tuple(seq))
    return out


def extract_pattern(h: Graph, branch: Iterable[int] | None = None) -> tuple[PatternGraph, tuple[int, ...]]:
    """Decompose ``h`` into branch vertices, paths and anchored cycles.

    ``branch`` defaults to the vertices of degree other than two, plus the
    least vertex of every component that is a bare cycle.  Returns the
    canonical pattern and the host vertex of each pattern branch index.
    """
    if branch is None:
        bset = {v for v in range(h.n) if h.degree(v) != 2}
        seen = mask_of(bset)
        for v in range(h.n):
            if (seen >> v) & 1:
                continue
            comp = _component(h, v)
            if not comp & mask_of(bset):
                bset.add(min(iter_mask(comp)))
            seen |= comp
    else:
        bset = set(branch)
    order = tuple(sorted(bset))
    idx = {v: i for i, v in enumerate(order)}
    used_edges = set()
    paths, cycles = [], []
    for x in order:
        for y in sorted(h.neighbours(x)):
            if (x, y) in used_edges:
                continue
            prev, cur, length = x, y, 1
            walk = [(x, y)]
            while cur not in idx:
                nbrs = [w for w in h.neighbours(cur) if w != prev]
                if len(nbrs) != 1:
                    raise GraphInputError(f"vertex {cur} is not a degree-two interior vertex")
                prev, cur = cur, nbrs[0]
                walk.append((prev, cur))
                length += 1
            for u, v in walk:
                used_edges.add((u, v))
                used_edges.add((v, u))
            if cur == x:
                cycles.append((idx[x], length))
            else:
                paths.append((idx[x], idx[cur], length))
    covered = {u for e in used_edges for u in e} | bset
    if len(covered) != h.n:
        raise GraphInputError("some component has no branch vertex")
    return PatternGraph(len(order), paths, cycles).canonical(), order


def _component(h: Graph, v: int) -> int:
    seen = frontier = 1 << v
    while frontier:
        frontier = h.nbhd_mask(frontier) & ~seen
        seen |= frontier
    return seen


def parse_pattern(text: str) -> PatternGraph:
    """``branch=M`` then lines ``path=A,B,L`` and ``cycle=A,L``."""
    num, paths, cycles = None, [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise GraphInputError(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            nums = [int(x) for x in val.split(",")]
        except ValueError:
            raise GraphInputError(f"line {lineno}: non-integer value {val!r}") from None
        if key == "branch" and len(nums) == 1:
            num = nums[0]
        elif key == "path" and len(nums) == 3:
            paths.append(tuple(nums))
        elif key == "cycle" and len(nums) == 2:
            cycles.append(tuple(nums))
        else:
            raise GraphInputError(f"line {lineno}: unknown entry {line!r}")
    if num is None:
        raise GraphInputError("pattern file needs a branch=M line")
    return PatternGraph(num, paths, cycles)


def format_pattern(p: PatternGraph) -> str:
    lines = [f"branch={p.num_branch}"]
    lines += [f"path={a},{b},{l}" for a, b, l in p.paths]
    lines += [f"cycle={a},{l}" for a, l in p.cycles]
    return "\n".join(lines) + "\n"
