"""Covering sequences, their refinement, and multicoverings grown by the
battery merge."""
from __future__ import annotations

from ..detectors import EXACT_CAP, CoherenceParams, coherence_violation, is_eps_sparse
from ..graph import Graph, induced_subgraph, iter_mask, mask_of, members, popcount
from ..search import Budget, BudgetError, as_budget
from ..structures import (Battery, Covering, CoveringSequence, Levelling, validate_battery,
                          validate_multicovering, validate_sequence)
from .expansion import small_rad
from .params import (PERMISSIVE, STRICT, ConstructionFailure, ConstructionReport, check_mode,
                     greedy_minimal, need)


def _sparse_coherent(g: Graph, eps: float, c: float) -> dict:
    n = g.n
    out = {"eps_sparse": is_eps_sparse(g, eps)[0] if n else True}
    if n <= EXACT_CAP:
        out["coherent"] = coherence_violation(
            g, CoherenceParams(eps * n ** (1 - c), eps * n), "exact").verified
    else:
        out["coherent"] = "unchecked"
    return out


def _gate(checks: dict) -> None:
    bad = [k for k, v in checks.items() if v is False]
    if bad:
        raise ConstructionFailure("hypotheses", "unmet: " + ", ".join(bad))


def heart_base_ok(g: Graph, seq: CoveringSequence) -> bool:
    """Every heart is anticomplete to every later base."""
    for i, s in enumerate(seq.terms):
        nh = g.nbhd_mask(mask_of(s.heart))
        for t in seq.terms[i + 1:]:
            if nh & mask_of(t.base):
                return False
    return True


# --- covering sequence -------------------------------------------------------------

def _one_covering(g: Graph, w: int, c: float, mode: str, budget: Budget, depth: int):
    """Trimmed small-radius levelling inside ``G[W]``; returns the covering
    and the part of ``W`` it leaves untouched."""
    sub, order = induced_subgraph(g, iter_mask(w))
    if sub.n == 0:
        raise ConstructionFailure("covering sequence", "nothing left to work in", depth=depth)
    rep = small_rad(sub, c, mode, budget)
    if not rep.ok:
        raise ConstructionFailure("covering sequence", f"small radius step: {rep.reason}", depth=depth)
    layers = [mask_of(order[v] for v in layer) for layer in rep.certificate.levelling.layers]
    k = len(layers) - 1
    thr = need(sub.n / 4, mode)
    lk = layers[k]
    pen = greedy_minimal(layers[k - 1], lambda m: popcount(g.nbhd_mask(m) & lk), thr)
    if pen is None:
        raise ConstructionFailure("covering sequence", "trim failed", depth=depth)
    base = g.nbhd_mask(pen) & lk
    lv = Levelling([members(m) for m in layers[: k - 1]] + [members(pen), members(base)])
    upper = 0
    for m in layers[:k]:
        upper |= m
    # everything at distance < k goes, not just the trimmed heart: the rest
    # of L_{k-1} still touches L_{k-2}
    rest = w & ~upper & ~base
    return lv.as_covering(), rest


def _sequence(g: Graph, c: float, n_terms: int, eps: float, mode: str, budget: Budget,
              allow_partial: bool):
    terms, w, e = [], g.full_mask, eps
    n = g.n
    for i in range(1, n_terms + 1):
        budget.spend()
        try:
            cov, w = _one_covering(g, w, c, mode, budget, i)
        except ConstructionFailure:
            if allow_partial and terms:
                break
            raise
        if mode == STRICT and len(cov.base) < 2 ** (-i - 1) * n:
            raise ConstructionFailure("covering sequence", "base below 2^(-i-1) n", depth=i, size=len(cov.base))
        terms.append(cov)
        e *= 2
    return CoveringSequence(terms)


def build_covering_sequence(g: Graph, c: float, n_terms: int, eps: float, mode: str = PERMISSIVE,
                            budget=None) -> ConstructionReport:
    """``n_terms`` coverings of height at most ``1/c`` whose hearts are
    anticomplete to all later bases; term ``i`` is cut out of whatever the
    previous terms leave untouched."""
    check_mode(mode)
    budget = as_budget(budget)
    if n_terms < 0:
        raise ValueError("n_terms must be non-negative")
    checks: dict = {}
    try:
        if mode == STRICT:
            checks["eps_small"] = eps <= 2 ** (-n_terms - 2)
            checks.update(_sparse_coherent(g, eps, c))
            _gate(checks)
        seq = _sequence(g, c, n_terms, eps, mode, budget, allow_partial=False)
    except ConstructionFailure as exc:
        return ConstructionReport.failure(exc, checks)
    except BudgetError as exc:
        return ConstructionReport.failure(ConstructionFailure("budget", str(exc)), checks)
    checks["valid"] = bool(validate_sequence(g, seq, 1 / c))
    checks["heart_base"] = heart_base_ok(g, seq)
    checks["mass"] = all(len(t.base) >= 2 ** (-i - 1) * g.n for i, t in enumerate(seq.terms, 1))
    if not (checks["valid"] and checks["heart_base"]):
        return ConstructionReport.failure(ConstructionFailure("validation", "sequence failed re-check"), checks)
    return ConstructionReport.success(seq, checks, length=len(seq))


# --- refinement ------------------------------------------------------------------

def _refine(g: Graph, seq: CoveringSequence, n_target: int, multi_target: int):
    terms = seq.terms
    m = len(terms)
    hearts = [mask_of(t.heart) for t in terms]
    nh = [g.nbhd_mask(h) for h in hearts]
    bases, covered_by = [], []
    for i in range(m):
        b = mask_of(terms[i].base)
        cov = []
        for j in range(i + 1, m):
            yes, no = b & nh[j], b & ~nh[j]
            if popcount(yes) > popcount(no):
                b = yes
                cov.append(j)
            else:
                b = no
        bases.append(b)
        covered_by.append(cov)
    if n_target <= 1:
        return "disjoint", CoveringSequence([terms[0].with_base(members(bases[0]))] if m and n_target else [])
    for i in range(m):
        if len(covered_by[i]) >= multi_target:
            js = covered_by[i][:multi_target]
            return "multicovering", CoveringSequence(terms[j].with_base(members(bases[i])) for j in js)
    chosen = [0]
    while len(chosen) < n_target:
        nxt = next((j for j in range(m) if j not in chosen
                    and not any(nh[j] & bases[i] for i in chosen)), None)
        if nxt is None:
            raise ConstructionFailure("selection", "ran out of indices", chosen=len(chosen), needed=n_target)
        chosen.append(nxt)
    return "disjoint", CoveringSequence(terms[i].with_base(members(bases[i])) for i in chosen)


def disjoint_outcome_ok(g: Graph, seq: CoveringSequence) -> bool:
    bases = [mask_of(t.base) for t in seq.terms]
    hearts = [g.nbhd_mask(mask_of(t.heart)) for t in seq.terms]
    for i in range(len(bases)):
        for j in range(len(bases)):
            if i != j and (bases[i] & bases[j] or hearts[i] & bases[j]):
                return False
    return True


def refine_covering_sequence(g: Graph, seq: CoveringSequence, c: float, n_target: int,
                             mode: str = PERMISSIVE, multi_target: int | None = None) -> ConstructionReport:
    """Shrink each base to the larger side of every later heart's
    neighbourhood, then return either ``n_target`` terms with disjoint bases
    (each heart anticomplete to the other bases) or a multicovering.

    The certificate is ``(kind, sequence)`` with kind ``"disjoint"`` or
    ``"multicovering"``.
    """
    check_mode(mode)
    multi_target = n_target if multi_target is None else multi_target
    checks: dict = {}
    if mode == STRICT:
        checks["length"] = len(seq) >= (n_target - 1) ** 2 + 1
    checks["input_valid"] = bool(validate_sequence(g, seq)) and heart_base_ok(g, seq)
    try:
        _gate(checks)
        if len(seq) == 0 and n_target > 0:
            raise ConstructionFailure("selection", "empty input sequence")
        kind, out = _refine(g, seq, n_target, multi_target)
    except ConstructionFailure as exc:
        return ConstructionReport.failure(exc, checks)
    if kind == "multicovering":
        checks["valid"] = bool(validate_multicovering(g, out))
    else:
        checks["valid"] = bool(validate_sequence(g, out)) and disjoint_outcome_ok(g, out)
    if not checks["valid"]:
        return ConstructionReport.failure(ConstructionFailure("validation", f"{kind} outcome failed re-check"), checks)
    return ConstructionReport.success((kind, out), checks, kind=kind)


# --- the battery -----------------------------------------------------------------

def battery_potential(types) -> int:
    return sum(2 ** d for d in types)


def merge_type(types, t: int, i_star: int) -> tuple[int, ...]:
    """Type after merging battery member ``t`` into member ``i_star``."""
    if t == i_star:
        raise ValueError("cannot merge a member into itself")
    out = list(types)
    out[i_star] += 1
    del out[t]
    return tuple(out)


def merge_choice(types) -> int:
    """Member absorbed by the next merge: a smallest type, last on ties."""
    low = min(types)
    return max(i for i, d in enumerate(types) if d == low)


def _merge(g: Graph, battery: list[list[Covering]]) -> list[list[Covering]]:
    types = [len(mc) for mc in battery]
    t = merge_choice(types)
    bt = mask_of(battery[t][0].base)
    others = [i for i in range(len(battery)) if i != t]
    bm = {i: mask_of(battery[i][0].base) for i in others}

    def reaches(x: int) -> int:
        nx = g.nbhd_mask(x)
        return int(any(3 * popcount(nx & bm[i]) >= popcount(bm[i]) for i in others))

    x = greedy_minimal(bt, reaches, 1)
    if x is None:
        raise ConstructionFailure("merge", "no part of B_t sees a third of another base", type=tuple(types))
    nx = g.nbhd_mask(x)
    i_star = next(i for i in others if 3 * popcount(nx & bm[i]) >= popcount(bm[i]))
    first = battery[t][0]
    new = []
    for i in range(len(battery)):
        if i == t:
            continue
        if i == i_star:
            y = members(nx & bm[i])
            terms = [cv.with_base(y) for cv in battery[i]]
            terms.append(Covering(first.apex, first.heart | members(x), y))
        else:
            z = bm[i] & ~nx
            if not z:
                raise ConstructionFailure("merge", "a base emptied", member=i)
            terms = [cv.with_base(members(z)) for cv in battery[i]]
        new.append(terms)
    return new


def build_multicovering(g: Graph, c: float, n_target: int, eps: float, mode: str = PERMISSIVE,
                        budget=None, debug: bool = True) -> ConstructionReport:
    """Multicovering of length ``n_target`` and height at most ``1 + 1/c``.

    A refined covering sequence seeds a battery of singleton multicoverings;
    merges then run until some member reaches length ``n_target``.
    """
    check_mode(mode)
    budget = as_budget(budget)
    checks: dict = {}
    if n_target <= 0:
        return ConstructionReport.success(CoveringSequence(), checks, merges=0)
    q = 2 ** n_target
    p = (q - 1) ** 2 + 1
    x = 2.0 ** (-p - 1)
    history = []
    try:
        if mode == STRICT:
            checks["eps_regime"] = eps <= 2.0 ** (-(2 ** (2 * n_target)))
            checks.update(_sparse_coherent(g, eps, c))
            _gate(checks)
        seq = _sequence(g, c, p, eps, mode, budget, allow_partial=mode == PERMISSIVE)
        if mode == PERMISSIVE and len(seq) < p:
            checks["short_sequence"] = len(seq)
        rep = refine_covering_sequence(g, seq, c, min(q, len(seq)) if mode == PERMISSIVE else q,
                                       mode, multi_target=n_target)
        if not rep.ok:
            # a shorter selection still seeds a battery
            for want in range(min(q, len(seq)) - 1, 0, -1):
                rep = refine_covering_sequence(g, seq, c, want, mode, multi_target=n_target)
                if rep.ok:
                    break
        if not rep.ok:
            raise ConstructionFailure("refine", rep.reason or "no outcome")
        kind, refined = rep.certificate
        if kind == "multicovering":
            mc = CoveringSequence(refined.terms[:n_target])
            history.append(("multicovering outcome", len(refined)))
        else:
            battery = [[t] for t in refined.terms]
            history.append(("battery", tuple(len(b) for b in battery)))
            while max(len(b) for b in battery) < n_target:
                budget.spend()
                if len(battery) < 2:
                    raise ConstructionFailure("merge", "battery down to one member", type=(len(battery[0]),))
                before = tuple(len(b) for b in battery)
                battery = _merge(g, battery)
                history.append(("merge", before, tuple(len(b) for b in battery)))
                if debug:
                    r = validate_battery(g, Battery(CoveringSequence(b) for b in battery), c,
                                         x if mode == STRICT else 0.0)
                    if not r:
                        raise ConstructionFailure("merge", f"battery invalid: {r.rule}", witness=r.witness)
            mc = CoveringSequence(next(b for b in battery if len(b) >= n_target)[:n_target])
    except ConstructionFailure as exc:
        exc.summary.setdefault("history", history)
        return ConstructionReport.failure(exc, checks)
    except BudgetError as exc:
        return ConstructionReport.failure(ConstructionFailure("budget", str(exc), history=history), checks)
    checks["valid"] = bool(validate_multicovering(g, mc, 1 + 1 / c))
    checks["base_mass"] = len(mc.base) >= 3 * eps * g.n
    if not checks["valid"] or (mode == STRICT and not checks["base_mass"]):
        return ConstructionReport.failure(ConstructionFailure("validation", "multicovering failed re-check"), checks)
    return ConstructionReport.success(mc, checks, history=history)
