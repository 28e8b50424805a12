"""Parameters, reports and small helpers shared by the constructions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from ..graph import iter_mask, popcount

STRICT, PERMISSIVE = "strict", "permissive"


def check_mode(mode: str) -> None:
    if mode not in (STRICT, PERMISSIVE):
        raise ValueError(f"mode must be 'strict' or 'permissive', got {mode!r}")


@dataclass(frozen=True)
class ParamSet:
    """Constants tying a construction to its lemma.  Everything derived is a
    property, so nothing can go stale."""

    c: float
    eps: float
    n: int
    d: float = 0.0
    p: int = 1

    def __post_init__(self):
        inv = 1 / self.c
        if self.c <= 0 or abs(inv - round(inv)) > 1e-9:
            raise ValueError(f"1/c must be a positive integer (c = {self.c})")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    @property
    def inv_c(self) -> int:
        return round(1 / self.c)

    @property
    def r(self) -> int:
        return 2 + self.inv_c

    @property
    def rho(self) -> float:
        return self.n ** self.c

    def K(self, ell: int) -> int:
        return self.r ** ell - 1

    def k(self, ell: int) -> int:
        return self.r ** (ell - 1) - 1

    def k_i(self, i: int) -> int:
        return self.r ** i - 1

    def d_i(self, i: int) -> float:
        return self.r ** (2 * i) * self.eps

    def w(self, h: int) -> float:
        return (4 * self.p) ** (-h) * self.d

    def with_n(self, n: int) -> "ParamSet":
        return ParamSet(self.c, self.eps, n, self.d, self.p)

    def with_eps(self, eps: float) -> "ParamSet":
        return ParamSet(self.c, eps, self.n, self.d, self.p)


def need(x: float, mode: str) -> int:
    """Cardinality meeting the real threshold ``x``; permissive runs never
    ask for fewer than one vertex."""
    k = max(0, math.ceil(x - 1e-9))
    return max(1, k) if mode == PERMISSIVE else k


class ConstructionFailure(Exception):
    def __init__(self, stage: str, reason: str, **summary):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason
        self.summary = summary


@dataclass
class ConstructionReport:
    """``Success(certificate)`` or ``Failure(stage, reason, summary)``."""

    ok: bool
    certificate: Any = None
    stage: str | None = None
    reason: str | None = None
    summary: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @classmethod
    def success(cls, certificate, checks=None, **summary) -> "ConstructionReport":
        return cls(True, certificate, summary=summary, checks=dict(checks or {}))

    @classmethod
    def failure(cls, exc: ConstructionFailure, checks=None) -> "ConstructionReport":
        return cls(False, None, exc.stage, exc.reason, dict(exc.summary), dict(checks or {}))

    def unwrap(self):
        if not self.ok:
            raise ConstructionFailure(self.stage, self.reason, **self.summary)
        return self.certificate

    def to_dict(self) -> dict:
        return {
            "outcome": "success" if self.ok else "failure",
            "stage": self.stage,
            "reason": self.reason,
            "summary": _plain(self.summary),
            "checks": _plain(self.checks),
            "certificate": _plain(self.certificate),
        }


def _plain(x):
    """Make a report payload JSON-friendly."""
    if isinstance(x, (frozenset, set)):
        return sorted(_plain(v) for v in x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "__dataclass_fields__"):
        return {k: _plain(getattr(x, k)) for k in x.__dataclass_fields__}
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def greedy_minimal(pool: int, score, threshold: int, base: int = 0) -> int | None:
    """Smallest-looking ``S`` inside ``pool`` with ``score(base | S) >=
    threshold``: add vertices in index order until the threshold is met, then
    drop single vertices in reverse order while it stays met.  Returns the
    mask ``S`` or ``None`` if even the whole pool falls short."""
    chosen = 0
    if score(base) >= threshold:
        return 0
    for v in iter_mask(pool):
        chosen |= 1 << v
        if score(base | chosen) >= threshold:
            break
    else:
        return None
    for v in sorted(iter_mask(chosen), reverse=True):
        trial = chosen & ~(1 << v)
        if score(base | trial) >= threshold:
            chosen = trial
    return chosen


def covered_count(g, source: int, target: int) -> int:
    """How many ``target`` vertices have a neighbour in ``source``."""
    return popcount(g.nbhd_mask(source) & target)
