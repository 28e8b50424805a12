"""Search outcomes and node budgets shared by the detectors and oracles."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any


class BudgetError(RuntimeError):
    """An exhaustive search hit its size cap or node budget."""


class Status(enum.Enum):
    VERIFIED = "verified"
    WITNESS_FOUND = "witness"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchOutcome:
    status: Status
    certificate: Any = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.WITNESS_FOUND

    @property
    def verified(self) -> bool:
        return self.status is Status.VERIFIED

    @classmethod
    def witness(cls, cert, nodes=0):
        return cls(Status.WITNESS_FOUND, cert, nodes)


class Budget:
    """Counts search-tree node expansions; ``limit=None`` means unbounded."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int | None = None):
        self.limit = limit
        self.used = 0

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.limit is not None and self.used > self.limit:
            raise BudgetError(f"node budget of {self.limit} exhausted")


def as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)
