"""Constructive procedures; each returns a :class:`ConstructionReport`
whose certificate has already been re-validated."""
from .assembly import Embedding, decompose_pattern, find_pattern, reduce_and_find
from .coverings import (battery_potential, build_covering_sequence, build_multicovering, merge_choice,
                        merge_type, refine_covering_sequence)
from .expansion import SmallRadius, make_expanding, small_rad
from .params import PERMISSIVE, STRICT, ConstructionFailure, ConstructionReport, ParamSet
from .pathfinder import (InducedPathOutcome, PartitionOutcome, PathCertificate, find_path, get_path,
                         get_path_relaxed, repeat_index)
from .spiders import build_spider, build_troupe, spiders_to_lobsters

__all__ = [
    "Embedding", "decompose_pattern", "find_pattern", "reduce_and_find",
    "battery_potential", "build_covering_sequence", "build_multicovering", "merge_choice", "merge_type",
    "refine_covering_sequence", "SmallRadius", "make_expanding", "small_rad",
    "PERMISSIVE", "STRICT", "ConstructionFailure", "ConstructionReport", "ParamSet",
    "InducedPathOutcome", "PartitionOutcome", "PathCertificate", "find_path", "get_path", "get_path_relaxed",
    "repeat_index", "build_spider", "build_troupe", "spiders_to_lobsters",
]
