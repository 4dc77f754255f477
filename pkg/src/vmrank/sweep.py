"""Exhaustive weight-space sweep: who lands in the top ranks, how often.

There are 6^4 - 1 = 1295 valid weight vectors (four groups, weights 0-5,
the all-zero vector discarded). For each vector the full ranking is
evaluated and every VM whose competition rank is <= k is credited at its
exact rank position; tied VMs are all credited.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .errors import MissingGroupError, PipelineError
from .ingest import Aggregation
from .model import (
    AttributeGroup,
    MeasurementSet,
    Mode,
    WeightVector,
    WEIGHT_MAX,
)
from .scoring import GroupReduction, ScoringContext

FULL_SWEEP_SIZE = (WEIGHT_MAX + 1) ** 4 - 1  # 1295

_ALL_VECTORS: tuple[WeightVector, ...] | None = None


def enumerate_weight_vectors() -> list[WeightVector]:
    """All valid weight vectors in lexicographic order.

    Starts at (0, 0, 0, 1), ends at (5, 5, 5, 5); the all-zero vector is
    excluded. The set is a fixed constant, so it is built once and copied
    out on each call.
    """
    global _ALL_VECTORS
    if _ALL_VECTORS is None:
        _ALL_VECTORS = tuple(
            WeightVector(w) for w in product(range(WEIGHT_MAX + 1), repeat=4)
            if any(w))
    return list(_ALL_VECTORS)


@dataclass(frozen=True)
class SweepResult:
    """Per-VM counts of appearances at each rank position 1..k."""

    total_vectors: int
    k: int
    mode: Mode
    per_vm: Mapping[str, Mapping[int, int]]

    def __post_init__(self):
        object.__setattr__(
            self, "per_vm",
            {vm: dict(counts) for vm, counts in self.per_vm.items()})

    def top_k_count(self, vm_id: str) -> int:
        return sum(self.per_vm[vm_id].values())

    def top_k_frequency(self, vm_id: str) -> float:
        return self.top_k_count(vm_id) / self.total_vectors

    def to_dict(self) -> dict:
        return {
            "total_vectors": self.total_vectors,
            "k": self.k,
            "mode": self.mode.value,
            "per_vm": {
                vm: {
                    "rank_counts": {str(pos): n for pos, n in sorted(counts.items())},
                    "top_k_count": self.top_k_count(vm),
                    "top_k_frequency": self.top_k_frequency(vm),
                }
                for vm, counts in sorted(self.per_vm.items())
            },
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SweepResult":
        per_vm = {
            vm: {int(pos): int(n) for pos, n in entry["rank_counts"].items()}
            for vm, entry in d["per_vm"].items()
        }
        return cls(int(d["total_vectors"]), int(d["k"]), Mode(d["mode"]), per_vm)


def top_k_frequency(mset: MeasurementSet, k: int, mode: Mode,
                    aggregation: Aggregation = Aggregation.MEDIAN,
                    reduction: GroupReduction = GroupReduction.MEAN) -> SweepResult:
    """Sweep all 1295 weight vectors and count top-k appearances per VM.

    Normalization is weight-independent, so it is computed once and shared
    across vectors; the result is identical to running the full pipeline
    per vector, at a fraction of the cost. Evaluation order never affects
    the counts.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ctx = ScoringContext.prepare(mset, mode, aggregation, reduction)
    present = {g for per_group in ctx.groups.values() for g in per_group}
    empty = [g.value for g in AttributeGroup if g not in present]
    if empty:
        raise MissingGroupError(
            f"sweep weights every group, but these have no attributes:"
            f" {', '.join(empty)}")
    counts: dict[str, dict[int, int]] = {vm: {} for vm in mset.vm_ids}
    vectors = enumerate_weight_vectors()
    for w in vectors:
        try:
            table = ctx.rank_table(w)
        except PipelineError as exc:
            raise PipelineError(f"sweep at W={tuple(w)}: {exc.stage}",
                                exc.__cause__ or exc) from exc
        for entry in table.entries:
            if entry.rank <= k:
                vm_counts = counts[entry.vm_id]
                vm_counts[entry.rank] = vm_counts.get(entry.rank, 0) + 1
    return SweepResult(total_vectors=len(vectors), k=k, mode=mode, per_vm=counts)
