"""Validating benchmark rankings against measured application timings.

Timings are aggregated per VM (median over repeated runs), z-normalized
with execution time treated as lower-is-better, and ranked descending to
give the empirical table. Agreement between two tables is measured by rank
correlation over their shared VMs, on the competition-rank values exactly
as each table states them.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .errors import DegenerateRanksError
from .model import (
    AttributeGroup,
    ComparisonReport,
    CorrelationMethod,
    Mode,
    RankTable,
    TableKind,
    TimingSet,
)

MIN_SHARED_VMS = 3
DEFAULT_DIVERGENCE_THRESHOLD = 3


def rank_empirical(timings: TimingSet, mode: Mode) -> RankTable:
    """Rank VMs by measured completion time for the given mode.

    Repeated timings per VM collapse to their median; faster VMs score
    higher after the lower-is-better z-normalization, so rank 1 is the
    fastest VM. Ties share a rank (competition ranking).
    """
    per_vm = timings.for_mode(mode)
    if not per_vm:
        raise ValueError(f"no timing records for mode {mode.value!r}")
    medians = {vm: float(statistics.median(values)) for vm, values in per_vm.items()}
    mu = statistics.fmean(medians.values())
    sd = statistics.pstdev(medians.values())
    scores = {vm: 0.0 if sd == 0 else (mu - v) / sd for vm, v in medians.items()}
    return RankTable.from_scores(TableKind.empirical(mode), scores)


def _pearson(x: list[float], y: list[float]) -> float:
    try:
        return statistics.correlation(x, y)
    except statistics.StatisticsError as exc:
        raise DegenerateRanksError(
            f"correlation undefined: {exc}") from None


def _average_ranks(values: list[float]) -> list[float]:
    """1-based ranks with ties averaged (smaller value = better rank)."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    out = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for t in range(i, j + 1):
            out[order[t]] = avg
        i = j + 1
    return out


def _kendall_tau_b(x: list[float], y: list[float]) -> float:
    concordant = discordant = ties_x = ties_y = 0
    n = len(x)
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif dx * dy > 0:
                concordant += 1
            else:
                discordant += 1
    denom = math.sqrt((concordant + discordant + ties_x)
                      * (concordant + discordant + ties_y))
    if denom == 0:
        raise DegenerateRanksError("correlation undefined: a rank vector is constant")
    return (concordant - discordant) / denom


def compare(a: RankTable, b: RankTable,
            method: CorrelationMethod = CorrelationMethod.PEARSON_ON_RANKS,
            k: int = 3) -> ComparisonReport:
    """Rank correlation between two tables over their shared VMs.

    Coefficients are computed on the stored competition ranks. The report
    also carries the signed per-VM rank delta (a minus b) and how many VMs
    sit in both tables' top k.
    """
    shared = sorted(set(a.vm_ids) & set(b.vm_ids))
    if len(shared) < MIN_SHARED_VMS:
        raise ValueError(
            f"tables share only {len(shared)} VMs; need >= {MIN_SHARED_VMS}")
    ranks_a = a.ranks()
    ranks_b = b.ranks()
    x = [float(ranks_a[vm]) for vm in shared]
    y = [float(ranks_b[vm]) for vm in shared]
    if len(set(x)) == 1 or len(set(y)) == 1:
        raise DegenerateRanksError("correlation undefined: a rank vector is constant")
    if method is CorrelationMethod.PEARSON_ON_RANKS:
        coefficient = _pearson(x, y)
    elif method is CorrelationMethod.SPEARMAN_AVERAGE_RANKS:
        coefficient = _pearson(_average_ranks(x), _average_ranks(y))
    else:
        coefficient = _kendall_tau_b(x, y)
    delta = {vm: ranks_a[vm] - ranks_b[vm] for vm in shared}
    top_a = {vm for vm in shared if ranks_a[vm] <= k}
    top_b = {vm for vm in shared if ranks_b[vm] <= k}
    return ComparisonReport(method=method, coefficient=coefficient,
                            per_vm_delta=delta,
                            top_k_overlap=len(top_a & top_b), k=k)


@dataclass(frozen=True)
class DivergenceFlag:
    vm_id: str
    rank_a: int
    rank_b: int
    delta: int
    suspect_groups: tuple[AttributeGroup, ...] = ()

    def to_dict(self) -> dict:
        return {
            "vm": self.vm_id,
            "rank_a": self.rank_a,
            "rank_b": self.rank_b,
            "delta": self.delta,
            "suspect_groups": [g.value for g in self.suspect_groups],
        }


@dataclass(frozen=True)
class DivergenceReport:
    """VMs whose two ranks disagree by more than the threshold."""

    threshold: int
    flags: tuple[DivergenceFlag, ...]

    def render(self) -> str:
        if not self.flags:
            return f"No VM diverges by more than {self.threshold} ranks."
        lines = [f"VMs diverging by more than {self.threshold} ranks:"]
        for f in self.flags:
            line = (f"  {f.vm_id}: benchmark rank {f.rank_a} vs empirical "
                    f"rank {f.rank_b} (delta {f.delta:+d})")
            if f.suspect_groups:
                groups = ", ".join(g.value for g in f.suspect_groups)
                line += f"; revisit weight of: {groups}"
            lines.append(line)
        lines.append("Large divergence suggests the weights do not reflect"
                     " the application; adjust and re-rank.")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"threshold": self.threshold,
                "flags": [f.to_dict() for f in self.flags]}


def divergence_report(a: RankTable, b: RankTable,
                      threshold: int = DEFAULT_DIVERGENCE_THRESHOLD,
                      group_scores: dict[str, dict[AttributeGroup, float]] | None = None,
                      ) -> DivergenceReport:
    """Flag shared VMs with |rank_a - rank_b| above `threshold`.

    When the benchmark side's group scores are supplied, each flag names
    the groups where that VM's z-score deviates most from the fleet (the
    weights most worth revisiting). Flags are ordered by |delta|, largest
    first.
    """
    ranks_a = a.ranks()
    ranks_b = b.ranks()
    shared = sorted(set(ranks_a) & set(ranks_b))
    flags = []
    for vm in shared:
        delta = ranks_a[vm] - ranks_b[vm]
        if abs(delta) <= threshold:
            continue
        suspects: tuple[AttributeGroup, ...] = ()
        if group_scores and vm in group_scores:
            per_group = group_scores[vm]
            top = sorted(per_group, key=lambda g: -abs(per_group[g]))
            suspects = tuple(g for g in top[:2] if abs(per_group[g]) > 0)
        flags.append(DivergenceFlag(vm, ranks_a[vm], ranks_b[vm], delta, suspects))
    flags.sort(key=lambda f: (-abs(f.delta), f.vm_id))
    return DivergenceReport(threshold=threshold, flags=tuple(flags))
