"""Normalization, group reduction, weighted scoring and ranking.

The pipeline:  aggregate -> (vcpu adjustment if parallel) -> z-normalize
per attribute (polarity adjusted) -> reduce each group to one score per VM
-> weighted sum -> descending competition ranking.

All functions are pure; ScoringContext caches the weight-independent part
so a weight sweep pays for normalization once.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum

from .errors import MissingGroupError, PipelineError
from .model import (
    DEFAULT_TIE_TOLERANCE,
    AttributeDef,
    AttributeGroup,
    MeasurementMatrix,
    MeasurementSet,
    Mode,
    NormalizedMatrix,
    Polarity,
    RankTable,
    TableKind,
    VmDescriptor,
    WeightVector,
)
from .ingest import Aggregation, aggregate

#: Synthetic attribute injected for parallel rankings.
VCPU_ATTRIBUTE = AttributeDef(
    id="vcpus",
    label="Virtual CPU count",
    group=AttributeGroup.COMPUTATION,
    polarity=Polarity.HIGHER_BETTER,
    unit="count",
)


class GroupReduction(Enum):
    """How a group's member z-scores collapse to one number per VM.

    MEAN keeps groups with many attributes from outweighing small groups
    and is the default; SUM is the literal dot-product reading.
    """

    MEAN = "mean"
    SUM = "sum"


def normalize(matrix: MeasurementMatrix) -> NormalizedMatrix:
    """Per-attribute z-scores over the VM fleet, flipped so more is better.

    Uses the population standard deviation (the fleet is the whole
    population being ranked). A constant attribute (sigma = 0) carries no
    ranking information and maps to z = 0 for every VM.
    """
    mu: dict[str, float] = {}
    sigma: dict[str, float] = {}
    zbar: dict[tuple[str, str], float] = {}
    vm_ids = matrix.vm_ids
    for attr in matrix.attributes:
        column = matrix.column(attr.id)
        m = statistics.fmean(column)
        s = statistics.pstdev(column)
        mu[attr.id] = m
        sigma[attr.id] = s
        for vm_id, value in zip(vm_ids, column):
            if s == 0:
                z = 0.0
            elif attr.polarity is Polarity.HIGHER_BETTER:
                z = (value - m) / s
            else:
                z = (m - value) / s
            zbar[(vm_id, attr.id)] = z
    return NormalizedMatrix(vm_ids, matrix.attributes, mu, sigma, zbar)


def group_scores(norm: NormalizedMatrix,
                 reduction: GroupReduction = GroupReduction.MEAN,
                 ) -> dict[str, dict[AttributeGroup, float]]:
    """Reduce each non-empty group to a single score per VM.

    Members are summed in sorted-id order so the result is bit-identical
    however the input declared its attributes.
    """
    members: dict[AttributeGroup, list[str]] = {}
    for attr in norm.attributes:
        members.setdefault(attr.group, []).append(attr.id)
    for ids in members.values():
        ids.sort()
    out: dict[str, dict[AttributeGroup, float]] = {}
    for vm_id in norm.vms:
        scores: dict[AttributeGroup, float] = {}
        for group, attr_ids in members.items():
            total = sum(norm.zbar[(vm_id, a)] for a in attr_ids)
            scores[group] = total / len(attr_ids) if reduction is GroupReduction.MEAN else total
        out[vm_id] = scores
    return out


def score(groups: dict[str, dict[AttributeGroup, float]],
          w: WeightVector) -> dict[str, float]:
    """Weighted sum of group scores: S_i = sum_k w_k * group_score(i, k).

    A group absent from the score map is tolerated only under weight 0,
    where it contributes nothing; with a positive weight it is an error.
    """
    out: dict[str, float] = {}
    for vm_id, per_group in groups.items():
        total = 0.0
        for group in AttributeGroup:
            weight = w[group]
            if group not in per_group:
                if weight > 0:
                    raise MissingGroupError(
                        f"group {group.value!r} has weight {weight} but no attributes")
                continue
            total += weight * per_group[group]
        out[vm_id] = total
    return out


def contributions(groups: dict[str, dict[AttributeGroup, float]],
                  w: WeightVector) -> dict[str, dict[AttributeGroup, float]]:
    """Per-VM, per-group share of the final score (group score x weight)."""
    return {
        vm_id: {g: w[g] * per_group.get(g, 0.0) for g in AttributeGroup}
        for vm_id, per_group in groups.items()
    }


def rank(scores: dict[str, float], kind: TableKind,
         tie_tolerance: float = DEFAULT_TIE_TOLERANCE) -> RankTable:
    """Order scores descending into a competition-ranked table."""
    return RankTable.from_scores(kind, scores, tie_tolerance)


def parallel_adjust(matrix: MeasurementMatrix,
                    vms: tuple[VmDescriptor, ...]) -> MeasurementMatrix:
    """Inject the vCPU count as a computation-group attribute.

    The count is normalized like any measured attribute; scores stay linear
    in the z-scale, so orderings cannot be inverted the way multiplicative
    core-count scaling would invert them for negative z-scores.
    """
    descriptors = {v.id: v for v in vms}
    missing = [v.id for v in matrix.vms if v.id not in descriptors]
    if missing:
        raise ValueError(f"no descriptor for VMs: {', '.join(missing)}")
    if any(a.id == VCPU_ATTRIBUTE.id for a in matrix.attributes):
        raise ValueError(f"attribute id {VCPU_ATTRIBUTE.id!r} already present")
    values = dict(matrix.values)
    for v in matrix.vms:
        values[(v.id, VCPU_ATTRIBUTE.id)] = float(descriptors[v.id].vcpus)
    return MeasurementMatrix(matrix.vms, matrix.attributes + (VCPU_ATTRIBUTE,), values)


@dataclass(frozen=True)
class ScoringContext:
    """The weight-independent half of the pipeline, computed once.

    Normalization does not depend on the weight vector, so sweeps and
    interactive re-weighting reuse one context and only redo the cheap
    weighted sum and ranking.
    """

    mode: Mode
    normalized: NormalizedMatrix
    groups: dict[str, dict[AttributeGroup, float]]
    tie_tolerance: float = DEFAULT_TIE_TOLERANCE

    @classmethod
    def prepare(cls, mset: MeasurementSet, mode: Mode,
                aggregation: Aggregation = Aggregation.MEDIAN,
                reduction: GroupReduction = GroupReduction.MEAN,
                tie_tolerance: float = DEFAULT_TIE_TOLERANCE) -> "ScoringContext":
        try:
            matrix = aggregate(mset, aggregation)
        except Exception as exc:
            raise PipelineError("aggregate", exc) from exc
        if mode is Mode.PARALLEL:
            try:
                matrix = parallel_adjust(matrix, mset.vms)
            except Exception as exc:
                raise PipelineError("parallel_adjust", exc) from exc
        try:
            norm = normalize(matrix)
        except Exception as exc:
            raise PipelineError("normalize", exc) from exc
        try:
            groups = group_scores(norm, reduction)
        except Exception as exc:
            raise PipelineError("group_scores", exc) from exc
        return cls(mode, norm, groups, tie_tolerance)

    def score(self, w: WeightVector) -> dict[str, float]:
        try:
            return score(self.groups, w)
        except Exception as exc:
            raise PipelineError("score", exc) from exc

    def contributions(self, w: WeightVector) -> dict[str, dict[AttributeGroup, float]]:
        return contributions(self.groups, w)

    def rank_table(self, w: WeightVector) -> RankTable:
        scores = self.score(w)
        try:
            return rank(scores, TableKind.benchmark(self.mode), self.tie_tolerance)
        except Exception as exc:
            raise PipelineError("rank", exc) from exc


def rank_pipeline(mset: MeasurementSet, w: WeightVector, mode: Mode,
                  aggregation: Aggregation = Aggregation.MEDIAN,
                  reduction: GroupReduction = GroupReduction.MEAN,
                  tie_tolerance: float = DEFAULT_TIE_TOLERANCE) -> RankTable:
    """Full benchmark ranking for one weight vector.

    Deterministic composition of aggregate, the parallel vCPU adjustment
    (parallel mode only), normalize, group_scores, score and rank; errors
    surface as PipelineError naming the failing stage.
    """
    ctx = ScoringContext.prepare(mset, mode, aggregation, reduction, tie_tolerance)
    return ctx.rank_table(w)
