"""Domain types shared by every part of the toolkit.

All types are immutable after construction and safe to share across
threads. Construction validates the documented invariants and raises
ValueError on violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

WEIGHT_MIN = 0
WEIGHT_MAX = 5

#: Absolute score difference below which two VMs are considered tied.
DEFAULT_TIE_TOLERANCE = 1e-9


class AttributeGroup(Enum):
    """The four fixed attribute groups, in weight-vector order."""

    MEMORY_PROCESS = "memory_process"
    LOCAL_COMMUNICATION = "local_communication"
    COMPUTATION = "computation"
    STORAGE = "storage"

    @property
    def index(self) -> int:
        """Position of this group in a weight vector."""
        return _GROUP_ORDER.index(self)

    @classmethod
    def from_token(cls, token: str) -> "AttributeGroup":
        try:
            return cls(token)
        except ValueError:
            valid = ", ".join(g.value for g in cls)
            raise ValueError(f"unknown group {token!r}; valid groups: {valid}") from None


_GROUP_ORDER = tuple(AttributeGroup)


class Polarity(Enum):
    """Whether larger raw values mean better performance."""

    HIGHER_BETTER = "higher_better"
    LOWER_BETTER = "lower_better"


class Mode(Enum):
    SEQUENTIAL = "sequential"
    PARALLEL = "parallel"


class TableKind(Enum):
    BENCHMARK_SEQUENTIAL = "benchmark_sequential"
    BENCHMARK_PARALLEL = "benchmark_parallel"
    EMPIRICAL_SEQUENTIAL = "empirical_sequential"
    EMPIRICAL_PARALLEL = "empirical_parallel"

    @classmethod
    def benchmark(cls, mode: Mode) -> "TableKind":
        return cls.BENCHMARK_PARALLEL if mode is Mode.PARALLEL else cls.BENCHMARK_SEQUENTIAL

    @classmethod
    def empirical(cls, mode: Mode) -> "TableKind":
        return cls.EMPIRICAL_PARALLEL if mode is Mode.PARALLEL else cls.EMPIRICAL_SEQUENTIAL


class CorrelationMethod(Enum):
    PEARSON_ON_RANKS = "pearson_on_ranks"
    SPEARMAN_AVERAGE_RANKS = "spearman_average_ranks"
    KENDALL_TAU = "kendall_tau"


@dataclass(frozen=True)
class VmDescriptor:
    """Static description of a purchasable VM type."""

    id: str
    vcpus: int
    memory_gib: float
    processor: str
    clock_ghz: float

    def __post_init__(self):
        if not self.id:
            raise ValueError("vm id must be non-empty")
        if self.vcpus < 1:
            raise ValueError(f"{self.id}: vcpus must be >= 1, got {self.vcpus}")
        if self.memory_gib <= 0:
            raise ValueError(f"{self.id}: memory_gib must be > 0, got {self.memory_gib}")
        if self.clock_ghz <= 0:
            raise ValueError(f"{self.id}: clock_ghz must be > 0, got {self.clock_ghz}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "vcpus": self.vcpus,
            "memory_gib": self.memory_gib,
            "processor": self.processor,
            "clock_ghz": self.clock_ghz,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "VmDescriptor":
        return cls(d["id"], int(d["vcpus"]), float(d["memory_gib"]),
                   str(d["processor"]), float(d["clock_ghz"]))


@dataclass(frozen=True)
class AttributeDef:
    """One measured quantity in the attribute catalogue."""

    id: str
    label: str
    group: AttributeGroup
    polarity: Polarity
    unit: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "group": self.group.value,
            "polarity": self.polarity.value,
            "unit": self.unit,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "AttributeDef":
        return cls(d["id"], d["label"], AttributeGroup.from_token(d["group"]),
                   Polarity(d["polarity"]), d["unit"])


def _check_unique(ids: Sequence[str], what: str) -> None:
    seen = set()
    for i in ids:
        if i in seen:
            raise ValueError(f"duplicate {what} id {i!r}")
        seen.add(i)


@dataclass(frozen=True)
class MeasurementSet:
    """Raw observations: each (vm, attribute) cell holds >= 1 repetition."""

    vms: tuple[VmDescriptor, ...]
    attributes: tuple[AttributeDef, ...]
    observations: Mapping[tuple[str, str], tuple[float, ...]]

    def __post_init__(self):
        object.__setattr__(self, "vms", tuple(self.vms))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "observations",
                           {k: tuple(v) for k, v in self.observations.items()})
        _check_unique([v.id for v in self.vms], "vm")
        _check_unique([a.id for a in self.attributes], "attribute")
        vm_ids = {v.id for v in self.vms}
        attr_ids = {a.id for a in self.attributes}
        for (vm, attr), values in self.observations.items():
            if vm not in vm_ids:
                raise ValueError(f"observation references unknown vm {vm!r}")
            if attr not in attr_ids:
                raise ValueError(f"observation references unknown attribute {attr!r}")
            if not values:
                raise ValueError(f"cell ({vm}, {attr}) has no observations")
            for x in values:
                if not math.isfinite(x):
                    raise ValueError(f"non-finite observation in cell ({vm}, {attr})")

    @property
    def vm_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vms)

    @property
    def attribute_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.attributes)

    def descriptor(self, vm_id: str) -> VmDescriptor:
        for v in self.vms:
            if v.id == vm_id:
                return v
        raise KeyError(vm_id)


@dataclass(frozen=True)
class MeasurementMatrix:
    """Aggregated measurements: exactly one value per (vm, attribute)."""

    vms: tuple[VmDescriptor, ...]
    attributes: tuple[AttributeDef, ...]
    values: Mapping[tuple[str, str], float]

    def __post_init__(self):
        object.__setattr__(self, "vms", tuple(self.vms))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "values", dict(self.values))
        _check_unique([v.id for v in self.vms], "vm")
        _check_unique([a.id for a in self.attributes], "attribute")
        expected = {(v.id, a.id) for v in self.vms for a in self.attributes}
        got = set(self.values)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise ValueError(
                f"matrix not rectangular: {len(missing)} missing, {len(extra)} stray cells")
        for cell, x in self.values.items():
            if not math.isfinite(x):
                raise ValueError(f"non-finite value in cell {cell}")

    @property
    def vm_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vms)

    def column(self, attr_id: str) -> list[float]:
        """Values of one attribute in VM declaration order."""
        return [self.values[(v.id, attr_id)] for v in self.vms]


@dataclass(frozen=True)
class WeightVector:
    """Four integer weights in [0, 5], one per attribute group."""

    w: tuple[int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(self.w))
        if len(self.w) != 4:
            raise ValueError(f"expected 4 weights, got {len(self.w)}")
        for x in self.w:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ValueError(f"weights must be integers, got {x!r}")
            if not WEIGHT_MIN <= x <= WEIGHT_MAX:
                raise ValueError(
                    f"weight {x} out of range {WEIGHT_MIN}..{WEIGHT_MAX}")
        if all(x == 0 for x in self.w):
            raise ValueError("weights must not all be zero")

    def __getitem__(self, group: AttributeGroup) -> int:
        return self.w[group.index]

    def __iter__(self):
        return iter(self.w)

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        """Parse the comma notation used in docs, e.g. '5,3,5,0'."""
        parts = [p.strip() for p in text.split(",")]
        try:
            values = tuple(int(p) for p in parts)
        except ValueError:
            raise ValueError(f"weights must be integers, got {text!r}") from None
        return cls(values)  # type: ignore[arg-type]

    def to_dict(self) -> list[int]:
        return list(self.w)


@dataclass(frozen=True)
class NormalizedMatrix:
    """Polarity-adjusted z-scores plus the per-attribute moments behind them."""

    vms: tuple[str, ...]
    attributes: tuple[AttributeDef, ...]
    mu: Mapping[str, float]
    sigma: Mapping[str, float]
    zbar: Mapping[tuple[str, str], float]

    def __post_init__(self):
        object.__setattr__(self, "vms", tuple(self.vms))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "mu", dict(self.mu))
        object.__setattr__(self, "sigma", dict(self.sigma))
        object.__setattr__(self, "zbar", dict(self.zbar))


@dataclass(frozen=True)
class RankEntry:
    vm_id: str
    score: float | None
    rank: int

    def to_dict(self) -> dict:
        return {"vm": self.vm_id, "score": self.score, "rank": self.rank}


@dataclass(frozen=True)
class RankTable:
    """Scored VM list under competition ranking (ties share the best rank)."""

    kind: TableKind
    entries: tuple[RankEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        _check_unique([e.vm_id for e in self.entries], "vm")

    @classmethod
    def from_scores(cls, kind: TableKind, scores: Mapping[str, float],
                    tie_tolerance: float = DEFAULT_TIE_TOLERANCE) -> "RankTable":
        """Build a table from scores, ordered descending, competition-ranked.

        Two scores tie when they differ from the tie group's first (highest)
        score by at most `tie_tolerance`. Equal scores order by vm id so the
        result is independent of input ordering.
        """
        if not scores:
            raise ValueError("cannot rank an empty score map")
        for vm, s in scores.items():
            if not math.isfinite(s):
                raise ValueError(f"non-finite score for {vm!r}")
        ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        entries: list[RankEntry] = []
        anchor = ordered[0][1]
        rank = 1
        for pos, (vm, s) in enumerate(ordered, start=1):
            if anchor - s > tie_tolerance:
                anchor = s
                rank = pos
            entries.append(RankEntry(vm, s, rank))
        table = cls(kind, tuple(entries))
        validate_rank_table(table, tie_tolerance)
        return table

    @classmethod
    def from_published(cls, kind: TableKind, ranks: Mapping[str, int]) -> "RankTable":
        """Build a table from externally published rank numbers.

        No scores are attached and the competition-ranking validator is not
        applied: published tables are stored verbatim, whatever convention
        their source used.
        """
        entries = [RankEntry(vm, None, int(r))
                   for vm, r in sorted(ranks.items(), key=lambda kv: (kv[1], kv[0]))]
        return cls(kind, tuple(entries))

    @property
    def vm_ids(self) -> tuple[str, ...]:
        return tuple(e.vm_id for e in self.entries)

    def rank_of(self, vm_id: str) -> int:
        for e in self.entries:
            if e.vm_id == vm_id:
                return e.rank
        raise KeyError(vm_id)

    def ranks(self) -> dict[str, int]:
        return {e.vm_id: e.rank for e in self.entries}

    def to_dict(self) -> dict:
        return {"kind": self.kind.value,
                "entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "RankTable":
        entries = tuple(
            RankEntry(e["vm"], None if e["score"] is None else float(e["score"]),
                      int(e["rank"]))
            for e in d["entries"])
        return cls(TableKind(d["kind"]), entries)


def validate_rank_table(table: RankTable,
                        tie_tolerance: float = DEFAULT_TIE_TOLERANCE) -> None:
    """Check the competition-ranking invariant on a scored table.

    Raises ValueError unless entries are sorted by score descending, tied
    scores share the smallest applicable rank, and each distinct score's
    rank is 1 + the number of strictly better entries (1,2,2,4 pattern).
    """
    entries = table.entries
    if not entries:
        return
    if any(e.score is None for e in entries):
        raise ValueError("cannot validate a table without scores")
    if entries[0].rank != 1:
        raise ValueError("a non-empty table must contain rank 1")
    anchor = entries[0].score
    rank = 1
    for pos, e in enumerate(entries, start=1):
        if pos > 1:
            if e.score > entries[pos - 2].score:  # type: ignore[operator]
                raise ValueError(f"entries not sorted by score at {e.vm_id!r}")
            if anchor - e.score > tie_tolerance:  # type: ignore[operator]
                anchor = e.score
                rank = pos
        if e.rank != rank:
            raise ValueError(
                f"{e.vm_id!r} has rank {e.rank}, competition ranking expects {rank}")


@dataclass(frozen=True)
class TimingRecord:
    vm_id: str
    mode: Mode
    seconds: float

    def __post_init__(self):
        if not (math.isfinite(self.seconds) and self.seconds > 0):
            raise ValueError(
                f"{self.vm_id}: seconds must be positive, got {self.seconds}")


@dataclass(frozen=True)
class TimingSet:
    """Application completion times; repeated records per VM are allowed."""

    records: tuple[TimingRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    def for_mode(self, mode: Mode) -> dict[str, list[float]]:
        out: dict[str, list[float]] = {}
        for r in self.records:
            if r.mode is mode:
                out.setdefault(r.vm_id, []).append(r.seconds)
        return out

    def check_vms(self, known: Iterable[str]) -> None:
        """Raise if any record references a VM outside `known`."""
        known = set(known)
        unknown = sorted({r.vm_id for r in self.records} - known)
        if unknown:
            raise ValueError(f"timings reference unknown VMs: {', '.join(unknown)}")


@dataclass(frozen=True)
class ComparisonReport:
    """Agreement between two rank tables over their shared VMs."""

    method: CorrelationMethod
    coefficient: float
    per_vm_delta: Mapping[str, int]
    top_k_overlap: int
    k: int = 3

    def __post_init__(self):
        object.__setattr__(self, "per_vm_delta", dict(self.per_vm_delta))
        if not -1.0 - 1e-12 <= self.coefficient <= 1.0 + 1e-12:
            raise ValueError(f"coefficient {self.coefficient} outside [-1, 1]")

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "coefficient": self.coefficient,
            "per_vm_delta": dict(sorted(self.per_vm_delta.items())),
            "top_k_overlap": self.top_k_overlap,
            "k": self.k,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ComparisonReport":
        return cls(CorrelationMethod(d["method"]), float(d["coefficient"]),
                   {k: int(v) for k, v in d["per_vm_delta"].items()},
                   int(d["top_k_overlap"]), int(d.get("k", 3)))
