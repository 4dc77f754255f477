"""Loading and aggregating raw benchmark observations.

Canonical measurement format (UTF-8, line oriented, diff-able):

    # full-line comments start with '#'; blank lines are ignored
    [vms]
    # id, vcpus, memory_gib, processor, clock_ghz
    m1.xlarge, 4, 15.0, Intel Xeon E5-2650, 2.00
    [attributes]
    # id, label, group, polarity, unit
    l1_cache_latency_ns, L1 cache latency, memory_process, lower_better, ns
    [observations]
    # vm_id, attr_id, value   (repeat a row per repetition)
    m1.xlarge, l1_cache_latency_ns, 2.41

Groups: memory_process, local_communication, computation, storage.
Polarities: higher_better, lower_better.

Timing files use the same style with a single section:

    [timings]
    # vm_id, mode, seconds   (mode: sequential | parallel)
    m1.xlarge, sequential, 565.0
"""

from __future__ import annotations

import json
import math
import re
import statistics
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import (
    DataFormatError,
    EmptyInputError,
    ExtractionError,
    IncompleteMatrixError,
    NoRuleMatchedError,
)
from .model import (
    AttributeDef,
    AttributeGroup,
    MeasurementMatrix,
    MeasurementSet,
    Mode,
    Polarity,
    TimingRecord,
    TimingSet,
    VmDescriptor,
)

_SECTION_RE = re.compile(r"^\[(?P<name>[a-z_]+)\]$")


class Aggregation(Enum):
    """How repeated observations of one cell collapse to a single value."""

    MEDIAN = "median"
    MEAN = "mean"
    MIN = "min"

    def apply(self, values: tuple[float, ...]) -> float:
        if self is Aggregation.MEDIAN:
            return float(statistics.median(values))
        if self is Aggregation.MEAN:
            return statistics.fmean(values)
        return min(values)


def _content_lines(document: str):
    """Yield (line_no, text) for lines that carry content."""
    for no, raw in enumerate(document.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield no, line


def _fields(line: str, n: int, line_no: int) -> list[str]:
    parts = [p.strip() for p in line.split(",")]
    if len(parts) != n:
        raise DataFormatError(f"expected {n} comma-separated fields, got {len(parts)}",
                              line_no)
    if any(not p for p in parts):
        raise DataFormatError("empty field", line_no)
    return parts


def _parse_float(token: str, line_no: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DataFormatError(f"{what} is not a number: {token!r}", line_no) from None
    if not math.isfinite(value):
        raise DataFormatError(f"{what} must be finite, got {token!r}", line_no)
    return value


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise DataFormatError(f"{what} is not an integer: {token!r}", line_no) from None


def parse_vm_row(parts: list[str], line_no: int) -> VmDescriptor:
    try:
        return VmDescriptor(
            id=parts[0],
            vcpus=_parse_int(parts[1], line_no, "vcpus"),
            memory_gib=_parse_float(parts[2], line_no, "memory_gib"),
            processor=parts[3],
            clock_ghz=_parse_float(parts[4], line_no, "clock_ghz"),
        )
    except ValueError as exc:
        raise DataFormatError(str(exc), line_no) from None


def parse_attribute_row(parts: list[str], line_no: int) -> AttributeDef:
    try:
        group = AttributeGroup.from_token(parts[2])
    except ValueError as exc:
        raise DataFormatError(str(exc), line_no) from None
    try:
        polarity = Polarity(parts[3])
    except ValueError:
        valid = ", ".join(p.value for p in Polarity)
        raise DataFormatError(
            f"unknown polarity {parts[3]!r}; valid polarities: {valid}", line_no
        ) from None
    return AttributeDef(id=parts[0], label=parts[1], group=group,
                        polarity=polarity, unit=parts[4])


def load_measurements(document: str) -> MeasurementSet:
    """Parse a canonical measurement document into a MeasurementSet.

    Repeated observation rows for the same (vm, attribute) accumulate as
    separate repetitions. Errors carry the offending line number.
    """
    vms: list[VmDescriptor] = []
    attributes: list[AttributeDef] = []
    observations: dict[tuple[str, str], list[float]] = {}
    section = None
    saw_content = False

    for no, line in _content_lines(document):
        m = _SECTION_RE.match(line)
        if m:
            section = m.group("name")
            if section not in ("vms", "attributes", "observations"):
                raise DataFormatError(
                    f"unknown section [{section}]; expected [vms], [attributes]"
                    " or [observations]", no)
            continue
        saw_content = True
        if section is None:
            raise DataFormatError("data before any section header", no)
        if section == "vms":
            vms.append(parse_vm_row(_fields(line, 5, no), no))
        elif section == "attributes":
            attributes.append(parse_attribute_row(_fields(line, 5, no), no))
        else:
            vm_id, attr_id, token = _fields(line, 3, no)
            if vm_id not in {v.id for v in vms}:
                raise DataFormatError(f"unknown vm id {vm_id!r}", no)
            if attr_id not in {a.id for a in attributes}:
                raise DataFormatError(f"unknown attribute id {attr_id!r}", no)
            value = _parse_float(token, no, "value")
            observations.setdefault((vm_id, attr_id), []).append(value)

    if not saw_content:
        raise EmptyInputError("document contains no records")
    try:
        return MeasurementSet(tuple(vms), tuple(attributes),
                              {k: tuple(v) for k, v in observations.items()})
    except ValueError as exc:
        raise DataFormatError(str(exc)) from None


def load_measurements_path(path: str | Path) -> MeasurementSet:
    return load_measurements(Path(path).read_text(encoding="utf-8"))


def format_measurements(mset: MeasurementSet) -> str:
    """Serialize back to the canonical format (round-trips load_measurements)."""
    lines = ["[vms]"]
    for v in mset.vms:
        lines.append(f"{v.id}, {v.vcpus}, {v.memory_gib}, {v.processor}, {v.clock_ghz}")
    lines.append("")
    lines.append("[attributes]")
    for a in mset.attributes:
        lines.append(f"{a.id}, {a.label}, {a.group.value}, {a.polarity.value}, {a.unit}")
    lines.append("")
    lines.append("[observations]")
    for (vm, attr), values in sorted(mset.observations.items()):
        for x in values:
            lines.append(f"{vm}, {attr}, {x!r}")
    return "\n".join(lines) + "\n"


def load_timings(document: str, known_vms=None) -> TimingSet:
    """Parse a timing document; optionally check VM ids against `known_vms`."""
    records: list[TimingRecord] = []
    for no, line in _content_lines(document):
        m = _SECTION_RE.match(line)
        if m:
            if m.group("name") != "timings":
                raise DataFormatError(
                    f"unknown section [{m.group('name')}]; expected [timings]", no)
            continue
        vm_id, mode_token, token = _fields(line, 3, no)
        try:
            mode = Mode(mode_token)
        except ValueError:
            raise DataFormatError(
                f"unknown mode {mode_token!r}; valid modes: sequential, parallel",
                no) from None
        seconds = _parse_float(token, no, "seconds")
        try:
            records.append(TimingRecord(vm_id, mode, seconds))
        except ValueError as exc:
            raise DataFormatError(str(exc), no) from None
    if not records:
        raise EmptyInputError("document contains no timing records")
    timings = TimingSet(tuple(records))
    if known_vms is not None:
        try:
            timings.check_vms(known_vms)
        except ValueError as exc:
            raise DataFormatError(str(exc)) from None
    return timings


def load_timings_path(path: str | Path, known_vms=None) -> TimingSet:
    return load_timings(Path(path).read_text(encoding="utf-8"), known_vms)


@dataclass(frozen=True)
class ExtractionRule:
    """One regex with a single numeric capture, mapped to an attribute id."""

    attr_id: str
    pattern: str
    scale: float = 1.0
    polarity_hint: Polarity | None = None

    def compiled(self) -> re.Pattern:
        try:
            rx = re.compile(self.pattern, re.MULTILINE)
        except re.error as exc:
            raise ExtractionError(f"rule {self.attr_id!r}: bad pattern: {exc}") from None
        if rx.groups != 1:
            raise ExtractionError(
                f"rule {self.attr_id!r}: pattern must have exactly one capture group,"
                f" has {rx.groups}")
        return rx


@dataclass(frozen=True)
class ExtractionSpec:
    """A named bundle of extraction rules for one benchmark tool's output."""

    tool: str
    rules: tuple[ExtractionRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.rules:
            raise ExtractionError(f"spec {self.tool!r} has no rules")

    @classmethod
    def from_json(cls, text: str) -> "ExtractionSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ExtractionError(f"invalid spec JSON: {exc}") from None
        rules = []
        for r in doc.get("rules", []):
            hint = r.get("polarity_hint")
            rules.append(ExtractionRule(
                attr_id=r["attr"],
                pattern=r["pattern"],
                scale=float(r.get("scale", 1.0)),
                polarity_hint=Polarity(hint) if hint else None,
            ))
        return cls(tool=doc.get("tool", "unknown"), rules=tuple(rules))

    @classmethod
    def from_path(cls, path: str | Path) -> "ExtractionSpec":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class ExtractionResult:
    """Observations pulled out of raw tool output for a single VM."""

    vm_id: str
    observations: dict[str, float]
    warnings: tuple[str, ...]


def apply_extraction_spec(raw: str, spec: ExtractionSpec, vm_id: str) -> ExtractionResult:
    """Run every rule against `raw`; first match per rule wins.

    Rules that do not match are reported as warnings. If nothing matches at
    all the spec/tool pairing is presumed wrong and NoRuleMatchedError is
    raised.
    """
    observations: dict[str, float] = {}
    warnings: list[str] = []
    for rule in spec.rules:
        m = rule.compiled().search(raw)
        if m is None:
            warnings.append(f"rule {rule.attr_id!r} matched nothing")
            continue
        try:
            value = float(m.group(1))
        except ValueError:
            raise ExtractionError(
                f"rule {rule.attr_id!r} captured non-numeric text {m.group(1)!r}")
        observations[rule.attr_id] = value * rule.scale
    if not observations:
        raise NoRuleMatchedError(
            f"no rule of spec {spec.tool!r} matched; wrong tool output?")
    return ExtractionResult(vm_id=vm_id, observations=observations,
                            warnings=tuple(warnings))


def merge_observations(mset: MeasurementSet, results) -> MeasurementSet:
    """Fold ExtractionResults into a MeasurementSet's observation cells.

    Merging is deterministic regardless of result order: cell values are
    kept sorted. Attribute ids must exist in the set's catalogue.
    """
    attr_ids = set(mset.attribute_ids)
    vm_ids = set(mset.vm_ids)
    merged = {k: list(v) for k, v in mset.observations.items()}
    for res in results:
        if res.vm_id not in vm_ids:
            raise ValueError(f"extraction for unknown vm {res.vm_id!r}")
        for attr_id, value in res.observations.items():
            if attr_id not in attr_ids:
                raise ValueError(f"extraction for unknown attribute {attr_id!r}")
            merged.setdefault((res.vm_id, attr_id), []).append(value)
    return MeasurementSet(mset.vms, mset.attributes,
                          {k: tuple(sorted(v)) for k, v in merged.items()})


def aggregate(mset: MeasurementSet,
              method: Aggregation = Aggregation.MEDIAN) -> MeasurementMatrix:
    """Collapse repeated observations to one value per (vm, attribute) cell.

    Every declared cell must have at least one observation; otherwise the
    gaps are reported via IncompleteMatrixError.
    """
    missing = [(v.id, a.id)
               for v in mset.vms for a in mset.attributes
               if (v.id, a.id) not in mset.observations]
    if missing:
        raise IncompleteMatrixError(missing)
    values = {cell: method.apply(obs) for cell, obs in mset.observations.items()}
    return MeasurementMatrix(mset.vms, mset.attributes, values)
