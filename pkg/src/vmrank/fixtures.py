"""Bundled datasets: VM catalogue, case-study rank tables, demo files.

The two case studies ship the published benchmark and empirical rank
columns verbatim so correlation results are reproducible offline:

* casestudy1-ranks — aggregate risk analysis, 12 VMs, weights 5,3,5,0
* casestudy2-ranks — molecular dynamics, 11 VMs, weights 4,3,5,0
* vm-specs         — the 12 EC2 VM descriptors

The demo measurement dataset is synthetic but constructed so that weights
5,3,5,0 reproduce case study 1's sequential benchmark ranking, and the
bundled timing fixture approximates its empirical ranking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import DataFormatError, UnknownFixtureError
from .ingest import _content_lines, _fields, _parse_int, parse_vm_row
from .model import RankTable, TableKind, VmDescriptor, WeightVector

FIXTURE_NAMES = ("vm-specs", "casestudy1-ranks", "casestudy2-ranks")

_SECTION_RE = re.compile(r"^\[(?P<name>[a-z_]+)\]$")


@dataclass(frozen=True)
class CaseStudyRanks:
    """Published rankings of one case-study application."""

    name: str
    weights: WeightVector
    tables: Mapping[TableKind, RankTable]

    def __post_init__(self):
        object.__setattr__(self, "tables", dict(self.tables))

    def table(self, kind: TableKind) -> RankTable:
        return self.tables[kind]


def _data_path(*parts: str) -> Path:
    return Path(str(resources.files("vmrank").joinpath("data", *parts)))


def demo_measurements_path() -> Path:
    """The bundled demo measurement dataset (12 VMs x 17 attributes)."""
    return _data_path("demo_measurements.txt")


def casestudy1_timings_path() -> Path:
    """Timing fixture approximating case study 1's empirical rankings."""
    return _data_path("casestudy1_timings.txt")


def extraction_spec_path(tool: str) -> Path:
    """Bundled best-effort extraction spec for lmbench, bonnie or sysbench."""
    path = _data_path("specs", f"{tool}.json")
    if not path.exists():
        raise UnknownFixtureError(f"no bundled extraction spec for {tool!r}")
    return path


def _parse_vm_specs(text: str) -> tuple[VmDescriptor, ...]:
    vms = []
    for no, line in _content_lines(text):
        if _SECTION_RE.match(line):
            continue
        vms.append(parse_vm_row(_fields(line, 5, no), no))
    return tuple(vms)


def _parse_ranks(text: str, name: str) -> CaseStudyRanks:
    weights: WeightVector | None = None
    ranks: dict[TableKind, dict[str, int]] = {k: {} for k in TableKind}
    section = None
    for no, line in _content_lines(text):
        m = _SECTION_RE.match(line)
        if m:
            section = m.group("name")
            continue
        if section == "weights":
            weights = WeightVector.parse(line)
        elif section == "ranks":
            vm_id, kind_token, rank_token = _fields(line, 3, no)
            try:
                kind = TableKind(kind_token)
            except ValueError:
                valid = ", ".join(k.value for k in TableKind)
                raise DataFormatError(
                    f"unknown table {kind_token!r}; valid tables: {valid}", no
                ) from None
            ranks[kind][vm_id] = _parse_int(rank_token, no, "rank")
        else:
            raise DataFormatError("data outside [weights]/[ranks] sections", no)
    if weights is None:
        raise DataFormatError("fixture has no [weights] section")
    tables = {kind: RankTable.from_published(kind, by_vm)
              for kind, by_vm in ranks.items() if by_vm}
    return CaseStudyRanks(name=name, weights=weights, tables=tables)


def load_fixture_dataset(name: str):
    """Load a bundled fixture by name.

    Returns a tuple of VmDescriptor for "vm-specs" and a CaseStudyRanks
    for "casestudy1-ranks" / "casestudy2-ranks". The returned objects are
    immutable.
    """
    if name == "vm-specs":
        return _parse_vm_specs(_data_path("vm_specs.txt").read_text(encoding="utf-8"))
    if name == "casestudy1-ranks":
        return _parse_ranks(
            _data_path("casestudy1_ranks.txt").read_text(encoding="utf-8"), name)
    if name == "casestudy2-ranks":
        return _parse_ranks(
            _data_path("casestudy2_ranks.txt").read_text(encoding="utf-8"), name)
    raise UnknownFixtureError(
        f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
