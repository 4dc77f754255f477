import random

import pytest

from vmrank import (
    AttributeDef,
    AttributeGroup,
    MeasurementSet,
    Polarity,
    VmDescriptor,
    WeightVector,
    demo_measurements_path,
    load_measurements_path,
)

GROUPS = list(AttributeGroup)


@pytest.fixture(scope="session")
def demo_set() -> MeasurementSet:
    return load_measurements_path(demo_measurements_path())


def make_vm(vm_id: str, vcpus: int = 4) -> VmDescriptor:
    return VmDescriptor(vm_id, vcpus, 16.0, "Test CPU", 2.5)


def make_set(cells: dict, vcpus: dict | None = None,
             polarity: dict | None = None,
             groups: dict | None = None) -> MeasurementSet:
    """Build a MeasurementSet from {(vm, attr): value-or-list} cells.

    Attribute group defaults to round-robin over the four groups in
    declaration order; polarity defaults to higher_better.
    """
    vm_ids = sorted({vm for vm, _ in cells})
    attr_ids = sorted({attr for _, attr in cells})
    vms = tuple(make_vm(v, (vcpus or {}).get(v, 4)) for v in vm_ids)
    attrs = tuple(
        AttributeDef(
            a, a.replace("_", " "),
            (groups or {}).get(a, GROUPS[i % 4]),
            (polarity or {}).get(a, Polarity.HIGHER_BETTER),
            "unit")
        for i, a in enumerate(attr_ids))
    observations = {
        key: tuple(v) if isinstance(v, (list, tuple)) else (float(v),)
        for key, v in cells.items()
    }
    return MeasurementSet(vms, attrs, observations)


def random_instance(rng: random.Random, max_vms: int = 6,
                    max_attrs_per_group: int = 3):
    """Random small dataset with every group populated, plus valid weights."""
    m = rng.randint(2, max_vms)
    vms = tuple(make_vm(f"vm{i:02d}", rng.randint(1, 32)) for i in range(m))
    attrs = []
    for group in GROUPS:
        for j in range(rng.randint(1, max_attrs_per_group)):
            attrs.append(AttributeDef(
                f"{group.value}_{j}", f"{group.value} {j}", group,
                rng.choice(list(Polarity)), "unit"))
    observations = {}
    for vm in vms:
        for attr in attrs:
            reps = rng.randint(1, 4)
            base = rng.uniform(1.0, 1000.0)
            observations[(vm.id, attr.id)] = tuple(
                base * rng.uniform(0.9, 1.1) for _ in range(reps))
    mset = MeasurementSet(vms, tuple(attrs), observations)
    while True:
        w = tuple(rng.randint(0, 5) for _ in range(4))
        if any(w):
            return mset, WeightVector(w)


def pytest_runtest_logreport(report):
    # surface one visible line per acceptance criterion, pass or fail
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\nACCEPTANCE {report.outcome.upper()}: {name}", flush=True)
