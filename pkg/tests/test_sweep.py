import random

import pytest

from vmrank import (
    AttributeGroup,
    MissingGroupError,
    Mode,
    SweepResult,
    WeightVector,
    enumerate_weight_vectors,
    rank_pipeline,
    top_k_frequency,
)

from conftest import make_set

G = AttributeGroup


def four_group_set(cells_by_vm: dict[str, tuple[float, float, float, float]]):
    """One attribute per group, higher_better, values per VM."""
    cells = {}
    for vm, values in cells_by_vm.items():
        for i, v in enumerate(values):
            cells[(vm, f"g{i}")] = v
    return make_set(cells, groups={f"g{i}": g for i, g in enumerate(G)})


class TestEnumeration:
    def test_cardinality(self):
        assert len(enumerate_weight_vectors()) == 1295

    def test_excludes_all_zero_and_is_lexicographic(self):
        vectors = [tuple(w) for w in enumerate_weight_vectors()]
        assert (0, 0, 0, 0) not in vectors
        assert vectors[0] == (0, 0, 0, 1)
        assert vectors[-1] == (5, 5, 5, 5)
        assert vectors == sorted(vectors)

    def test_all_distinct(self):
        vectors = [tuple(w) for w in enumerate_weight_vectors()]
        assert len(set(vectors)) == 1295


class TestTopKFrequency:
    def test_dominant_vm_always_first(self):
        mset = four_group_set({"top": (9, 9, 9, 9), "mid": (5, 5, 5, 5),
                               "low": (1, 1, 1, 1)})
        result = top_k_frequency(mset, 1, Mode.SEQUENTIAL)
        assert result.total_vectors == 1295
        assert result.per_vm["top"] == {1: 1295}
        assert result.top_k_frequency("top") == 1.0
        assert result.top_k_count("mid") == 0

    def test_symmetric_two_vm_dataset(self):
        # A leads groups 1-2, B mirrors on groups 3-4; z = +-1 per attribute
        mset = four_group_set({"A": (2, 2, 0, 0), "B": (0, 0, 2, 2)})
        result = top_k_frequency(mset, 1, Mode.SEQUENTIAL)
        assert result.per_vm["A"][1] == result.per_vm["B"][1]
        # brute-force: A wins when w1+w2 >= w3+w4 (ties count both)
        wins_a = sum(1 for w in enumerate_weight_vectors()
                     if w.w[0] + w.w[1] >= w.w[2] + w.w[3])
        assert result.per_vm["A"][1] == wins_a

    def test_k_larger_than_fleet_counts_everything(self):
        mset = four_group_set({"a": (1, 2, 3, 4), "b": (4, 3, 2, 1)})
        result = top_k_frequency(mset, 10, Mode.SEQUENTIAL)
        for vm in ("a", "b"):
            assert result.top_k_count(vm) == 1295

    def test_rank1_credited_at_least_once_per_vector(self):
        rng = random.Random(2)
        cells_by_vm = {f"vm{i}": tuple(rng.uniform(0, 10) for _ in range(4))
                       for i in range(4)}
        result = top_k_frequency(four_group_set(cells_by_vm), 3, Mode.SEQUENTIAL)
        rank1_total = sum(counts.get(1, 0) for counts in result.per_vm.values())
        assert rank1_total >= 1295

    def test_matches_per_vector_pipeline(self):
        rng = random.Random(8)
        cells_by_vm = {f"vm{i}": tuple(rng.uniform(0, 10) for _ in range(4))
                       for i in range(3)}
        mset = four_group_set(cells_by_vm)
        result = top_k_frequency(mset, 2, Mode.SEQUENTIAL)
        expected: dict[str, dict[int, int]] = {vm: {} for vm in cells_by_vm}
        for w in enumerate_weight_vectors():
            table = rank_pipeline(mset, w, Mode.SEQUENTIAL)
            for e in table.entries:
                if e.rank <= 2:
                    expected[e.vm_id][e.rank] = expected[e.vm_id].get(e.rank, 0) + 1
        assert {vm: dict(c) for vm, c in result.per_vm.items()} == expected

    def test_deterministic(self):
        mset = four_group_set({"a": (1, 5, 2, 8), "b": (3, 3, 3, 3),
                               "c": (8, 1, 6, 0)})
        r1 = top_k_frequency(mset, 3, Mode.SEQUENTIAL)
        r2 = top_k_frequency(mset, 3, Mode.SEQUENTIAL)
        assert r1 == r2
        assert r1.to_dict() == r2.to_dict()

    def test_invalid_k(self):
        mset = four_group_set({"a": (1, 2, 3, 4), "b": (4, 3, 2, 1)})
        with pytest.raises(ValueError, match="k must be >= 1"):
            top_k_frequency(mset, 0, Mode.SEQUENTIAL)

    def test_empty_group_rejected_upfront(self):
        mset = make_set({("a", "x"): 1.0, ("b", "x"): 2.0},
                        groups={"x": G.COMPUTATION})
        with pytest.raises(MissingGroupError, match="storage"):
            top_k_frequency(mset, 3, Mode.SEQUENTIAL)

    def test_parallel_mode_uses_vcpus(self):
        mset = four_group_set({"big": (5, 5, 5, 5), "small": (5, 5, 5, 5)})
        vms = tuple(
            type(v)(v.id, 32 if v.id == "big" else 2, v.memory_gib, v.processor,
                    v.clock_ghz) for v in mset.vms)
        mset = type(mset)(vms, mset.attributes, mset.observations)
        result = top_k_frequency(mset, 1, Mode.PARALLEL)
        # identical measurements: "big" wins every vector that weights computation
        with_comp = sum(1 for w in enumerate_weight_vectors() if w.w[2] > 0)
        assert result.per_vm["big"][1] == 1295
        assert result.per_vm["small"][1] == 1295 - with_comp

    def test_serialization_roundtrip(self):
        mset = four_group_set({"a": (1, 2, 3, 4), "b": (4, 3, 2, 1),
                               "c": (2, 2, 2, 2)})
        result = top_k_frequency(mset, 3, Mode.SEQUENTIAL)
        import json
        again = SweepResult.from_dict(json.loads(json.dumps(result.to_dict())))
        assert again == result
