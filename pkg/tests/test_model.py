import json

import pytest

from vmrank import (
    AttributeGroup,
    ComparisonReport,
    CorrelationMethod,
    MeasurementMatrix,
    MeasurementSet,
    Polarity,
    RankTable,
    TableKind,
    TimingRecord,
    TimingSet,
    Mode,
    UnknownFixtureError,
    VmDescriptor,
    WeightVector,
    load_fixture_dataset,
    validate_rank_table,
)

from conftest import make_vm


class TestVmDescriptor:
    def test_valid(self):
        vm = VmDescriptor("cr1.8xlarge", 32, 244.0, "Intel Xeon E5-2670", 2.6)
        assert vm.vcpus == 32

    @pytest.mark.parametrize("vcpus,memory,clock", [
        (0, 16.0, 2.5), (4, 0.0, 2.5), (4, 16.0, 0.0), (4, -1.0, 2.5),
    ])
    def test_invariants(self, vcpus, memory, clock):
        with pytest.raises(ValueError):
            VmDescriptor("x", vcpus, memory, "cpu", clock)

    def test_roundtrip(self):
        vm = VmDescriptor("m2.xlarge", 2, 17.1, "Intel Xeon E5-2665", 2.4)
        assert VmDescriptor.from_dict(json.loads(json.dumps(vm.to_dict()))) == vm


class TestAttributeGroup:
    def test_exactly_four_in_weight_order(self):
        assert [g.value for g in AttributeGroup] == [
            "memory_process", "local_communication", "computation", "storage"]
        assert [g.index for g in AttributeGroup] == [0, 1, 2, 3]

    def test_unknown_token_lists_valid_names(self):
        with pytest.raises(ValueError) as exc:
            AttributeGroup.from_token("network")
        for name in ("memory_process", "local_communication", "computation",
                     "storage"):
            assert name in str(exc.value)


class TestWeightVector:
    def test_parse(self):
        assert tuple(WeightVector.parse("5, 3, 5, 0")) == (5, 3, 5, 0)

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError, match="all.*zero"):
            WeightVector((0, 0, 0, 0))

    @pytest.mark.parametrize("w", [(6, 0, 0, 0), (0, -1, 0, 0), (5, 5, 5, 9)])
    def test_range(self, w):
        with pytest.raises(ValueError, match="range"):
            WeightVector(w)

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            WeightVector((1, 2, 3))

    def test_group_indexing(self):
        w = WeightVector((5, 3, 1, 0))
        assert w[AttributeGroup.MEMORY_PROCESS] == 5
        assert w[AttributeGroup.STORAGE] == 0


class TestMeasurementSet:
    def test_duplicate_vm_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            MeasurementSet((make_vm("a"), make_vm("a")), (), {})

    def test_unknown_reference_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            MeasurementSet((make_vm("a"),), (), {("b", "x"): (1.0,)})

    def test_empty_cell_rejected(self):
        from vmrank import AttributeDef
        attr = AttributeDef("x", "x", AttributeGroup.STORAGE,
                            Polarity.HIGHER_BETTER, "u")
        with pytest.raises(ValueError, match="no observations"):
            MeasurementSet((make_vm("a"),), (attr,), {("a", "x"): ()})


class TestMeasurementMatrix:
    def test_rectangular_enforced(self):
        from vmrank import AttributeDef
        attr = AttributeDef("x", "x", AttributeGroup.STORAGE,
                            Polarity.HIGHER_BETTER, "u")
        with pytest.raises(ValueError, match="rectangular"):
            MeasurementMatrix((make_vm("a"), make_vm("b")), (attr,),
                              {("a", "x"): 1.0})


class TestRankTable:
    def test_competition_ranks_with_tie(self):
        t = RankTable.from_scores(TableKind.BENCHMARK_SEQUENTIAL,
                                  {"a": 2.0, "b": 2.0, "c": 1.0})
        assert t.ranks() == {"a": 1, "b": 1, "c": 3}

    def test_strict_order(self):
        t = RankTable.from_scores(TableKind.BENCHMARK_SEQUENTIAL,
                                  {"a": 3.0, "b": 1.0, "c": 2.0})
        assert [e.vm_id for e in t.entries] == ["a", "c", "b"]
        assert t.ranks() == {"a": 1, "c": 2, "b": 3}

    def test_1224_pattern(self):
        t = RankTable.from_scores(TableKind.BENCHMARK_SEQUENTIAL,
                                  {"a": 5.0, "b": 4.0, "c": 4.0, "d": 3.0})
        assert [e.rank for e in t.entries] == [1, 2, 2, 4]

    def test_singleton(self):
        t = RankTable.from_scores(TableKind.BENCHMARK_SEQUENTIAL, {"only": 0.0})
        assert t.ranks() == {"only": 1}

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            RankTable.from_scores(TableKind.BENCHMARK_SEQUENTIAL, {})

    def test_tie_within_tolerance(self):
        t = RankTable.from_scores(TableKind.BENCHMARK_SEQUENTIAL,
                                  {"a": 1.0, "b": 1.0 - 1e-10, "c": 0.0})
        assert t.ranks()["a"] == t.ranks()["b"] == 1

    def test_validator_accepts_computed_tables(self):
        t = RankTable.from_scores(TableKind.BENCHMARK_SEQUENTIAL,
                                  {"a": 2.0, "b": 2.0, "c": 1.0, "d": 0.5})
        validate_rank_table(t)

    def test_validator_rejects_bad_ranks(self):
        from vmrank import RankEntry
        bad = RankTable(TableKind.BENCHMARK_SEQUENTIAL, (
            RankEntry("a", 2.0, 1), RankEntry("b", 2.0, 2), RankEntry("c", 1.0, 3)))
        with pytest.raises(ValueError, match="competition"):
            validate_rank_table(bad)

    def test_json_roundtrip(self):
        t = RankTable.from_scores(TableKind.BENCHMARK_PARALLEL,
                                  {"a": 1.5, "b": -0.5, "c": 1.5})
        again = RankTable.from_dict(json.loads(json.dumps(t.to_dict())))
        assert again == t


class TestTimings:
    def test_positive_seconds(self):
        with pytest.raises(ValueError, match="positive"):
            TimingRecord("a", Mode.SEQUENTIAL, 0.0)

    def test_mode_filter(self):
        ts = TimingSet((TimingRecord("a", Mode.SEQUENTIAL, 10.0),
                        TimingRecord("a", Mode.SEQUENTIAL, 12.0),
                        TimingRecord("b", Mode.PARALLEL, 3.0)))
        assert ts.for_mode(Mode.SEQUENTIAL) == {"a": [10.0, 12.0]}

    def test_unknown_vm_check(self):
        ts = TimingSet((TimingRecord("ghost", Mode.SEQUENTIAL, 10.0),))
        with pytest.raises(ValueError, match="ghost"):
            ts.check_vms(["a", "b"])


class TestComparisonReport:
    def test_coefficient_bounds(self):
        with pytest.raises(ValueError):
            ComparisonReport(CorrelationMethod.PEARSON_ON_RANKS, 1.5, {}, 0)

    def test_roundtrip(self):
        rep = ComparisonReport(CorrelationMethod.KENDALL_TAU, -0.25,
                               {"a": 1, "b": -1}, 2, k=3)
        again = ComparisonReport.from_dict(json.loads(json.dumps(rep.to_dict())))
        assert again == rep


class TestFixtures:
    def test_vm_specs(self):
        vms = load_fixture_dataset("vm-specs")
        assert len(vms) == 12
        cr1 = next(v for v in vms if v.id == "cr1.8xlarge")
        assert cr1.vcpus == 32
        assert cr1.memory_gib == 244.0
        m2 = next(v for v in vms if v.id == "m2.xlarge")
        assert m2.vcpus == 2

    def test_casestudy1(self):
        cs = load_fixture_dataset("casestudy1-ranks")
        assert tuple(cs.weights) == (5, 3, 5, 0)
        bench = cs.table(TableKind.BENCHMARK_SEQUENTIAL)
        emp = cs.table(TableKind.EMPIRICAL_SEQUENTIAL)
        assert len(bench.entries) == 12
        assert bench.rank_of("cc1.4xlarge") == 1
        assert emp.rank_of("cc1.4xlarge") == 2
        # the empirical column's tie structure starts 1,2,2,2,5
        ranks = sorted(e.rank for e in emp.entries)
        assert ranks[:5] == [1, 2, 2, 2, 5]

    def test_casestudy2(self):
        cs = load_fixture_dataset("casestudy2-ranks")
        assert tuple(cs.weights) == (4, 3, 5, 0)
        assert len(cs.table(TableKind.BENCHMARK_SEQUENTIAL).entries) == 11
        assert "cg1.4xlarge" not in cs.table(TableKind.BENCHMARK_SEQUENTIAL).vm_ids
        assert cs.table(TableKind.BENCHMARK_PARALLEL).rank_of("cr1.8xlarge") == 1
        assert cs.table(TableKind.EMPIRICAL_PARALLEL).rank_of("cr1.8xlarge") == 1

    def test_fixture_tables_roundtrip(self):
        cs = load_fixture_dataset("casestudy1-ranks")
        for table in cs.tables.values():
            again = RankTable.from_dict(json.loads(json.dumps(table.to_dict())))
            assert again == table

    def test_unknown_fixture(self):
        with pytest.raises(UnknownFixtureError, match="vm-specs"):
            load_fixture_dataset("nope")
