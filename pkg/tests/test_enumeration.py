import pytest

from sematlas.classify import canonical_form, find_isomorphism
from sematlas.core import FaceSeqType, euler_characteristic, is_orientable, is_semi_equivelar
from sematlas.enumeration import (
    BudgetExceeded,
    Infeasible,
    enumerate_sems,
    face_counts,
    gate_reason,
    min_vertices_gate,
    star_vertex_bound,
)

T334 = FaceSeqType((3, 3, 3, 4, 4))


class TestFaceCounts:
    def test_example_10(self):
        prof = face_counts(T334, 10)
        assert prof.count(3) == 10 and prof.count(4) == 5
        assert prof.n_edges == 25

    def test_parity_infeasible(self):
        assert isinstance(face_counts(T334, 9), Infeasible)

    def test_kagome_counts(self):
        prof = face_counts(FaceSeqType((3, 6, 3, 6)), 12)
        assert prof.count(3) == 8 and prof.count(6) == 4


class TestGate:
    def test_small_type_range(self):
        assert min_vertices_gate(T334, 15) == [8, 10, 12, 14]

    def test_large_links_infeasible(self):
        assert min_vertices_gate(FaceSeqType((3, 12, 12)), 20) == []
        assert min_vertices_gate(FaceSeqType((4, 6, 12)), 20) == []

    def test_star_bounds_are_constructive(self):
        assert star_vertex_bound(FaceSeqType((3, 12, 12))) == 22
        assert star_vertex_bound(T334) == 8
        assert star_vertex_bound(FaceSeqType((4, 8, 8))) == 15

    def test_gate_reasons(self):
        assert "22" in gate_reason(FaceSeqType((3, 12, 12)), 20)
        assert "12" in gate_reason(FaceSeqType((4, 6, 12)), 20)


class TestSearch:
    def test_smallest_cell_empty(self):
        assert enumerate_sems(T334, 8) == []

    def test_ten_vertex_cell(self, t_1_10, k_1_10):
        maps = enumerate_sems(T334, 10)
        assert len(maps) == 2
        found = {frozenset((find_isomorphism(m, t_1_10) is not None,
                            find_isomorphism(m, k_1_10) is not None))
                 for m in maps}
        assert found == {frozenset({True, False})}

    def test_outputs_validate_and_match_type(self):
        for m in enumerate_sems(T334, 12):
            assert is_semi_equivelar(m) == T334
            assert euler_characteristic(m) == 0

    def test_pairwise_non_isomorphic(self):
        maps = enumerate_sems(T334, 12)
        for i, a in enumerate(maps):
            for b in maps[i + 1:]:
                assert find_isomorphism(a, b) is None

    def test_budget_counts_match_profile(self):
        prof = face_counts(T334, 12)
        for m in enumerate_sems(T334, 12):
            sizes = {}
            for f in m.faces:
                sizes[len(f)] = sizes.get(len(f), 0) + 1
            assert sizes == dict(prof.counts)

    def test_deterministic(self):
        a = [canonical_form(m).form for m in enumerate_sems(T334, 12)]
        b = [canonical_form(m).form for m in enumerate_sems(T334, 12)]
        assert a == b

    def test_budget_exceeded(self):
        with pytest.raises(BudgetExceeded):
            enumerate_sems(T334, 12, budget=5)

    def test_one_kagome_square_map(self):
        maps = enumerate_sems(FaceSeqType((3, 3, 4, 3, 4)), 12)
        assert len(maps) == 1
        assert not is_orientable(maps[0])


class TestPruneSoundness:
    @pytest.mark.parametrize("sizes,n", [
        ((3, 3, 3, 4, 4), 10),
        ((3, 3, 3, 4, 4), 12),
        ((3, 3, 4, 3, 4), 12),
        ((3, 4, 6, 4), 18),
        ((3, 6, 3, 6), 15),
        ((4, 8, 8), 16),
    ])
    def test_speed_prunes_change_nothing(self, sizes, n):
        """The lookahead prunes must be pure accelerators: running without
        them yields the identical set of isomorphism classes."""
        from sematlas.enumeration import _Searcher, face_counts

        t = FaceSeqType(sizes)
        results = {}
        for fast in (True, False):
            s = _Searcher(t, n, face_counts(t, n), None, fast_prunes=fast)
            s.run()
            results[fast] = sorted(canonical_form(m).form for m in s.results)
        assert results[True] == results[False]


class TestClassifyAll:
    def test_table_rows(self):
        from sematlas.enumeration import classify_all

        rows = classify_all(15, [T334, FaceSeqType((3, 12, 12))])
        feasible = [r for r in rows if not r.infeasible_reason]
        gated = [r for r in rows if r.infeasible_reason]
        assert [(r.n, r.total, r.orientable) for r in feasible] == [
            (8, 0, 0), (10, 2, 1), (12, 5, 3), (14, 3, 2)]
        assert len(gated) == 1 and "22" in gated[0].infeasible_reason
        for r in feasible:
            assert r.total == r.orientable + r.non_orientable
            assert len(r.maps) == r.total
