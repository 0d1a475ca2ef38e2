"""Tests for witness construction"""

import time
from fractions import Fraction

import pytest

from errors import ArgumentError, ConstructionError
from pauli_core import MeasurementSetting, PauliString, enumerate_bipartitions, parse_bipartition
from state_engine import make_state, nonvanishing_correlations
from witness_builder import (
    CriterionKind,
    CutCriterion,
    WitnessSpec,
    build_combined_witness,
    build_cut_criteria,
    build_graph,
    max_weight_independent,
    maximal_independent_sets,
    named_criteria,
    nqubit_cluster_witness,
    nqubit_ghz_witness,
    optimality_certificate,
    optimize_weights,
    propose_settings,
    select_operators,
)

P = PauliString.from_digits
S = MeasurementSetting.from_label

GHZ_OPS = ["0033", "0303", "0330", "3003", "3030", "3300", "3333", "1221"]
CLUSTER_OPS = ["0033", "1103", "1130", "0311", "3011", "3300"]
CUTS = enumerate_bipartitions(4)


class TestSelection:
    def test_ghz_operators(self, ghz_corrs):
        ops = select_operators(ghz_corrs, [S("3333"), S("1221")])
        assert [j.label for j in ops] == GHZ_OPS

    def test_cluster_operators(self, cluster_corrs):
        ops = select_operators(cluster_corrs, [S("1133"), S("3311")])
        assert [j.label for j in ops] == CLUSTER_OPS

    def test_nothing_usable(self, ghz_corrs):
        with pytest.raises(ConstructionError, match="no usable operators"):
            select_operators(ghz_corrs, [S("1113")])

    def test_min_abs_filters(self):
        corrs = nonvanishing_correlations(make_state("w", 4))
        ops = select_operators(corrs, [S("3333")], min_abs=0.9)
        assert [j.label for j in ops] == ["3333"]

    def test_needs_settings(self, ghz_corrs):
        with pytest.raises(ArgumentError):
            select_operators(ghz_corrs, [])


class TestGraphs:
    def test_ghz_ab_cd_neighbours(self):
        ops = [P(x) for x in GHZ_OPS]
        graph = build_graph(ops, parse_bipartition("AB|CD"))
        assert [ops[i].label for i in graph.neighbours(7)] == ["0303", "0330", "3003", "3030"]
        assert graph.degree(0) == 0

    def test_global_graph_of_commuting_set_is_empty(self):
        graph = build_graph([P(x) for x in GHZ_OPS], None)
        assert not graph.edges
        assert graph.label == "global"

    def test_ab_cd_independent_sets(self):
        ops = [P(x) for x in GHZ_OPS]
        sets = maximal_independent_sets(build_graph(ops, parse_bipartition("AB|CD")))
        assert sets == [(0, 1, 2, 3, 4, 5, 6), (0, 5, 6, 7)]

    def test_max_weight_independent(self):
        ops = [P(x) for x in GHZ_OPS]
        weights = [1] * 7 + [4]
        value, assignment = max_weight_independent(build_graph(ops, parse_bipartition("AB|CD")), weights)
        assert value == 7
        assert sum(assignment) == 7
        value, assignment = max_weight_independent(build_graph(ops, None), weights)
        assert value == 11
        assert assignment == [1] * 8

    def test_weights_must_match(self):
        graph = build_graph([P("33"), P("11")], None)
        with pytest.raises(ArgumentError):
            max_weight_independent(graph, [1])
        with pytest.raises(ArgumentError):
            max_weight_independent(graph, [1, 0])


class TestWeights:
    def test_ghz_weights(self, ghz_corrs):
        solution = optimize_weights([P(x) for x in GHZ_OPS], CUTS, ghz_corrs)
        weights, g, g0 = solution
        assert weights == tuple([Fraction(1)] * 7 + [Fraction(4)])
        assert (g, g0) == (7, 11)
        assert solution.t_star == Fraction(7, 11)
        assert len(solution.binding_cuts) == 7
        assert not solution.degenerate

    def test_cluster_weights(self, cluster_corrs):
        weights, g, g0 = optimize_weights([P(x) for x in CLUSTER_OPS], CUTS, cluster_corrs)
        assert weights == tuple([Fraction(1)] * 6)
        assert (g, g0) == (4, 6)

    def test_vanishing_target_correlation(self, ghz_corrs):
        with pytest.raises(ConstructionError):
            optimize_weights([P("3000"), P("3333")], CUTS, ghz_corrs)

    def test_certificate(self, cluster_witness, cluster_corrs):
        report = optimality_certificate(cluster_witness, cluster_corrs)
        assert report["optimum"] == "2/3"
        assert report["local_ok"]
        assert report["grid_checked"] and report["grid_ok"]


class TestCombinedWitness:
    def test_ghz_build(self, ghz_corrs):
        spec = build_combined_witness(ghz_corrs, [S("3333"), S("1221")], family="ghz")
        assert [j.label for j in spec.operators] == GHZ_OPS
        assert spec.threshold == Fraction(7, 11)
        assert spec.weight_of(P("1221")) == 4
        assert spec.metadata["ideal_value"] == "1/1"
        assert spec.metadata["flags"]["noncommuting_selection"] is False
        assert spec.commuting

    def test_ghz_cut_criteria_match_published(self, ghz_corrs):
        spec = build_combined_witness(ghz_corrs, [S("3333"), S("1221")])
        published = {c.cut.label: c for c in named_criteria("ghz4").criteria}
        assert [c.cut.label for c in spec.per_cut_criteria] == [c.label for c in CUTS]
        for criterion in spec.per_cut_criteria:
            assert criterion.class_b == (P("1221"),)
            assert set(criterion.class_a) == set(published[criterion.cut.label].class_a)
            assert criterion.ideal_score == pytest.approx(1.0)

    def test_cluster_build(self, cluster_corrs):
        spec = build_combined_witness(cluster_corrs, [S("1133"), S("3311")])
        assert spec.threshold == Fraction(2, 3)
        kinds = {c.cut.label: c.kind for c in spec.per_cut_criteria}
        assert kinds["A|BCD"] is CriterionKind.BICLIQUE
        assert all(c.available for c in spec.per_cut_criteria)

    def test_single_setting_cannot_detect(self, ghz_corrs):
        with pytest.raises(ConstructionError):
            build_combined_witness(ghz_corrs, [S("3333")])

    def test_auto_settings_for_ghz(self, ghz_corrs):
        pair = propose_settings(ghz_corrs)
        assert [k.label for k in pair] == ["1111", "3333"]
        spec = build_combined_witness(ghz_corrs)
        assert spec.threshold == Fraction(7, 11)

    def test_dicke_uses_noncommuting_operators(self):
        corrs = nonvanishing_correlations(make_state("dicke", 4, excitations=2))
        spec = build_combined_witness(corrs, [S("1111"), S("2222")])
        assert spec.metadata["flags"]["noncommuting_selection"] is True
        assert len(spec.operators) == 14
        assert spec.g < spec.g0


class TestCriteria:
    def test_biclique_validation(self):
        cut = parse_bipartition("A|BCD")
        with pytest.raises(ArgumentError):
            CutCriterion(cut, (P("0033"),), (P("1221"),))
        with pytest.raises(ArgumentError):
            CutCriterion(cut, (P("3333"),), kind=CriterionKind.AVERAGED)

    def test_members_must_commute(self):
        with pytest.raises(ArgumentError):
            CutCriterion(parse_bipartition("A|B"), (P("30"),), (P("10"),))

    def test_coefficients(self):
        criterion = named_criteria("ghz4").criteria[0]
        coeffs = criterion.coefficients
        assert coeffs[P("1221")] == Fraction(1, 2)
        assert coeffs[P("3333")] == Fraction(1, 8)

    def test_unavailable_cut(self):
        ops = [P("3300"), P("0033"), P("3333")]
        criteria = build_cut_criteria(ops, None, CUTS)
        assert not any(c.available for c in criteria)

    def test_build_requires_commuting(self):
        with pytest.raises(ArgumentError):
            build_cut_criteria([P("3000"), P("1000")], None, CUTS)


class TestNamedCriteria:
    @pytest.mark.parametrize("family,threshold,ideal", [
        ("ghz4", Fraction(7, 11), "1/1"),
        ("cluster4", Fraction(2, 3), "1/1"),
        ("dicke42", Fraction(4, 5), "14/15"),
        ("singlet4", Fraction(3, 5), "7/9"),
    ])
    def test_combined(self, family, threshold, ideal):
        named = named_criteria(family)
        assert named.combined.threshold == threshold
        assert named.combined.metadata["ideal_value"] == ideal
        assert len(named.criteria) == 7

    def test_w_has_no_combined_witness(self):
        named = named_criteria("w4")
        assert named.combined is None
        assert named.criteria[0].ideal_score == pytest.approx(5 / 8)

    def test_ideal_scores(self):
        dicke = named_criteria("dicke42").criteria
        assert dicke[0].ideal_score == pytest.approx(1.0)
        assert dicke[4].ideal_score == pytest.approx(13 / 18)
        singlet = named_criteria("singlet4").criteria
        assert singlet[4].ideal_score == pytest.approx(13 / 18)

    def test_cluster_averaged_cuts(self):
        criteria = {c.cut.label: c for c in named_criteria("cluster4").criteria}
        assert criteria["AC|BD"].kind is CriterionKind.AVERAGED
        assert criteria["AC|BD"].ideal_score == pytest.approx(1.0)

    def test_unknown_family(self):
        with pytest.raises(ArgumentError):
            named_criteria("triangle")


def exact_g(spec):
    """Largest independent-set weight over every cut, by enumeration"""
    return max(max_weight_independent(build_graph(spec.operators, cut), spec.weights)[0]
               for cut in enumerate_bipartitions(spec.n_qubits))


class TestFamilies:
    @pytest.mark.parametrize("n,threshold", [(3, Fraction(3, 5)), (4, Fraction(7, 11)),
                                             (5, Fraction(15, 23))])
    def test_ghz_family(self, n, threshold):
        spec = nqubit_ghz_witness(n)
        assert spec.threshold == threshold
        state = nonvanishing_correlations(make_state("ghz", n))
        assert spec.ideal_value(state) == 1

    def test_ghz_family_criteria(self):
        spec = nqubit_ghz_witness(4)
        assert len(spec.per_cut_criteria) == 7
        assert nqubit_ghz_witness(4, with_criteria_up_to=3).per_cut_criteria == ()

    def test_cluster_family(self):
        spec = nqubit_cluster_witness(4)
        assert {j.label for j in spec.operators} == {"1300", "0313", "1013", "3130", "0031", "3101"}
        assert (spec.g, spec.g0) == (4, 6)
        state = nonvanishing_correlations(make_state("cluster", 4))
        assert spec.ideal_value(state) == 1

    def test_cluster_family_needs_even_n(self):
        with pytest.raises(ArgumentError):
            nqubit_cluster_witness(5)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_ghz_bound_matches_enumeration(self, n):
        spec = nqubit_ghz_witness(n, with_criteria_up_to=0)
        assert exact_g(spec) == spec.g
        assert sum(spec.weights) == spec.g0

    @pytest.mark.parametrize("n", [4, 6])
    def test_cluster_bound_matches_enumeration(self, n):
        spec = nqubit_cluster_witness(n, with_criteria_up_to=0)
        assert exact_g(spec) == spec.g
        assert sum(spec.weights) == spec.g0

    @pytest.mark.parametrize("build,sizes,limit", [
        (nqubit_ghz_witness, range(3, 13), Fraction(2, 3)),
        (nqubit_cluster_witness, range(4, 13, 2), Fraction(3, 4)),
    ])
    def test_thresholds_rise_toward_limit(self, build, sizes, limit):
        thresholds = []
        for n in sizes:
            start = time.perf_counter()
            spec = build(n)
            assert time.perf_counter() - start < 10.0
            thresholds.append(spec.threshold)
        assert all(a < b for a, b in zip(thresholds, thresholds[1:]))
        assert all(t < limit for t in thresholds)
        assert limit - thresholds[-1] < Fraction(1, 100)


class TestWitnessSpec:
    def test_non_detecting_rejected(self):
        with pytest.raises(ConstructionError):
            WitnessSpec(4, (P("3333"),), (1,), g0=1, g=1, settings=(S("3333"),))

    def test_underivable_operator_rejected(self):
        with pytest.raises(ConstructionError):
            WitnessSpec(4, (P("1221"),), (1,), g0=2, g=1, settings=(S("3333"),))

    def test_weights_positive(self):
        with pytest.raises(ArgumentError):
            WitnessSpec(4, (P("3333"),), (0,), g0=2, g=1, settings=(S("3333"),))

    def test_default_id(self, ghz_witness):
        spec = WitnessSpec(4, ghz_witness.operators, ghz_witness.weights, 11, 7,
                           ghz_witness.settings)
        assert spec.witness_id == "witness-4q-3333-1221"
