"""Tests for witness evaluation and sweeps"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from config.witness_catalog import REPORTED_VALUES, SWEEP_RESULTS
from errors import ArgumentError, DataError
from evaluator import (
    SWEEP_COLUMNS,
    Verdict,
    critical_noise,
    evaluate,
    evaluate_criterion,
    monte_carlo_stderr,
    significance_check,
    sweep_to_frame,
    theta_sweep,
    threshold_crossing,
)
from pauli_core import parse_bipartition
from state_engine import (
    CorrelationSet,
    add_white_noise,
    correlation,
    make_state,
    nonvanishing_correlations,
)
from witness_builder import CutCriterion, named_criteria


def w_ghz(theta):
    return (7 + 4 * math.cos(4 * theta) ** 2) / 11


def w_cluster(theta):
    return (2 + 4 * math.sin(4 * theta) ** 2) / 6


class TestSignificance:
    def test_plain(self):
        assert significance_check(0.9, 0.01, 0.7) == pytest.approx(20.0)

    def test_zero_stderr(self):
        assert significance_check(0.9, 0.0, 0.7) == math.inf
        assert significance_check(0.5, 0.0, 0.7) == -math.inf
        assert significance_check(0.7, 0.0, 0.7) == 0.0

    def test_negative_stderr(self):
        with pytest.raises(ArgumentError):
            significance_check(0.9, -0.1, 0.7)


class TestMeasuredData:
    def test_ghz_combined(self, ghz_witness, measured_ghz):
        report = evaluate(ghz_witness, measured_ghz)
        assert report.value == pytest.approx(0.91652, abs=5e-5)
        assert report.stderr == pytest.approx(0.00437, abs=5e-5)
        assert report.threshold == pytest.approx(7 / 11)
        assert report.verdict is Verdict.GENUINE_MULTIPARTITE
        assert report.significance > 50
        assert report.value == pytest.approx(REPORTED_VALUES["ghz4"]["combined"][0], abs=1e-3)

    def test_cluster_combined(self, cluster_witness, measured_cluster):
        report = evaluate(cluster_witness, measured_cluster)
        assert report.value == pytest.approx(0.93976, abs=5e-5)
        assert report.stderr == pytest.approx(0.00314, abs=5e-5)
        assert report.detected

    def test_ghz_per_cut(self, ghz_witness, measured_ghz):
        report = evaluate(ghz_witness, measured_ghz)
        by_cut = {r.cut: r for r in report.per_cut}
        assert by_cut["A|BCD"].value == pytest.approx(0.9056, abs=5e-4)
        assert all(r.detected for r in report.per_cut)
        for label, (value, _) in REPORTED_VALUES["ghz4"].items():
            if label != "combined":
                assert by_cut[label].value == pytest.approx(value, abs=0.015)

    def test_cluster_per_cut(self, cluster_witness, measured_cluster):
        report = evaluate(cluster_witness, measured_cluster)
        for r in report.per_cut:
            assert r.detected
            assert r.value == pytest.approx(REPORTED_VALUES["cluster4"][r.cut][0], abs=0.02)

    def test_metadata(self, ghz_witness, measured_ghz):
        report = evaluate(ghz_witness, measured_ghz)
        assert report.metadata["independence_approximation"] is True
        assert report.metadata["detected_by"] == "combined"

    def test_missing_correlation(self, ghz_witness):
        partial = CorrelationSet.from_labels({"3333": (0.98, 0.003)})
        with pytest.raises(DataError, match="1221|0033"):
            evaluate(ghz_witness, partial)

    def test_bias_corrected_value_is_lower(self, ghz_witness, measured_ghz):
        report = evaluate(ghz_witness, measured_ghz)
        assert report.value_bias_corrected < report.value

    def test_report_dict(self, ghz_witness, measured_ghz):
        payload = evaluate(ghz_witness, measured_ghz).to_dict()
        assert payload["verdict"] == "GenuineMultipartite"
        assert len(payload["per_cut"]) == 7


class TestIdealAndNoise:
    def test_ideal_ghz_is_maximal(self, ghz_witness, ghz_corrs):
        report = evaluate(ghz_witness, ghz_corrs)
        assert report.value == pytest.approx(1.0)
        assert report.stderr == 0.0
        assert report.significance == math.inf

    def test_not_detected_below_threshold(self, ghz_witness):
        rho = add_white_noise(make_state("ghz", 4), 0.7)
        report = evaluate(ghz_witness, nonvanishing_correlations(rho))
        assert report.verdict is Verdict.NOT_DETECTED
        assert report.detected is False

    def test_critical_noise(self, ghz_witness, cluster_witness, ghz_corrs, cluster_corrs):
        assert critical_noise(ghz_witness, ghz_corrs) == pytest.approx(math.sqrt(7 / 11))
        assert critical_noise(cluster_witness, cluster_corrs) == pytest.approx(math.sqrt(2 / 3))

    def test_critical_noise_not_detecting(self, ghz_witness):
        w_corrs = nonvanishing_correlations(make_state("w", 4))
        full = CorrelationSet(4, {j: w_corrs.get(j, (0.0, 0.0)) for j in ghz_witness.operators})
        assert critical_noise(ghz_witness, full) is None

    def test_threshold_crossing_matches_closed_form(self, ghz_witness):
        p = threshold_crossing(ghz_witness, make_state("ghz", 4))
        assert p == pytest.approx(math.sqrt(7 / 11), abs=1e-9)

    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_noise_scales_quadratically(self, p):
        witness = named_criteria("cluster4").combined
        rho = add_white_noise(make_state("cluster4", 4), p)
        corrs = CorrelationSet(4, {j: (correlation(rho, j), 0.0) for j in witness.operators})
        report = evaluate(witness, corrs)
        assert report.value == pytest.approx(p * p, abs=1e-9)


class TestCriterion:
    def test_unavailable(self, measured_ghz):
        result = evaluate_criterion(CutCriterion.unavailable(parse_bipartition("A|BCD")), measured_ghz)
        assert result.verdict == "unavailable"
        assert result.value is None


class TestMonteCarlo:
    def test_agrees_with_propagation(self, ghz_witness, measured_ghz):
        analytic = evaluate(ghz_witness, measured_ghz).stderr
        sampled = monte_carlo_stderr(ghz_witness, measured_ghz, repetitions=20000, seed=3)
        assert sampled == pytest.approx(analytic, rel=0.05)

    def test_repetitions(self, ghz_witness, measured_ghz):
        with pytest.raises(ArgumentError):
            monte_carlo_stderr(ghz_witness, measured_ghz, repetitions=1)


class TestSweep:
    def test_closed_forms(self):
        thetas = np.linspace(0, math.pi / 4, 13)
        points = theta_sweep(math.pi, thetas)
        assert len(points) == 13
        for pt in points:
            assert pt.w_ghz == pytest.approx(w_ghz(pt.theta), abs=1e-9)
            assert pt.w_cluster == pytest.approx(w_cluster(pt.theta), abs=1e-9)
            assert pt.fidelity == pytest.approx(1.0)

    def test_endpoints(self):
        points = theta_sweep(math.pi, [math.pi / 8, 0.0])
        assert points[0].theta == 0.0
        assert points[0].w_ghz == pytest.approx(1.0)
        assert points[0].w_cluster == pytest.approx(1 / 3)
        assert points[1].w_ghz == pytest.approx(7 / 11)
        assert points[1].w_cluster == pytest.approx(1.0)

    def test_both_witnesses_detect_in_between(self):
        pt = theta_sweep(math.pi, [math.pi / 12])[0]
        assert pt.w_cluster == pytest.approx(5 / 6)
        assert pt.w_ghz == pytest.approx(8 / 11)
        assert pt.w_ghz > 7 / 11 and pt.w_cluster > 2 / 3

    @given(st.floats(min_value=0.0, max_value=math.pi / 4))
    def test_symmetry(self, theta):
        a, b = theta_sweep(math.pi, [theta, math.pi / 4 - theta])
        assert a.w_ghz == pytest.approx(b.w_ghz, abs=1e-9)
        assert a.w_cluster == pytest.approx(b.w_cluster, abs=1e-9)

    def test_target_fidelity(self):
        pt = theta_sweep(math.pi, [0.0], target_fidelity=0.96)[0]
        assert pt.fidelity == pytest.approx(0.96)

    def test_noise_list_length(self):
        with pytest.raises(ArgumentError):
            theta_sweep(math.pi, [0.0, 0.1], noise_p=[1.0])

    def test_frame(self):
        frame = sweep_to_frame(theta_sweep(math.pi, [0.0, math.pi / 8]))
        assert list(frame.columns) == SWEEP_COLUMNS
        assert len(frame) == 2

    def test_measured_sweep(self):
        thetas = [k * math.pi / 48 for k, *_ in SWEEP_RESULTS]
        fidelities = [f for _, (f, _), _, _ in SWEEP_RESULTS]
        measured_ghz = [w for _, _, (w, _), _ in SWEEP_RESULTS]
        measured_cluster = [w for _, _, _, (w, _) in SWEEP_RESULTS]
        ideal = theta_sweep(math.pi, thetas)
        for pt, (_, _, (wg, sg), (wc, sc)) in zip(ideal, SWEEP_RESULTS):
            assert wg <= pt.w_ghz + 3 * sg
            assert wc <= pt.w_cluster + 3 * sc
        # GHZ witness lowest and cluster witness highest at θ = π/8
        assert int(np.argmin(measured_ghz)) == int(np.argmin([pt.w_ghz for pt in ideal])) == 6
        assert int(np.argmax(measured_cluster)) == int(np.argmax([pt.w_cluster for pt in ideal])) == 6
        noisy = theta_sweep(math.pi, thetas, target_fidelity=fidelities)
        for pt, w in zip(noisy, measured_ghz):
            assert pt.w_ghz == pytest.approx(w, abs=0.04)
