import math

import numpy as np
import pytest

from mlrt.exceptions import ValidationError
from mlrt.models.distribution import Distribution
from mlrt.models.experiment import ExperimentConfig
from mlrt.models.exponents import MismatchedTest
from mlrt.services.experiment_orchestrator import ExperimentOrchestrator
from mlrt.utils.simplex_core import llr_gap
from tests.conftest import E1_HALF, E2_HALF, GAMMA_HALF, KL_12

P_HAT1 = Distribution([0.9, 0.1])
P_HAT2 = Distribution([0.2, 0.8])


@pytest.fixture
def orchestrator(tolerance):
    """Orchestrator with a small worker pool."""
    return ExperimentOrchestrator(tolerance, workers=2)


@pytest.mark.integration
class TestResolveGamma:
    """Test cases for the automatic threshold keywords."""

    def test_keywords(self, mismatched_binary):
        p1 = mismatched_binary['p1']
        p_hat1, p_hat2 = mismatched_binary['p_hat1'], mismatched_binary['p_hat2']
        bayes = ExperimentConfig(gamma='auto_bayes')
        stein = ExperimentConfig(gamma='auto_stein')
        fixed = ExperimentConfig(gamma=0.25)
        assert ExperimentOrchestrator.resolve_gamma(bayes, p1, p_hat1, p_hat2) == 0.0
        assert ExperimentOrchestrator.resolve_gamma(stein, p1, p_hat1, p_hat2) == pytest.approx(
            llr_gap(p1, p_hat1, p_hat2), abs=1e-15)
        assert ExperimentOrchestrator.resolve_gamma(fixed, p1, p_hat1, p_hat2) == 0.25


@pytest.mark.integration
class TestSubcommands:
    """Test cases for the report of each subcommand."""

    def test_exponents(self, orchestrator):
        report = orchestrator.cmd_exponents(ExperimentConfig(p1=P_HAT1, p2=P_HAT2,
                                                             gamma=GAMMA_HALF))
        row = report.rows[0]
        assert report.command == 'exponents'
        assert row['e1'] == pytest.approx(E1_HALF, abs=1e-9)
        assert row['e2'] == pytest.approx(E2_HALF, abs=1e-9)
        assert row['duality_gap'] <= 1e-8
        assert row['in_range'] is True
        assert report.summary['stein_exponent'] == pytest.approx(KL_12, abs=1e-12)
        assert report.summary['min_sum_exponent'] == pytest.approx(math.log(2.0), abs=1e-12)
        assert report.summary['equal_slope_gamma'] == pytest.approx(GAMMA_HALF, abs=1e-12)

    def test_exponents_identical_pair(self, orchestrator):
        """Test the summary omits the equal-slope entries when p1 = p2."""
        p = Distribution([0.5, 0.5])
        report = orchestrator.cmd_exponents(ExperimentConfig(p1=p, p2=p, gamma=0.0))
        assert report.rows[0]['e1'] == pytest.approx(0.0, abs=1e-14)
        assert 'min_sum_exponent' not in report.summary

    def test_mismatched(self, orchestrator, mismatch_service, mismatched_binary):
        cfg = ExperimentConfig.from_dict({
            'p1': [0.9, 0.1], 'p2': [0.2, 0.8], 'p_hat1': [0.8, 0.2], 'p_hat2': [0.3, 0.7],
            'gamma': 0.0,
        })
        row = orchestrator.cmd_mismatched(cfg).rows[0]
        test = MismatchedTest(mismatched_binary['p_hat1'], mismatched_binary['p_hat2'], 0.0)
        expected, _ = mismatch_service.mismatched_exponents(mismatched_binary['p1'],
                                                            mismatched_binary['p2'], test)
        assert row['e1'] == pytest.approx(expected.e1, abs=1e-12)
        assert row['e2'] == pytest.approx(expected.e2, abs=1e-12)
        assert row['dual_e1'] == pytest.approx(row['e1'], abs=1e-8)
        assert row['on_curve'] is True
        assert len(row['q1']) == 2

    def test_stein_without_simulation(self, orchestrator, mismatch_service, mismatched_binary):
        cfg = ExperimentConfig.from_dict({
            'p1': [0.9, 0.1], 'p2': [0.2, 0.8], 'p_hat1': [0.8, 0.2], 'p_hat2': [0.3, 0.7],
            'epsilon': 0.1, 'n_list': [100, 400],
        })
        report = orchestrator.cmd_stein(cfg)
        assert [row['n'] for row in report.rows] == [100, 400]
        assert 'eps1_hat' not in report.columns
        threshold, _, _ = mismatch_service.stein_threshold(
            mismatched_binary['p1'],
            (mismatched_binary['p_hat1'], mismatched_binary['p_hat2']), 0.1, 400)
        assert report.rows[1]['threshold'] == pytest.approx(threshold, abs=1e-15)

    def test_stein_with_simulation(self, orchestrator):
        cfg = ExperimentConfig(p1=P_HAT1, p2=P_HAT2, epsilon=0.2, n_list=[50], seed=3,
                               trials=500)
        report = orchestrator.cmd_stein(cfg)
        assert report.columns[-2:] == ['eps1_hat', 'stderr1']
        assert 0.0 <= report.rows[0]['eps1_hat'] <= 1.0

    def test_worst_case_zero_beyond_critical_radius(self, orchestrator):
        """Test rows past the critical radius vanish while smaller radii stay positive."""
        cfg = ExperimentConfig(p_hat1=P_HAT1, p_hat2=P_HAT2, gamma=0.0,
                               radii=[0.0, 0.1, 0.4, 1.0])
        report = orchestrator.cmd_worst_case(cfg)
        assert len(report.rows) == 8
        assert [row['hypothesis'] for row in report.rows] == [1] * 4 + [2] * 4
        for row in report.rows:
            critical = report.summary[f"critical_radius{row['hypothesis']}"]
            if row['r'] > critical:
                assert row['exponent'] <= 1e-9
            else:
                assert row['exponent'] > 0.0
                assert row['max_residual'] <= 1e-7

    def test_sensitivity(self, orchestrator):
        cfg = ExperimentConfig(p_hat1=P_HAT1, p_hat2=P_HAT2, gamma=GAMMA_HALF, scan_points=20)
        report = orchestrator.cmd_sensitivity(cfg)
        assert len(report.rows) == 20
        assert report.summary['s1'] == pytest.approx(math.sqrt(2.0), abs=1e-9)
        assert report.summary['s1_nondecreasing'] is True
        assert report.summary['probe_radius'] == 1e-4
        assert report.summary['quadratic1'] == pytest.approx(report.summary['taylor_raw1'],
                                                             abs=1e-9)

    def test_sensitivity_at_endpoint(self, orchestrator, lrt_service):
        """Test the degenerate quadratic model is reported as missing."""
        lo = lrt_service.threshold_range(P_HAT1, P_HAT2).lo
        cfg = ExperimentConfig(p_hat1=P_HAT1, p_hat2=P_HAT2, gamma=lo, scan_points=5)
        report = orchestrator.cmd_sensitivity(cfg)
        assert report.summary['quadratic1'] is None
        assert report.summary['quadratic2'] is not None

    def test_missing_fields(self, orchestrator):
        with pytest.raises(ValidationError) as exc_info:
            orchestrator.cmd_mismatched(ExperimentConfig(p1=P_HAT1))
        assert exc_info.value.field == 'p2'
        assert exc_info.value.message == "Missing required field: p2"
        with pytest.raises(ValidationError) as exc_info:
            orchestrator.cmd_worst_case(ExperimentConfig(p_hat2=P_HAT2))
        assert exc_info.value.field == 'p_hat1'


@pytest.mark.integration
class TestBayesSweep:
    """Test cases for the worst-case Bayes exponent sweep."""

    RADII = [0.0, 1e-6, 1e-5, 1e-4, 5e-4, 1e-3, 5e-3, 1e-2]

    def test_default_instance(self, orchestrator):
        report = orchestrator.cmd_bayes_sweep(ExperimentConfig(radii=[0.0, 0.01]))
        assert report.summary['p_hat1'] == [0.9, 0.1]
        assert report.summary['p_hat2'] == pytest.approx([0.2, 0.8])
        assert report.columns[0] == 'r'
        assert math.isnan(report.rows[0]['slope_diagnostic'])

    def test_sweep_shape(self, orchestrator, mismatch_service, sensitivity_service):
        rows = orchestrator.bayes_sweep_rows(P_HAT1, P_HAT2, 0.0, self.RADII)
        bayes = mismatch_service.bayes_exponent(P_HAT1, P_HAT2, MismatchedTest(P_HAT1, P_HAT2,
                                                                               0.0))
        report = sensitivity_service.sensitivity_coefficients(P_HAT1, P_HAT2, 0.0)
        s_min = min(report.s1, report.s2)

        assert [row.r for row in rows] == self.RADII
        assert rows[0].exact_bayes == pytest.approx(bayes, abs=1e-9)
        assert np.all(np.diff([row.exact_e1 for row in rows]) <= 1e-12)
        assert np.all(np.diff([row.exact_e2 for row in rows]) <= 1e-12)
        for row in rows[1:]:
            if row.r <= 1e-3:
                assert abs(row.taylor_bayes - row.exact_bayes) <= 0.1 * row.exact_bayes
            if row.r <= 1e-4:
                assert row.slope_diagnostic >= 0.5 * s_min
