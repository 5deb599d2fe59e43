"""
Experiment Orchestrator for the command-line front end
Coordinates the solver services behind each subcommand and shapes their output
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from mlrt.config import config
from mlrt.exceptions import InfeasibleProblemError
from mlrt.models.distribution import Distribution
from mlrt.models.experiment import (
    GAMMA_AUTO_BAYES, GAMMA_AUTO_STEIN, CommandReport, ExperimentConfig, SweepRow,
)
from mlrt.models.exponents import MismatchedTest
from mlrt.models.oracle import SimulationConfig
from mlrt.models.tolerance import ToleranceConfig
from mlrt.services.base_service import BaseService
from mlrt.services.lrt_exponents import LrtExponentService
from mlrt.services.mismatch_exponents import MismatchExponentService
from mlrt.services.oracle import OracleService
from mlrt.services.sensitivity import SensitivityService
from mlrt.services.worst_case import WorstCaseService
from mlrt.utils.simplex_core import llr_gap
from mlrt.validators.base_validator import BaseValidator

SWEEP_TEST = (0.1, 0.8)
SWEEP_RADII = 101
SWEEP_MAX_RADIUS = 0.01
DEFAULT_WORST_CASE_RADII = [0.0, 0.001, 0.005, 0.01]
QUADRATIC_PROBE_RADIUS = 1e-4


def _vector(dist: Optional[Distribution]) -> Optional[List[float]]:
    return None if dist is None else [float(x) for x in dist.probs]


class ExperimentOrchestrator(BaseService):
    """Runs the subcommands over the solver services"""

    def __init__(self, tolerance: Optional[ToleranceConfig] = None,
                 workers: Optional[int] = None):
        super().__init__(tolerance)
        self.workers = workers or config.WORKERS
        self.lrt_service = LrtExponentService(self.tol)
        self.mismatch_service = MismatchExponentService(self.tol, self.lrt_service)
        self.worst_case_service = WorstCaseService(self.tol)
        self.sensitivity_service = SensitivityService(self.tol, self.lrt_service, self.workers)
        self.oracle_service = OracleService(self.tol, self.workers)

    def _map(self, func: Callable, items: Iterable) -> List[Any]:
        """Apply func concurrently; results come back in input order"""
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(func, items))

    @staticmethod
    def _require(dists: Tuple[Optional[Distribution], Optional[Distribution]],
                 names: Tuple[str, str]) -> Tuple[Distribution, Distribution]:
        present = {name: dist for name, dist in zip(names, dists) if dist is not None}
        BaseValidator.validate_required_fields(present, list(names))
        return dists  # type: ignore[return-value]

    @staticmethod
    def resolve_gamma(cfg: ExperimentConfig, p1: Distribution, p_hat1: Distribution,
                      p_hat2: Distribution) -> float:
        """Numeric threshold; auto_bayes is 0 and auto_stein is llr_gap(p1, p_hat1, p_hat2)"""
        if cfg.gamma == GAMMA_AUTO_BAYES:
            return 0.0
        if cfg.gamma == GAMMA_AUTO_STEIN:
            return llr_gap(p1, p_hat1, p_hat2)
        return float(cfg.gamma)

    # subcommands

    def cmd_exponents(self, cfg: ExperimentConfig) -> CommandReport:
        """Matched primal and dual exponents with achievers"""
        p1, p2 = self._require(cfg.generating, ('p1', 'p2'))
        gamma = self.resolve_gamma(cfg, p1, p1, p2)
        self.log_operation('cmd_exponents', {'gamma': gamma}, level=logging.INFO)

        rng = self.lrt_service.threshold_range(p1, p2)
        pair = self.lrt_service.matched_exponents(p1, p2, gamma)
        dual1 = self.lrt_service.dual_exponent_1(p1, p2, gamma)
        dual2 = self.lrt_service.dual_exponent_2(p1, p2, gamma)
        gap = max(_gap(pair.e1, dual1), _gap(pair.e2, dual2))
        row = {
            'gamma': gamma,
            'e1': pair.e1,
            'e2': pair.e2,
            'dual_e1': dual1,
            'dual_e2': dual2,
            'duality_gap': gap,
            'lambda1': pair.lambda1,
            'lambda2': pair.lambda2,
            'in_range': rng.contains(gamma),
            'q1': _vector(pair.q1),
            'q2': _vector(pair.q2),
        }
        summary: Dict[str, Any] = {'threshold_range': rng.to_dict(),
                                   'stein_exponent': self.lrt_service.stein_matched(p1, p2)}
        if p1 != p2:
            value, q_half, gamma_half = self.lrt_service.min_sum_exponent(p1, p2)
            summary.update({'min_sum_exponent': value, 'equal_slope_gamma': gamma_half,
                            'q_half': _vector(q_half)})
        return CommandReport('exponents', list(row), [row], summary)

    def cmd_mismatched(self, cfg: ExperimentConfig) -> CommandReport:
        """Mismatched exponents, tilt conditions and tradeoff-curve membership"""
        p1, p2 = self._require(cfg.generating, ('p1', 'p2'))
        p_hat1, p_hat2 = self._require(cfg.testing, ('p_hat1', 'p_hat2'))
        gamma_hat = self.resolve_gamma(cfg, p1, p_hat1, p_hat2)
        self.log_operation('cmd_mismatched', {'gamma_hat': gamma_hat}, level=logging.INFO)

        test = MismatchedTest(p_hat1, p_hat2, gamma_hat)
        pair, (cond1, cond2) = self.mismatch_service.mismatched_exponents(p1, p2, test)
        on_curve = None
        if p1 != p2:
            _, on_curve = self.mismatch_service.on_matched_tradeoff(p1, p2, test)
        row = {
            'gamma_hat': gamma_hat,
            'e1': pair.e1,
            'e2': pair.e2,
            'bayes': pair.bayes,
            'lambda1': pair.lambda1,
            'lambda2': pair.lambda2,
            'condition1': cond1,
            'condition2': cond2,
            'dual_e1': self.mismatch_service.mismatched_dual_1(p1, test),
            'dual_e2': self.mismatch_service.mismatched_dual_2(p2, test),
            'on_curve': on_curve,
            'q1': _vector(pair.q1),
            'q2': _vector(pair.q2),
        }
        return CommandReport('mismatched', list(row), [row])

    def cmd_stein(self, cfg: ExperimentConfig) -> CommandReport:
        """Stein threshold and exponent per block length, with optional simulation columns"""
        p1, p2 = self._require(cfg.generating, ('p1', 'p2'))
        test_dists = self._require(cfg.testing, ('p_hat1', 'p_hat2'))
        self.log_operation('cmd_stein', {'epsilon': cfg.epsilon, 'n_list': cfg.n_list},
                           level=logging.INFO)

        def row(n: int) -> Dict[str, Any]:
            report = self.mismatch_service.stein_mismatched(p1, p2, test_dists, cfg.epsilon, n)
            result = report.to_dict()
            if cfg.trials:
                sim = SimulationConfig(seed=cfg.seed, trials=cfg.trials, n=n)
                mc = self.oracle_service.monte_carlo_errors(
                    p1, p2, MismatchedTest(*test_dists, report.threshold), sim)
                result.update({'eps1_hat': mc.eps1_hat, 'stderr1': mc.stderr1})
            return result

        rows = self._map(row, cfg.n_list)
        return CommandReport('stein', list(rows[0]), rows)

    def cmd_worst_case(self, cfg: ExperimentConfig) -> CommandReport:
        """Least-favorable solutions per hypothesis and radius, plus critical radii"""
        p_hat1, p_hat2 = self._require(cfg.testing, ('p_hat1', 'p_hat2'))
        gamma_hat = self.resolve_gamma(cfg, p_hat1, p_hat1, p_hat2)
        radii = cfg.radii or DEFAULT_WORST_CASE_RADII
        self.log_operation('cmd_worst_case', {'gamma_hat': gamma_hat, 'radii': len(radii)},
                           level=logging.INFO)

        solvers = {1: self.worst_case_service.worst_case_exponent_1,
                   2: self.worst_case_service.worst_case_exponent_2}

        def row(job: Tuple[int, float]) -> Dict[str, Any]:
            hypothesis, radius = job
            sol = solvers[hypothesis](p_hat1, p_hat2, gamma_hat, radius)
            return {
                'hypothesis': hypothesis,
                'r': radius,
                'status': sol.status.value,
                'exponent': sol.exponent,
                'lambda': sol.lam,
                'beta': sol.beta,
                'max_residual': max((abs(v) for v in sol.residuals.values()), default=0.0),
                'p_least': _vector(sol.p_least),
                'q_opt': _vector(sol.q_opt),
            }

        rows = self._map(row, [(h, float(r)) for h in (1, 2) for r in radii])
        summary = {
            'gamma_hat': gamma_hat,
            'critical_radius1': self.worst_case_service.critical_radius(p_hat1, p_hat2,
                                                                        gamma_hat, 1),
            'critical_radius2': self.worst_case_service.critical_radius(p_hat1, p_hat2,
                                                                        gamma_hat, 2),
        }
        return CommandReport('worst-case', list(rows[0]), rows, summary)

    def cmd_sensitivity(self, cfg: ExperimentConfig) -> CommandReport:
        """Sensitivity coefficients, the monotonicity scan and quadratic-model diagnostics"""
        p_hat1, p_hat2 = self._require(cfg.testing, ('p_hat1', 'p_hat2'))
        gamma_hat = self.resolve_gamma(cfg, p_hat1, p_hat1, p_hat2)
        self.log_operation('cmd_sensitivity', {'gamma_hat': gamma_hat}, level=logging.INFO)

        report = self.sensitivity_service.sensitivity_coefficients(p_hat1, p_hat2, gamma_hat)
        scan = self.sensitivity_service.sensitivity_monotonicity_scan(p_hat1, p_hat2,
                                                                      cfg.scan_points)
        probe = next((r for r in cfg.radii if r > 0.0), QUADRATIC_PROBE_RADIUS)
        summary: Dict[str, Any] = {
            **report.to_dict(),
            's1_nondecreasing': scan.s1_nondecreasing,
            's2_nonincreasing': scan.s2_nonincreasing,
            'crossing_gamma': scan.crossing_gamma,
            'probe_radius': probe,
        }
        for hypothesis in (1, 2):
            taylor = self.sensitivity_service.taylor_worst_case(
                p_hat1, p_hat2, gamma_hat, probe, hypothesis, clamp=False)
            try:
                quadratic, model = self.sensitivity_service.quadratic_worst_case(
                    p_hat1, p_hat2, gamma_hat, probe, hypothesis)
                constraint = model.constraint_value
            except InfeasibleProblemError as e:
                self.logger.warning(f"quadratic model unavailable: {e.message}")
                quadratic, constraint = None, None
            summary[f'taylor_raw{hypothesis}'] = taylor
            summary[f'quadratic{hypothesis}'] = quadratic
            summary[f'quadratic_constraint{hypothesis}'] = constraint
        rows = [{'gamma_hat': g, 's1': s1, 's2': s2} for g, s1, s2 in scan.rows]
        return CommandReport('sensitivity', ['gamma_hat', 's1', 's2'], rows, summary)

    def cmd_bayes_sweep(self, cfg: ExperimentConfig) -> CommandReport:
        """Worst-case Bayes exponent sweep over a common radius R1 = R2 = R"""
        p_hat1, p_hat2 = cfg.testing
        if p_hat1 is None or p_hat2 is None:
            p_hat1 = Distribution.bernoulli(SWEEP_TEST[0])
            p_hat2 = Distribution.bernoulli(SWEEP_TEST[1])
        gamma_hat = self.resolve_gamma(cfg, p_hat1, p_hat1, p_hat2)
        radii = cfg.radii or [float(r) for r in
                              np.linspace(0.0, SWEEP_MAX_RADIUS, SWEEP_RADII)]
        self.log_operation('cmd_bayes_sweep', {'gamma_hat': gamma_hat, 'radii': len(radii)},
                           level=logging.INFO)

        rows = self.bayes_sweep_rows(p_hat1, p_hat2, gamma_hat, radii)
        summary = {
            'gamma_hat': gamma_hat,
            'p_hat1': _vector(p_hat1),
            'p_hat2': _vector(p_hat2),
        }
        return CommandReport('bayes-sweep', list(SweepRow.COLUMNS), [r.to_dict() for r in rows],
                             summary)

    def bayes_sweep_rows(self, p_hat1: Distribution, p_hat2: Distribution, gamma_hat: float,
                         radii: List[float]) -> List[SweepRow]:
        """Exact and Taylor worst-case exponents per radius"""
        test = MismatchedTest(p_hat1, p_hat2, gamma_hat)
        e_zero = self.mismatch_service.bayes_exponent(p_hat1, p_hat2, test)
        wc = self.worst_case_service
        sens = self.sensitivity_service

        def row(radius: float) -> SweepRow:
            sol1 = wc.worst_case_exponent_1(p_hat1, p_hat2, gamma_hat, radius)
            sol2 = wc.worst_case_exponent_2(p_hat1, p_hat2, gamma_hat, radius)
            exact = min(sol1.exponent, sol2.exponent)
            slope = (e_zero - exact) / math.sqrt(radius) if radius > 0.0 else math.nan
            return SweepRow(
                r=radius,
                exact_e1=sol1.exponent,
                exact_e2=sol2.exponent,
                taylor_e1=sens.taylor_worst_case(p_hat1, p_hat2, gamma_hat, radius, 1),
                taylor_e2=sens.taylor_worst_case(p_hat1, p_hat2, gamma_hat, radius, 2),
                slope_diagnostic=slope,
                status1=sol1.status.value,
                status2=sol2.status.value,
            )

        return self._map(row, [float(r) for r in radii])


def _gap(primal: float, dual: float) -> float:
    if math.isinf(primal) and math.isinf(dual):
        return 0.0
    return abs(primal - dual)
