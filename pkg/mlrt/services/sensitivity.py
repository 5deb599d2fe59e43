"""
Sensitivity of the worst-case exponents to small balls around the test distributions
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from mlrt.config import config
from mlrt.exceptions import InfeasibleProblemError
from mlrt.models.distribution import Distribution
from mlrt.models.robust import MonotonicityScan, QuadraticModel, SensitivityReport
from mlrt.services.base_service import BaseService
from mlrt.services.lrt_exponents import LrtExponentService
from mlrt.utils.simplex_core import chi_squared, kl, tilt


class SensitivityService(BaseService):
    """Service for the square-root-radius slopes of the worst-case exponents"""

    def __init__(self, tolerance=None, lrt_service: Optional[LrtExponentService] = None,
                 workers: Optional[int] = None):
        super().__init__(tolerance)
        self.lrt = lrt_service or LrtExponentService(self.tol)
        self.workers = workers or config.WORKERS

    def sensitivity_coefficients(self, p_hat1: Distribution, p_hat2: Distribution,
                                 gamma_hat: float) -> SensitivityReport:
        """S_i = sqrt(2 chi2(Q_lambda || p_hat_i)) for the tilt between the test distributions"""
        lam = self.lrt.solve_lambda_matched(p_hat1, p_hat2, gamma_hat)
        if lam == 0.0:
            q = p_hat1
        elif lam == 1.0:
            q = p_hat2
        else:
            q = tilt(p_hat1, p_hat1, p_hat2, lam)
        return SensitivityReport(
            s1=math.sqrt(2.0 * chi_squared(q, p_hat1)),
            s2=math.sqrt(2.0 * chi_squared(q, p_hat2)),
            lam=lam,
            q_tilt=q,
            e1=kl(q, p_hat1),
            e2=kl(q, p_hat2),
            gamma_hat=gamma_hat,
        )

    def taylor_worst_case(self, p_hat1: Distribution, p_hat2: Distribution, gamma_hat: float,
                          radius: float, hypothesis: int = 1, clamp: bool = True) -> float:
        """E_i - S_i sqrt(R); clamp=False returns the raw value, which may be negative"""
        self.validate_field_range('radius', radius, min_value=0.0)
        self.validate_field_range('hypothesis', hypothesis, 1, 2)
        report = self.sensitivity_coefficients(p_hat1, p_hat2, gamma_hat)
        if hypothesis == 1:
            value = report.e1 - report.s1 * math.sqrt(radius)
        else:
            value = report.e2 - report.s2 * math.sqrt(radius)
        return max(0.0, value) if clamp else value

    def quadratic_worst_case(self, p_hat1: Distribution, p_hat2: Distribution, gamma_hat: float,
                             radius: float, hypothesis: int = 1):
        """Linearized exponent minimized over the Fisher-metric ball 1/2 theta^T J theta <= R.

        Returns (value, QuadraticModel).
        """
        self.validate_field_range('radius', radius, min_value=0.0)
        self.validate_field_range('hypothesis', hypothesis, 1, 2)
        report = self.sensitivity_coefficients(p_hat1, p_hat2, gamma_hat)
        center = (p_hat1 if hypothesis == 1 else p_hat2).probs
        exponent = report.e1 if hypothesis == 1 else report.e2
        q = report.q_tilt.probs

        fisher = 1.0 / center
        gradient = -q / center
        # centering multiplier keeps the perturbation on the simplex tangent space
        nu = -float(center @ gradient) / float(center.sum())
        psi = center * (gradient + nu)

        if radius == 0.0:
            theta = np.zeros_like(center)
        else:
            norm_sq = float(psi @ (fisher * psi))
            if norm_sq <= 0.0:
                raise InfeasibleProblemError(
                    "gradient is constant on the simplex: the test distribution is the tilt "
                    "endpoint", problem='quadratic_worst_case')
            theta = -psi * math.sqrt(2.0 * radius) / math.sqrt(norm_sq)

        model = QuadraticModel(fisher_diag=fisher, gradient=gradient, psi=psi, theta=theta,
                               exponent=exponent, radius=radius)
        return exponent + float(theta @ gradient), model

    def sensitivity_monotonicity_scan(self, p_hat1: Distribution, p_hat2: Distribution,
                                      grid_points: int = 100) -> MonotonicityScan:
        """Coefficients over a uniform grid of the open threshold interval"""
        self.validate_field_range('grid_points', grid_points, min_value=3)
        self.log_operation('sensitivity_monotonicity_scan', {'grid_points': grid_points})
        gammas = self.lrt.threshold_range(p_hat1, p_hat2).interior(int(grid_points))

        def row(gamma_hat: float):
            report = self.sensitivity_coefficients(p_hat1, p_hat2, gamma_hat)
            return gamma_hat, report.s1, report.s2

        # map keeps the grid order whatever the completion order
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            rows = list(pool.map(row, gammas))
        return MonotonicityScan(rows)
