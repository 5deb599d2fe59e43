"""
Brute-force reference computations
Simplex grids, exact type enumeration and seeded Monte Carlo; none of these
share code with the tilt solvers they are used to check.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Iterator, Optional

import numpy as np
from scipy.special import gammaln, logsumexp, rel_entr

from mlrt.config import config
from mlrt.exceptions import InfeasibleProblemError, SizeError, ValidationError
from mlrt.models.distribution import Distribution, EmpiricalType
from mlrt.models.exponents import MismatchedTest
from mlrt.models.oracle import (
    FiniteNResult, GridResult, GridSpec, MonteCarloResult, SimulationConfig,
)
from mlrt.services.base_service import BaseService
from mlrt.utils.simplex_core import log_ratio

MAX_GRID_ALPHABET = 3
ENUMERATION_BUDGET = 10 ** 7
CHUNK_ROWS = 200_000
MC_CHUNK_TRIALS = 10_000
DEFAULT_Q_POINTS = 2001


class Side(str, Enum):
    """Half-space of the test statistic: GE is the decide-2 region, LE the decide-1 region."""

    GE = '>='
    LE = '<='


def simplex_grid(alphabet_size: int, points_per_dim: int) -> np.ndarray:
    """All points of the simplex with coordinates in {0, 1/(m-1), ..., 1}."""
    m = points_per_dim - 1
    if alphabet_size == 2:
        q1 = np.arange(m + 1) / m
        return np.column_stack([1.0 - q1, q1])
    i, j = np.triu_indices(m + 1)
    # i <= j enumerates pairs of cut points, giving every composition of m into 3 parts
    return np.column_stack([i, j - i, m - j]) / m


def hyperplane_points(direction: np.ndarray, threshold: float, samples: int) -> np.ndarray:
    """Points of {Q : Q @ direction = threshold} on the simplex, sampled along the segment."""
    k = direction.size
    vertices = []
    for a, b in itertools.combinations(range(k), 2):
        da, db = direction[a], direction[b]
        if da == db:
            continue
        t = (threshold - da) / (db - da)
        if 0.0 <= t <= 1.0:
            point = np.zeros(k)
            point[a], point[b] = 1.0 - t, t
            vertices.append(point)
    if not vertices:
        return np.empty((0, k))
    ends = np.array(vertices)
    if len(ends) == 1:
        return ends
    spans = np.linalg.norm(ends[:, None, :] - ends[None, :, :], axis=-1)
    a, b = np.unravel_index(np.argmax(spans), spans.shape)
    weights = np.linspace(0.0, 1.0, max(samples, 2))[:, None]
    return (1.0 - weights) * ends[a] + weights * ends[b]


def floor_rows(points: np.ndarray, floor: float) -> np.ndarray:
    floored = np.maximum(points, floor)
    return floored / floored.sum(axis=1, keepdims=True)


def compositions(n: int, k: int) -> Iterator[np.ndarray]:
    """Chunks of all count vectors of length k summing to n (stars and bars)."""
    cuts = itertools.combinations(range(n + k - 1), k - 1)
    while True:
        block = np.array(list(itertools.islice(cuts, CHUNK_ROWS)), dtype=np.int64)
        if block.size == 0:
            return
        block = block.reshape(-1, k - 1)
        padded = np.column_stack([np.full(len(block), -1), block,
                                  np.full(len(block), n + k - 1)])
        yield np.diff(padded, axis=1) - 1


class _DominantType:
    """Running argmax of log type-class probability over enumeration chunks."""

    def __init__(self):
        self.log_prob = -math.inf
        self.counts: Optional[np.ndarray] = None

    def update(self, log_probs: np.ndarray, counts: np.ndarray) -> None:
        i = int(np.argmax(log_probs))
        if log_probs[i] > self.log_prob:
            self.log_prob, self.counts = float(log_probs[i]), counts[i].copy()

    def as_type(self) -> Optional[EmpiricalType]:
        return None if self.counts is None else EmpiricalType(self.counts)


class OracleService(BaseService):
    """Service for ground-truth checks of the exponent solvers"""

    def __init__(self, tolerance=None, workers: Optional[int] = None):
        super().__init__(tolerance)
        self.workers = workers or config.WORKERS

    @staticmethod
    def _oriented(test: MismatchedTest, side: Side):
        # the LE side is the GE side of the swapped test
        c = log_ratio(test.p_hat1, test.p_hat2)
        if Side(side) == Side.GE:
            return c, test.gamma_hat
        return -c, -test.gamma_hat

    def grid_min_kl_halfspace(self, p: Distribution, test: MismatchedTest, side: Side,
                              grid: GridSpec) -> GridResult:
        """min D(Q || p) over grid points Q in the half-space, plus the half-space boundary"""
        k = self.require_same_alphabet(p=p, p_hat1=test.p_hat1, p_hat2=test.p_hat2)
        if k > MAX_GRID_ALPHABET:
            raise ValidationError(f"grid oracles support alphabets up to {MAX_GRID_ALPHABET}",
                                  field='alphabet_size', value=k)
        grid.check_alphabet(k)
        self.log_operation('grid_min_kl_halfspace', {'side': Side(side).value,
                                                     'points_per_dim': grid.points_per_dim})
        direction, threshold = self._oriented(test, side)

        candidates = floor_rows(simplex_grid(k, grid.points_per_dim), grid.floor)
        candidates = candidates[candidates @ direction >= threshold]
        boundary = hyperplane_points(direction, threshold, grid.points_per_dim)
        if len(boundary):
            candidates = np.vstack([candidates, floor_rows(boundary, grid.floor)])
        if len(candidates) == 0:
            raise InfeasibleProblemError("no grid point satisfies the half-space constraint",
                                         problem='grid_min_kl_halfspace')

        best_value, best_row = math.inf, None
        for start in range(0, len(candidates), CHUNK_ROWS):
            block = candidates[start:start + CHUNK_ROWS]
            values = rel_entr(block, p.probs).sum(axis=1)
            idx = int(np.argmin(values))
            if values[idx] < best_value:
                best_value, best_row = float(values[idx]), block[idx]
        return GridResult(max(0.0, best_value), Distribution(best_row),
                          feasible_points=len(candidates))

    def grid_worst_case(self, p_hat1: Distribution, p_hat2: Distribution, gamma_hat: float,
                        radius: float, hypothesis: int, grid: GridSpec,
                        q_points: int = DEFAULT_Q_POINTS) -> GridResult:
        """Joint min of D(Q || P) over grid P in the ball and grid Q in the decision region"""
        k = self.require_same_alphabet(p_hat1=p_hat1, p_hat2=p_hat2)
        if k != 2:
            raise ValidationError("the joint grid oracle is binary only", field='alphabet_size',
                                  value=k)
        self.validate_field_range('hypothesis', hypothesis, 1, 2)
        self.validate_field_range('radius', radius, min_value=0.0)
        grid.check_alphabet(k)
        if hypothesis == 1:
            center, test = p_hat1, MismatchedTest(p_hat1, p_hat2, gamma_hat)
        else:
            center, test = p_hat2, MismatchedTest(p_hat2, p_hat1, -gamma_hat)
        direction, threshold = self._oriented(test, Side.GE)

        p_grid = floor_rows(simplex_grid(k, grid.points_per_dim), grid.floor)
        in_ball = rel_entr(center.probs, p_grid).sum(axis=1) <= radius
        p_grid = np.vstack([center.probs, p_grid[in_ball]])

        q_grid = floor_rows(simplex_grid(k, q_points), grid.floor)
        q_grid = q_grid[q_grid @ direction >= threshold]
        boundary = hyperplane_points(direction, threshold, 1)
        if len(boundary):
            q_grid = np.vstack([q_grid, floor_rows(boundary, grid.floor)])
        if len(q_grid) == 0:
            raise InfeasibleProblemError("decision region contains no grid point",
                                         problem='grid_worst_case')

        best = (math.inf, None, None)
        rows = max(1, CHUNK_ROWS // len(q_grid))
        for start in range(0, len(p_grid), rows):
            block = p_grid[start:start + rows]
            values = rel_entr(q_grid[None, :, :], block[:, None, :]).sum(axis=-1)
            i, j = np.unravel_index(np.argmin(values), values.shape)
            if values[i, j] < best[0]:
                best = (float(values[i, j]), block[i], q_grid[j])
        value, p_arg, q_arg = best
        return GridResult(max(0.0, value), Distribution(p_arg), Distribution(q_arg),
                          feasible_points=len(p_grid) * len(q_grid))

    def exact_error_probs(self, p1: Distribution, p2: Distribution, test: MismatchedTest, n: int,
                          budget: int = ENUMERATION_BUDGET) -> FiniteNResult:
        """Exact error probabilities at length n by summing over every type class.

        Hypothesis 2 is decided when llr_gap(type) >= gamma_hat; eps1 sums that
        region under p1 and eps2 its complement under p2.
        """
        k = self.require_same_alphabet(p1=p1, p2=p2, p_hat1=test.p_hat1)
        if int(n) != n or n < 1:
            raise ValidationError("n must be a positive integer", field='n', value=n)
        size = math.comb(n + k - 1, k - 1)
        if size > budget:
            raise SizeError(f"{size} type classes exceed the enumeration budget {budget}",
                            size=size, budget=budget)
        self.log_operation('exact_error_probs', {'n': n, 'type_classes': size})

        c = log_ratio(test.p_hat1, test.p_hat2)
        log_p1, log_p2 = np.log(p1.probs), np.log(p2.probs)
        log_n_fact = gammaln(n + 1)
        parts1, parts2 = [], []
        best1, best2 = _DominantType(), _DominantType()
        for counts in compositions(int(n), k):
            log_mult = log_n_fact - gammaln(counts + 1).sum(axis=1)
            decide2 = (counts @ c) / n >= test.gamma_hat
            if np.any(decide2):
                log_probs = log_mult[decide2] + counts[decide2] @ log_p1
                parts1.append(logsumexp(log_probs))
                best1.update(log_probs, counts[decide2])
            if not np.all(decide2):
                keep = ~decide2
                log_probs = log_mult[keep] + counts[keep] @ log_p2
                parts2.append(logsumexp(log_probs))
                best2.update(log_probs, counts[keep])

        eps1 = float(np.exp(logsumexp(parts1))) if parts1 else 0.0
        eps2 = float(np.exp(logsumexp(parts2))) if parts2 else 0.0
        return FiniteNResult(min(eps1, 1.0), min(eps2, 1.0), int(n),
                             dominant1=best1.as_type(), dominant2=best2.as_type())

    def type_class_total(self, p: Distribution, n: int) -> float:
        """Total probability of all type classes of length n (1 up to rounding)"""
        log_p = np.log(p.probs)
        parts = [logsumexp(gammaln(n + 1) - gammaln(counts + 1).sum(axis=1) + counts @ log_p)
                 for counts in compositions(int(n), p.alphabet_size)]
        return float(np.exp(logsumexp(parts)))

    def monte_carlo_errors(self, p1: Distribution, p2: Distribution, test: MismatchedTest,
                           sim: SimulationConfig) -> MonteCarloResult:
        """Empirical error rates of the test on sim.trials sequences per hypothesis"""
        self.require_same_alphabet(p1=p1, p2=p2, p_hat1=test.p_hat1)
        self.validate_field_range('trials', sim.trials, min_value=100)
        self.log_operation('monte_carlo_errors', sim.to_dict())
        c = log_ratio(test.p_hat1, test.p_hat2)

        sizes = [min(MC_CHUNK_TRIALS, sim.trials - start)
                 for start in range(0, sim.trials, MC_CHUNK_TRIALS)]
        # one child stream per chunk and hypothesis, independent of the worker count
        children = np.random.SeedSequence(sim.seed).spawn(2 * len(sizes))

        def errors(job):
            seq, size, dist, decide2_is_error = job
            rng = np.random.default_rng(seq)
            counts = rng.multinomial(sim.n, dist.probs, size=size)
            decide2 = (counts @ c) / sim.n >= test.gamma_hat
            return int(np.count_nonzero(decide2 if decide2_is_error else ~decide2))

        jobs = [(children[2 * i], size, p1, True) for i, size in enumerate(sizes)]
        jobs += [(children[2 * i + 1], size, p2, False) for i, size in enumerate(sizes)]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            counts = list(pool.map(errors, jobs))

        half = len(sizes)
        eps1 = sum(counts[:half]) / sim.trials
        eps2 = sum(counts[half:]) / sim.trials
        return MonteCarloResult(
            eps1_hat=eps1,
            eps2_hat=eps2,
            stderr1=math.sqrt(eps1 * (1.0 - eps1) / sim.trials),
            stderr2=math.sqrt(eps2 * (1.0 - eps2) / sim.trials),
            trials=sim.trials,
        )
