"""
Coupled alpha/delta over candidate valuations and flag chain bounds
src/thresholds/engine.py

delta_upper and alpha_upper are exact minima over the supplied candidates,
so they bound the true thresholds from above. Each complete flag gives the
chain statistic min_j A_j / sum_i c_i S_i,j, a lower bound at the torus-fixed
point of its tau_0; the best one per fixed point gives delta_lower.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

from common.errors import ConsistencyError
from common.log import get_logger
from okounkov.invariants import flag_log_discrepancies, flag_s_values, log_discrepancy, s_t_invariants

logger = get_logger(__name__)

MODULE = 'thresholds'

# Environment Variables
THRESHOLD_WORKERS = int(os.environ.get('THRESHOLD_WORKERS', '4'))


@dataclass(frozen=True)
class CandidateRow:
    v: tuple[int, ...]
    A: Fraction
    S: tuple[Fraction, ...]
    T: tuple[Fraction, ...]
    delta_ratio: Fraction
    alpha_ratio: Fraction


@dataclass(frozen=True, eq=False)
class FlagRow:
    flag: object
    A: tuple[Fraction, ...]
    S: tuple[Fraction, ...]
    ratios: tuple[Fraction, ...]
    bound: Fraction


@dataclass(frozen=True, eq=False)
class ThresholdReport:
    delta_upper: Fraction
    alpha_upper: Fraction
    candidates: tuple[CandidateRow, ...]
    flags: tuple[FlagRow, ...]
    delta_lower: Fraction | None
    certified: bool

    @property
    def delta_minimizers(self):
        return [row.v for row in self.candidates if row.delta_ratio == self.delta_upper]

    @property
    def alpha_minimizers(self):
        return [row.v for row in self.candidates if row.alpha_ratio == self.alpha_upper]


def evaluate_candidate(problem, v):
    a = log_discrepancy(problem.boundary, v)
    s_values = []
    t_values = []
    for term in problem.terms:
        s, t = s_t_invariants(term.divisor, v)
        s_values.append(s)
        t_values.append(t)
    weighted_s = sum((term.weight * s for term, s in zip(problem.terms, s_values)), Fraction(0))
    weighted_t = sum((term.weight * t for term, t in zip(problem.terms, t_values)), Fraction(0))
    return CandidateRow(
        v=v.coords,
        A=a,
        S=tuple(s_values),
        T=tuple(t_values),
        delta_ratio=a / weighted_s,
        alpha_ratio=a / weighted_t,
    )


def az_flag_row(problem, flag):
    flag.require_complete()
    a_values = flag_log_discrepancies(problem.boundary, flag)
    per_term = [flag_s_values(term.divisor, flag) for term in problem.terms]
    weighted = tuple(
        sum((term.weight * values[j] for term, values in zip(problem.terms, per_term)), Fraction(0))
        for j in range(flag.rank)
    )
    ratios = tuple(a / s for a, s in zip(a_values, weighted))
    return FlagRow(flag=flag, A=a_values, S=weighted, ratios=ratios, bound=min(ratios))


def az_flag_bound(problem, flag):
    """Fully iterated chain bound min_j A_j / sum_i c_i S(L_i; Y_1 > ... > Y_j)."""
    return az_flag_row(problem, flag).bound


def fixed_point_bounds(problem, rows):
    """Best chain bound per full-dimensional maximal cone (None where no flag lands)."""
    best = {cone: None for cone in problem.fan.full_dimensional_cones()}
    for row in rows:
        cone = row.flag.tau0_cone
        if cone in best and (best[cone] is None or row.bound > best[cone]):
            best[cone] = row.bound
    return best


def coupled_thresholds(problem):
    workers = max(1, THRESHOLD_WORKERS)
    logger.info("Evaluating %d candidates with %d workers", len(problem.candidates), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        candidates = tuple(pool.map(partial(evaluate_candidate, problem), problem.candidates))
        flags = tuple(pool.map(partial(az_flag_row, problem), problem.flags))

    upper = min(row.delta_ratio for row in candidates)
    alpha = min(row.alpha_ratio for row in candidates)

    delta_lower = None
    if flags:
        best = fixed_point_bounds(problem, flags)
        if best and all(value is not None for value in best.values()):
            delta_lower = min(best.values())
    if delta_lower is not None and delta_lower > upper:
        raise ConsistencyError('BoundInversion', f"chain lower bound {delta_lower} exceeds upper bound {upper}", MODULE)

    certified = delta_lower is not None and delta_lower == upper
    logger.info("delta_upper=%s alpha_upper=%s delta_lower=%s certified=%s", upper, alpha, delta_lower, certified)
    return ThresholdReport(
        delta_upper=upper,
        alpha_upper=alpha,
        candidates=candidates,
        flags=flags,
        delta_lower=delta_lower,
        certified=certified,
    )


def delta_upper(problem):
    """Candidate minimum only, skipping flag statistics."""
    return min(evaluate_candidate(problem, v).delta_ratio for v in problem.candidates)
