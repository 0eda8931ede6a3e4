from thresholds.engine import (
    CandidateRow,
    FlagRow,
    ThresholdReport,
    az_flag_bound,
    az_flag_row,
    coupled_thresholds,
    delta_upper,
    evaluate_candidate,
)
from thresholds.oracles import (
    curve_delta,
    curve_problem,
    hirzebruch_divisor,
    hirzebruch_fan,
    hirzebruch_oracle,
    partition_bounds,
    product_check,
    product_problem,
    threshold_scaling_suite,
)
from thresholds.problem import CoupledProblem, Term, make_problem
from thresholds.zariski import ZariskiDecomposition, ZariskiPath, s_via_surface_zariski, zariski_surface

__all__ = [
    'CandidateRow',
    'CoupledProblem',
    'FlagRow',
    'Term',
    'ThresholdReport',
    'ZariskiDecomposition',
    'ZariskiPath',
    'az_flag_bound',
    'az_flag_row',
    'coupled_thresholds',
    'curve_delta',
    'curve_problem',
    'delta_upper',
    'evaluate_candidate',
    'hirzebruch_divisor',
    'hirzebruch_fan',
    'hirzebruch_oracle',
    'make_problem',
    'partition_bounds',
    'product_check',
    'product_problem',
    's_via_surface_zariski',
    'threshold_scaling_suite',
    'zariski_surface',
]
