from okounkov.divisors import (
    BoundaryData,
    ToricDivisor,
    divisor_volume,
    edge_intersection,
    make_boundary,
    make_divisor,
    moment_polytope,
    normalize_divisor,
    require_big,
    support_value,
)
from okounkov.invariants import (
    OkounkovBody,
    flag_log_discrepancies,
    flag_log_discrepancy,
    flag_s_invariant,
    flag_s_values,
    log_discrepancy,
    okounkov_body,
    s_t_invariants,
    s_via_subdivision,
)
