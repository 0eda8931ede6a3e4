from bary.bounds import (
    BoundResult,
    grid_scan,
    line_profile,
    line_s_lower_bound,
    lower_bound_h1,
    lower_bound_s0,
    minimal_w,
    sandwich,
    upper_bound_h2,
)
from bary.numbers import Estimate, precision, root
from bary.profile import BaryProfile, envelope_h0, make_profile, profile_from_polytope

__all__ = [
    'BaryProfile',
    'BoundResult',
    'Estimate',
    'envelope_h0',
    'grid_scan',
    'line_profile',
    'line_s_lower_bound',
    'lower_bound_h1',
    'lower_bound_s0',
    'make_profile',
    'minimal_w',
    'precision',
    'profile_from_polytope',
    'root',
    'sandwich',
    'upper_bound_h2',
]
