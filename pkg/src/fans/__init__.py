from fans.fan import (
    Fan,
    FanQuotient,
    containing_cones,
    in_support,
    make_fan,
    primitive_image,
    quotient_fan,
    star_subdivide,
    validate_fan,
)
from fans.flags import FlagChain, admissible_flag, build_flag_chain, coordinate_flags, flag_points

__all__ = [
    'Fan',
    'FanQuotient',
    'FlagChain',
    'admissible_flag',
    'build_flag_chain',
    'containing_cones',
    'coordinate_flags',
    'flag_points',
    'in_support',
    'make_fan',
    'primitive_image',
    'quotient_fan',
    'star_subdivide',
    'validate_fan',
]
