from polytopes.polytope import (
    Halfspace,
    MassData,
    Polytope,
    affine_image,
    polytope_from_vertices,
    triangulate,
    vertices_from_halfspaces,
    volume_and_barycenter,
)
from polytopes.slices import PiecewisePolynomial, slice_profile, slice_volume

__all__ = [
    'Halfspace',
    'MassData',
    'PiecewisePolynomial',
    'Polytope',
    'affine_image',
    'polytope_from_vertices',
    'slice_profile',
    'slice_volume',
    'triangulate',
    'vertices_from_halfspaces',
    'volume_and_barycenter',
]
