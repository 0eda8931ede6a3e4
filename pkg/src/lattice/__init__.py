from lattice.core import (
    LatticeVector,
    QuotientLattice,
    RationalCone,
    cone_coordinates,
    content,
    determinant,
    inverse_matrix,
    lattice_index,
    mat_mul,
    mat_vec,
    primitive_part,
    quotient_lattice,
    rank_of,
    solve_exact,
    span_coordinates,
    transpose,
)
