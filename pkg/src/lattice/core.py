"""
Exact lattice kernel
src/lattice/core.py

Integer vectors, Smith-normal-form indices, quotient lattices N/Zv and
simplicial cone coordinates. Everything is Fraction/int; no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

try:
    from sympy.core.intfunc import igcdex
except ImportError:
    from sympy.core.numbers import igcdex

from common.errors import PreconditionError, ValidationError

MODULE = 'lattice'


def _gcd_list(xs):
    return reduce(gcd, (abs(x) for x in xs), 0)


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coords', tuple(int(c) for c in self.coords))

    @property
    def rank(self):
        return len(self.coords)

    @property
    def primitive(self):
        return _gcd_list(self.coords) == 1

    def is_zero(self):
        return not any(self.coords)

    def __neg__(self):
        return LatticeVector(tuple(-c for c in self.coords))

    def __add__(self, other):
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scaled(self, k):
        return LatticeVector(tuple(k * c for c in self.coords))

    def pair(self, u):
        """<u, v> for a rational dual vector u."""
        return sum((Fraction(a) * b for a, b in zip(u, self.coords)), Fraction(0))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def primitive_part(v):
    coords = tuple(v.coords if isinstance(v, LatticeVector) else v)
    g = _gcd_list(coords)
    if g == 0:
        raise PreconditionError('ZeroVector', 'primitive part of the zero vector', MODULE)
    return LatticeVector(tuple(c // g for c in coords))


def content(v):
    """gcd of the coordinates (the multiplicity of v over its primitive part)."""
    coords = tuple(v.coords if isinstance(v, LatticeVector) else v)
    g = _gcd_list(coords)
    if g == 0:
        raise PreconditionError('ZeroVector', 'content of the zero vector', MODULE)
    return g


# ---------------------------------------------------------------------------
# Exact linear algebra over Fraction
# ---------------------------------------------------------------------------

def _row_echelon(rows):
    """Returns (reduced rows, pivot columns) of a Fraction matrix."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][col]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank_of(rows):
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return len(_row_echelon(rows)[1])


def determinant(rows):
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        lead = m[col][col]
        det *= lead
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / lead
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def solve_exact(columns, rhs):
    """Solves sum_k x_k * columns[k] = rhs.

    Returns the unique solution as Fractions, or None when the columns are
    dependent or rhs is outside their span.
    """
    d = len(columns)
    n = len(rhs)
    augmented = [[Fraction(columns[k][i]) for k in range(d)] + [Fraction(rhs[i])] for i in range(n)]
    reduced, pivots = _row_echelon(augmented)
    if d in pivots or pivots != list(range(d)):
        return None
    return tuple(reduced[i][d] for i in range(d))


def inverse_matrix(rows):
    n = len(rows)
    augmented = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    reduced, pivots = _row_echelon(augmented)
    if pivots[:n] != list(range(n)):
        return None
    return tuple(tuple(reduced[i][n:]) for i in range(n))


def mat_vec(rows, v):
    return tuple(sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in rows)


def mat_mul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def transpose(rows):
    return tuple(tuple(col) for col in zip(*rows))


# ---------------------------------------------------------------------------
# Lattice operations
# ---------------------------------------------------------------------------

def lattice_index(vectors):
    """[saturation of span : Z-span] as the product of the Smith invariants."""
    rows = [list(v.coords if isinstance(v, LatticeVector) else v) for v in vectors]
    if not rows:
        return 1
    if rank_of(rows) < len(rows):
        raise PreconditionError('DependentGenerators', f"{len(rows)} vectors span a lower-rank sublattice", MODULE)
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    index = 1
    for i in range(len(rows)):
        index *= abs(int(snf[i, i]))
    return index


@dataclass(frozen=True)
class QuotientLattice:
    """N -> N/Zv with a fixed unimodular basis.

    unimodular * modded_vector = e_1; the projection is rows 2..n of
    `unimodular` and the lifted basis is columns 2..n of its inverse.
    """
    parent_rank: int
    modded_vector: LatticeVector
    unimodular: tuple[tuple[int, ...], ...]
    inverse: tuple[tuple[int, ...], ...]

    @property
    def rank(self):
        return self.parent_rank - 1

    @property
    def projection_matrix(self):
        return self.unimodular[1:]

    @property
    def basis_of_quotient(self):
        return tuple(LatticeVector(tuple(row[j] for row in self.inverse)) for j in range(1, self.parent_rank))

    def project(self, w):
        coords = w.coords if isinstance(w, LatticeVector) else tuple(w)
        return LatticeVector(tuple(sum(a * b for a, b in zip(row, coords)) for row in self.projection_matrix))

    def project_rational(self, u):
        return tuple(sum((Fraction(a) * b for a, b in zip(row, u)), Fraction(0)) for row in self.projection_matrix)

    def image(self, w):
        """(primitive image, multiplicity) of w; ZeroVector when w is a multiple of v."""
        projected = self.project(w)
        m = content(projected)
        return primitive_part(projected), m


def quotient_lattice(rank, v):
    v = v if isinstance(v, LatticeVector) else LatticeVector(tuple(v))
    if len(v) != rank:
        raise ValidationError('RankMismatch', f"vector of length {len(v)} in a rank-{rank} lattice", MODULE)
    if v.is_zero() or not v.primitive:
        raise PreconditionError('NotPrimitive', f"{list(v.coords)} is not primitive", MODULE)

    u = [[int(i == j) for j in range(rank)] for i in range(rank)]
    u_inv = [[int(i == j) for j in range(rank)] for i in range(rank)]
    w = list(v.coords)

    # Fold every coordinate into w[0] with 2x2 determinant-one moves.
    for i in range(1, rank):
        if w[i] == 0:
            continue
        a, b, g = igcdex(w[0], w[i])
        a, b, g = int(a), int(b), int(g)
        p, q = w[0] // g, w[i] // g
        row0, rowi = u[0], u[i]
        u[0] = [a * x + b * y for x, y in zip(row0, rowi)]
        u[i] = [-q * x + p * y for x, y in zip(row0, rowi)]
        for row in u_inv:
            c0, ci = row[0], row[i]
            row[0] = c0 * p + ci * q
            row[i] = -c0 * b + ci * a
        w[0], w[i] = g, 0

    if w[0] == -1:
        u[0] = [-x for x in u[0]]
        for row in u_inv:
            row[0] = -row[0]

    return QuotientLattice(
        parent_rank=rank,
        modded_vector=v,
        unimodular=tuple(tuple(row) for row in u),
        inverse=tuple(tuple(row) for row in u_inv),
    )


@dataclass(frozen=True)
class RationalCone:
    generators: tuple[LatticeVector, ...]
    ambient_rank: int

    @property
    def dimension(self):
        return rank_of([g.coords for g in self.generators]) if self.generators else 0

    @property
    def simplicial(self):
        return self.dimension == len(self.generators)

    def multiplicity(self):
        return lattice_index(self.generators)


def span_coordinates(v, generators):
    """Coefficients of v in independent generators (any count <= rank), or None."""
    coords = v.coords if isinstance(v, LatticeVector) else tuple(v)
    if not generators:
        return () if not any(coords) else None
    return solve_exact([g.coords for g in generators], coords)


def cone_coordinates(v, cone):
    if len(cone.generators) != cone.ambient_rank or not cone.simplicial:
        raise PreconditionError('DependentGenerators', 'cone is not simplicial of full dimension', MODULE)
    lam = span_coordinates(v, cone.generators)
    if lam is None or any(x < 0 for x in lam):
        raise PreconditionError('NotInCone', f"{list(v.coords if isinstance(v, LatticeVector) else v)} is outside the cone", MODULE)
    return lam
