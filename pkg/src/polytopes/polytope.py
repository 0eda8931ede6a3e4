"""
Exact rational polytopes
src/polytopes/polytope.py

Halfspaces are <normal, u> >= offset with a primitive integer normal. Vertices
come from exhaustive basis enumeration; volumes and barycenters from a
deterministic lexmin-apex triangulation over the face lattice.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations
from math import factorial, gcd, lcm

from common.errors import PreconditionError, ValidationError
from common.log import get_logger
from lattice.core import determinant, inverse_matrix, mat_vec, rank_of, solve_exact, transpose

logger = get_logger(__name__)

MODULE = 'polytopes'

# Environment Variables
POLYTOPE_MAX_DIM = int(os.environ.get('POLYTOPE_MAX_DIM', '6'))
POLYTOPE_MAX_HALFSPACES = int(os.environ.get('POLYTOPE_MAX_HALFSPACES', '32'))


def _dot(a, b):
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class Halfspace:
    normal: tuple[int, ...]
    offset: Fraction

    @classmethod
    def make(cls, normal, offset):
        """Scales (normal, offset) so the normal is a primitive integer vector."""
        normal = [Fraction(x) for x in normal]
        offset = Fraction(offset)
        if not any(normal):
            return cls(tuple(0 for _ in normal), offset)
        scale = reduce(lcm, (x.denominator for x in normal), 1)
        ints = [int(x * scale) for x in normal]
        g = reduce(gcd, (abs(x) for x in ints), 0)
        return cls(tuple(x // g for x in ints), offset * scale / g)

    def value(self, u):
        return _dot(self.normal, u)

    def holds(self, u):
        return self.value(u) >= self.offset

    def tight(self, u):
        return self.value(u) == self.offset

    def to_dict(self):
        return {'normal': [str(x) for x in self.normal], 'offset': str(self.offset)}


@dataclass(frozen=True)
class MassData:
    volume: Fraction
    barycenter: tuple[Fraction, ...] | None
    dimension: int


@dataclass(frozen=True)
class Polytope:
    dim: int
    halfspaces: tuple[Halfspace, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    full_dim: bool

    @cached_property
    def tight_sets(self):
        return tuple(
            frozenset(i for i, v in enumerate(self.vertices) if h.tight(v))
            for h in self.halfspaces
        )

    @cached_property
    def affine_dimension(self):
        return _affine_rank(self.vertices)

    @cached_property
    def mass(self):
        return volume_and_barycenter(self)

    def contains(self, u):
        return all(h.holds(u) for h in self.halfspaces)

    def max_pairing(self, v):
        return max(_dot(v, w) for w in self.vertices)

    def min_pairing(self, v):
        return min(_dot(v, w) for w in self.vertices)

    def to_dict(self):
        return {
            'dim': self.dim,
            'full_dim': self.full_dim,
            'halfspaces': [h.to_dict() for h in self.halfspaces],
            'vertices': [[str(x) for x in v] for v in self.vertices],
        }


def _affine_rank(points):
    points = list(points)
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank_of([[a - b for a, b in zip(p, base)] for p in points[1:]])


def _kernel_vector(rows, n):
    """Generalized cross product of n-1 rows: spans their kernel when they are independent."""
    out = []
    for i in range(n):
        minor = [[row[j] for j in range(n) if j != i] for row in rows]
        out.append((-1) ** i * determinant(minor) if minor else Fraction(1))
    return tuple(out)


def _check_caps(dim, count):
    if dim > POLYTOPE_MAX_DIM:
        raise ValidationError('TooLarge', f"dimension {dim} exceeds POLYTOPE_MAX_DIM={POLYTOPE_MAX_DIM}", MODULE)
    if count > POLYTOPE_MAX_HALFSPACES:
        raise ValidationError('TooLarge', f"{count} halfspaces exceed POLYTOPE_MAX_HALFSPACES={POLYTOPE_MAX_HALFSPACES}", MODULE)


def _prepare(halfspaces, dim):
    """Normalize, drop trivially true rows, keep the tightest offset per normal."""
    best = {}
    for h in halfspaces:
        if not isinstance(h, Halfspace):
            normal, offset = h
            h = Halfspace.make(normal, offset)
        else:
            h = Halfspace.make(h.normal, h.offset)
        if len(h.normal) != dim:
            raise ValidationError('MalformedInput', f"halfspace normal of length {len(h.normal)} in dimension {dim}", MODULE)
        if not any(h.normal):
            if h.offset > 0:
                raise PreconditionError('Empty', '0 >= positive offset', MODULE)
            continue
        if h.normal not in best or h.offset > best[h.normal].offset:
            best[h.normal] = h
    return list(best.values())


def _enumerate_vertices(rows, dim):
    vertices = set()
    for subset in combinations(rows, dim):
        normals = [h.normal for h in subset]
        inv = inverse_matrix(normals)
        if inv is None:
            continue
        point = mat_vec(inv, [h.offset for h in subset])
        if all(h.holds(point) for h in rows):
            vertices.add(point)
    return sorted(vertices)


def _has_recession_direction(rows, dim):
    for subset in combinations(rows, dim - 1):
        normals = [h.normal for h in subset]
        if normals and rank_of(normals) < dim - 1:
            continue
        r = _kernel_vector(normals, dim)
        if not any(r):
            continue
        for direction in (r, tuple(-x for x in r)):
            if all(_dot(h.normal, direction) >= 0 for h in rows):
                return True
    return False


def vertices_from_halfspaces(halfspaces, dim=None):
    """Polytope from an H-description; raises Unbounded or Empty."""
    halfspaces = list(halfspaces)
    if dim is None:
        if not halfspaces:
            raise ValidationError('MalformedInput', 'no halfspaces and no dimension', MODULE)
        first = halfspaces[0]
        dim = len(first.normal if isinstance(first, Halfspace) else first[0])
    _check_caps(dim, len(halfspaces))
    rows = _prepare(halfspaces, dim)

    if dim == 0:
        return Polytope(dim=0, halfspaces=(), vertices=((),), full_dim=True)

    if not rows or rank_of([h.normal for h in rows]) < dim:
        if _feasible_with_lineality(rows, dim):
            raise PreconditionError('Unbounded', 'the halfspaces contain a line', MODULE)
        raise PreconditionError('Empty', 'the halfspaces have no common point', MODULE)

    vertices = _enumerate_vertices(rows, dim)
    if not vertices:
        raise PreconditionError('Empty', 'the halfspaces have no common point', MODULE)
    if _has_recession_direction(rows, dim):
        raise PreconditionError('Unbounded', 'nontrivial recession cone', MODULE)

    return _assemble(dim, rows, vertices)


def _feasible_with_lineality(rows, dim):
    """Feasibility when the normals do not span: restrict to their row space."""
    if not rows:
        return True
    basis = []
    for h in rows:
        if rank_of(basis + [h.normal]) > len(basis):
            basis.append(h.normal)
    r = len(basis)
    # u = sum y_i * basis_i; the reduced system has full column rank.
    reduced = [(tuple(_dot(h.normal, b) for b in basis), h.offset) for h in rows]
    reduced_rows = [Halfspace.make(n, c) for n, c in reduced]
    return bool(_enumerate_vertices(reduced_rows, r))


def _assemble(dim, rows, vertices):
    full_dim = _affine_rank(vertices) == dim
    if full_dim:
        facets = []
        seen = set()
        for h in rows:
            tight = frozenset(i for i, v in enumerate(vertices) if h.tight(v))
            if tight in seen or _affine_rank([vertices[i] for i in tight]) != dim - 1 or len(tight) < dim:
                continue
            seen.add(tight)
            facets.append(h)
        facets.sort(key=lambda h: (h.normal, h.offset))
        kept = tuple(facets)
    else:
        kept = tuple(sorted(rows, key=lambda h: (h.normal, h.offset)))
    return Polytope(dim=dim, halfspaces=kept, vertices=tuple(vertices), full_dim=full_dim)


def polytope_from_vertices(points):
    """Convex hull of a full-dimensional point set."""
    points = sorted({tuple(Fraction(x) for x in p) for p in points})
    if not points:
        raise PreconditionError('Empty', 'no points', MODULE)
    dim = len(points[0])
    _check_caps(dim, 0)
    if _affine_rank(points) != dim:
        raise PreconditionError('NotFullDim', f"points span affine dimension {_affine_rank(points)} < {dim}", MODULE)
    if dim == 1:
        rows = [Halfspace.make((1,), points[0][0]), Halfspace.make((-1,), -points[-1][0])]
        return _assemble(1, rows, [points[0], points[-1]])

    rows = {}
    for subset in combinations(points, dim):
        base = subset[0]
        diffs = [[a - b for a, b in zip(p, base)] for p in subset[1:]]
        if rank_of(diffs) < dim - 1:
            continue
        normal = _kernel_vector(diffs, dim)
        c = _dot(normal, base)
        values = [_dot(normal, p) for p in points]
        if all(x >= c for x in values):
            h = Halfspace.make(normal, c)
        elif all(x <= c for x in values):
            h = Halfspace.make([-x for x in normal], -c)
        else:
            continue
        rows[h.normal] = h
    facets = list(rows.values())
    vertices = [p for p in points if rank_of([h.normal for h in facets if h.tight(p)] or [[0] * dim]) == dim]
    return _assemble(dim, facets, vertices)


def _triangulate(face, dim, tight_sets, vertices, cache):
    if dim == 0:
        return [tuple(face)]
    apex = min(face)
    subfaces = set()
    for tight in tight_sets:
        sub = face & tight
        if apex in sub or len(sub) < dim:
            continue
        key = sub
        if key not in cache:
            cache[key] = _affine_rank([vertices[i] for i in sorted(sub)])
        if cache[key] == dim - 1:
            subfaces.add(sub)
    simplices = []
    for sub in sorted(subfaces, key=sorted):
        for simplex in _triangulate(sub, dim - 1, tight_sets, vertices, cache):
            simplices.append((apex,) + simplex)
    return simplices


def triangulate(p):
    """Simplices (tuples of vertex indices) of the lexmin-apex triangulation."""
    if not p.vertices:
        return []
    d = p.affine_dimension
    return _triangulate(frozenset(range(len(p.vertices))), d, p.tight_sets, p.vertices, {})


def _chart(vertices, d):
    """Affine coordinates of every vertex in a basis of the affine hull."""
    base = vertices[0]
    basis = []
    for v in vertices[1:]:
        diff = [a - b for a, b in zip(v, base)]
        if rank_of(basis + [diff]) > len(basis):
            basis.append(diff)
        if len(basis) == d:
            break
    return [solve_exact(basis, [a - b for a, b in zip(v, base)]) for v in vertices]


def volume_and_barycenter(p):
    if not p.vertices:
        return MassData(volume=Fraction(0), barycenter=None, dimension=-1)
    d = p.affine_dimension
    if d == 0:
        return MassData(volume=Fraction(0) if p.dim else Fraction(1), barycenter=p.vertices[0], dimension=0)

    coords = p.vertices if d == p.dim else _chart(p.vertices, d)
    simplices = triangulate(p)
    total = Fraction(0)
    moment = [Fraction(0)] * p.dim
    for simplex in simplices:
        base = coords[simplex[0]]
        vol = abs(determinant([[a - b for a, b in zip(coords[i], base)] for i in simplex[1:]])) / factorial(d)
        total += vol
        for axis in range(p.dim):
            moment[axis] += vol * sum(p.vertices[i][axis] for i in simplex) / (d + 1)
    barycenter = tuple(m / total for m in moment)
    volume = total if d == p.dim else Fraction(0)
    logger.debug("Triangulated %d vertices into %d simplices", len(p.vertices), len(simplices))
    return MassData(volume=volume, barycenter=barycenter, dimension=d)


def affine_image(p, matrix, offset=None):
    """Image of p under u -> matrix * u + offset; matrix must be invertible."""
    n = p.dim
    offset = tuple(Fraction(x) for x in (offset or [0] * n))
    inverse = inverse_matrix(matrix)
    if inverse is None:
        raise PreconditionError('SingularMap', 'affine map is not invertible', MODULE)
    inv_t = transpose(inverse)
    rows = []
    for h in p.halfspaces:
        normal = mat_vec(inv_t, h.normal)
        rows.append(Halfspace.make(normal, h.offset + _dot(normal, offset)))
    vertices = sorted(tuple(a + b for a, b in zip(mat_vec(matrix, v), offset)) for v in p.vertices)
    return _assemble(n, rows, vertices)
