"""
Torus-invariant divisors and boundaries
src/okounkov/divisors.py

D = sum a_rho V(v_rho) is stored as one Fraction per ray of its fan. P_D is
{u : <u, v_rho> >= -a_rho}; bigness means P_D is full-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial

from common.errors import PreconditionError, ValidationError
from common.log import get_logger
from fans.fan import containing_cones
from lattice import LatticeVector, inverse_matrix, mat_vec, primitive_part
from polytopes import Halfspace, vertices_from_halfspaces

logger = get_logger(__name__)

MODULE = 'okounkov'


@dataclass(frozen=True)
class ToricDivisor:
    fan: object
    coefficients: tuple[Fraction, ...]

    @cached_property
    def polytope(self):
        return moment_polytope(self)

    @cached_property
    def is_big(self):
        try:
            return self.polytope.full_dim
        except PreconditionError as e:
            if e.name == 'Empty':
                return False
            raise

    def scaled(self, c):
        return ToricDivisor(self.fan, tuple(Fraction(c) * a for a in self.coefficients))

    def __add__(self, other):
        return ToricDivisor(self.fan, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other):
        return ToricDivisor(self.fan, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))


@dataclass(frozen=True)
class BoundaryData:
    fan: object
    coefficients: tuple[Fraction, ...]

    def discrepancy_at_ray(self, index):
        return 1 - self.coefficients[index]


def make_divisor(fan, coefficients):
    coefficients = tuple(Fraction(a) for a in coefficients)
    if len(coefficients) != len(fan.rays):
        raise ValidationError('MalformedInput', f"{len(coefficients)} coefficients for {len(fan.rays)} rays", MODULE)
    return ToricDivisor(fan, coefficients)


def make_boundary(fan, coefficients=None):
    if coefficients is None:
        coefficients = [0] * len(fan.rays)
    coefficients = tuple(Fraction(b) for b in coefficients)
    if len(coefficients) != len(fan.rays):
        raise ValidationError('MalformedInput', f"{len(coefficients)} boundary coefficients for {len(fan.rays)} rays", MODULE)
    for b in coefficients:
        if b < 0 or b >= 1:
            raise ValidationError('InvalidBoundary', f"boundary coefficient {b} outside [0, 1)", MODULE)
    return BoundaryData(fan, coefficients)


def moment_polytope(divisor):
    fan = divisor.fan
    rows = [Halfspace.make(ray.coords, -a) for ray, a in zip(fan.rays, divisor.coefficients)]
    try:
        return vertices_from_halfspaces(rows, fan.rank)
    except PreconditionError as e:
        if e.name == 'Unbounded' and fan.complete:
            raise PreconditionError('Unbounded', 'moment polytope of a complete fan came out unbounded', MODULE)
        raise


def require_big(divisor):
    if not divisor.is_big:
        raise PreconditionError('NotBig', 'moment polytope is not full-dimensional', MODULE)
    return divisor.polytope


def normalize_divisor(divisor, cone):
    """D + div(chi^u) with zero coefficients on the rays of `cone`."""
    fan = divisor.fan
    cone = tuple(sorted(cone))
    if len(cone) != fan.rank or cone not in fan.max_cones:
        raise PreconditionError('ConeNotFullDim', f"cone {list(cone)} is not a full-dimensional maximal cone", MODULE)
    inverse = inverse_matrix([fan.rays[i].coords for i in cone])
    u = mat_vec(inverse, [divisor.coefficients[i] for i in cone])
    shifted = tuple(a - ray.pair(u) for ray, a in zip(fan.rays, divisor.coefficients))
    return ToricDivisor(fan, shifted)


def support_value(divisor, v):
    """a_v = -psi_D(v), linear on every cone of the fan."""
    v = v if isinstance(v, LatticeVector) else LatticeVector(tuple(v))
    hits = containing_cones(divisor.fan, v)
    if not hits:
        raise PreconditionError('OutsideSupport', f"{list(v.coords)} lies outside the fan's support", MODULE)
    values = {sum((lam * divisor.coefficients[i] for i, lam in zip(cone, coords)), Fraction(0)) for cone, coords in hits}
    if len(values) != 1:
        raise PreconditionError('AmbiguousCone', f"support function is not single-valued at {list(v.coords)}", MODULE)
    return values.pop()


def divisor_volume(divisor):
    """vol(D) = n! vol(P_D)."""
    p = require_big(divisor)
    return factorial(divisor.fan.rank) * p.mass.volume


def edge_intersection(divisor, index):
    """Lattice length of the face of P_D minimizing <., v_rho> (rank 2 only)."""
    fan = divisor.fan
    if fan.rank != 2:
        raise PreconditionError('NotSurface', f"edge intersections need rank 2, got {fan.rank}", MODULE)
    p = divisor.polytope
    ray = fan.rays[index]
    low = p.min_pairing(ray.coords)
    face = [w for w in p.vertices if ray.pair(w) == low]
    if len(face) < 2:
        return Fraction(0)
    direction = primitive_part((-ray[1], ray[0]))
    a, b = face[0], face[-1]
    axis = 0 if direction[0] else 1
    return abs((a[axis] - b[axis]) / direction[axis])
