"""
Okounkov bodies, S/T-invariants and toric log discrepancies
src/okounkov/invariants.py
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from common.errors import ConsistencyError, PreconditionError, ValidationError
from common.log import get_logger
from fans.fan import containing_cones, star_subdivide
from lattice import LatticeVector, determinant, mat_mul
from okounkov.divisors import (
    ToricDivisor,
    normalize_divisor,
    require_big,
    support_value,
)
from polytopes import affine_image

logger = get_logger(__name__)

MODULE = 'okounkov'


@dataclass(frozen=True)
class OkounkovBody:
    body: object
    flag: object
    transform: tuple
    divisor: ToricDivisor

    @property
    def barycenter(self):
        return self.body.mass.barycenter

    @property
    def volume(self):
        return self.body.mass.volume


def _as_vector(v):
    return v if isinstance(v, LatticeVector) else LatticeVector(tuple(v))


def s_t_invariants(divisor, v):
    """(S, T) of the divisorial valuation along the primitive vector v."""
    v = _as_vector(v)
    if v.is_zero() or not v.primitive:
        raise PreconditionError('NotPrimitive', f"{list(v.coords)} is not primitive", MODULE)
    p = require_big(divisor)
    a_v = support_value(divisor, v)
    barycenter = p.mass.barycenter
    s = a_v + v.pair(barycenter)
    t = a_v + p.max_pairing(v.coords)
    return s, t


def s_via_subdivision(divisor, v):
    """S computed on the star subdivision at v, from the pulled-back divisor."""
    v = _as_vector(v)
    fan = divisor.fan
    subdivided = star_subdivide(fan, v)
    if subdivided is fan:
        return s_t_invariants(divisor, v)[0]
    pulled = ToricDivisor(subdivided, divisor.coefficients + (support_value(divisor, v),))
    index = subdivided.ray_index(v)
    p = require_big(pulled)
    return pulled.coefficients[index] + v.pair(p.mass.barycenter)


@lru_cache(maxsize=512)
def okounkov_body(divisor, flag):
    flag.require_complete()
    if flag.base_fan != divisor.fan:
        raise ValidationError('MalformedInput', 'flag and divisor live on different fans', MODULE)
    require_big(divisor)
    n = flag.rank
    normalized = normalize_divisor(divisor, flag.tau0_cone)
    pairing = tuple(flag.table[(1, k)].coords for k in range(1, n + 1))
    psi = tuple(
        tuple(flag.normalized[(j, k)] if k >= j else Fraction(0) for k in range(1, n + 1))
        for j in range(1, n + 1)
    )
    transform = mat_mul(psi, pairing)
    if abs(determinant(transform)) != 1:
        raise ConsistencyError('OkounkovVolume', f"|det| of the flag map is {abs(determinant(transform))}", MODULE)
    body = affine_image(normalized.polytope, transform)
    if body.mass.volume != normalized.polytope.mass.volume:
        raise ConsistencyError('OkounkovVolume', 'vol(body) != vol(P_D)', MODULE)
    logger.debug("Okounkov body: %d vertices, volume %s", len(body.vertices), body.mass.volume)
    return OkounkovBody(body=body, flag=flag, transform=transform, divisor=normalized)


def _check_level(flag, j):
    if j < 1:
        raise ValidationError('MalformedInput', f"flag level {j} must be at least 1", MODULE)
    if j > flag.depth:
        raise PreconditionError('IncompleteFlag', f"level {j} exceeds flag depth {flag.depth}", MODULE)
    flag.require_complete()


def flag_s_invariant(divisor, flag, j):
    _check_level(flag, j)
    n = flag.rank
    value = Fraction(0)
    for k in range(j, n + 1):
        value += flag.normalized[(j, k)] * s_t_invariants(divisor, flag.table[(1, k)])[0]
    expected = okounkov_body(divisor, flag).barycenter[j - 1]
    if value != expected:
        raise ConsistencyError('FlagSMismatch', f"flag S at level {j} is {value}, barycenter gives {expected}", MODULE)
    return value


def flag_s_values(divisor, flag):
    return tuple(flag_s_invariant(divisor, flag, j) for j in range(1, flag.rank + 1))


def log_discrepancy(boundary, v):
    """A_{X,B}(v), linear on cones with A(v_rho) = 1 - b_rho."""
    v = _as_vector(v)
    hits = containing_cones(boundary.fan, v)
    if not hits:
        raise PreconditionError('OutsideSupport', f"{list(v.coords)} lies outside the fan's support", MODULE)
    cone, lam = hits[0]
    return sum((x * boundary.discrepancy_at_ray(i) for i, x in zip(cone, lam)), Fraction(0))


def flag_log_discrepancy(boundary, flag, j):
    _check_level(flag, j)
    value = Fraction(0)
    for k in range(j, flag.rank + 1):
        value += flag.normalized[(j, k)] * boundary.discrepancy_at_ray(flag.first_level_rays[k - 1])
    return value


def flag_log_discrepancies(boundary, flag):
    return tuple(flag_log_discrepancy(boundary, flag, j) for j in range(1, flag.rank + 1))
