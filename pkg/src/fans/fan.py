"""
Fans, star subdivisions and quotient fans
src/fans/fan.py

Fans are stored with deduplicated primitive rays and maximal cones as sorted
index tuples, listed in sorted order.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from itertools import combinations

from common.errors import PreconditionError, ValidationError
from common.log import get_logger
from lattice import (
    LatticeVector,
    lattice_index,
    primitive_part,
    quotient_lattice,
    rank_of,
    span_coordinates,
)

logger = get_logger(__name__)

MODULE = 'fans'

# Environment Variables
FAN_PROBE_SEED = int(os.environ.get('FAN_PROBE_SEED', '20240'))
FAN_PROBE_COUNT = int(os.environ.get('FAN_PROBE_COUNT', '24'))


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[LatticeVector, ...]
    max_cones: tuple[tuple[int, ...], ...]
    simplicial: bool = False
    complete: bool = False
    smooth: bool = False

    def cone_generators(self, cone):
        return tuple(self.rays[i] for i in cone)

    def ray_index(self, v):
        """Index of v among the rays, or None."""
        coords = v.coords if isinstance(v, LatticeVector) else tuple(v)
        for i, ray in enumerate(self.rays):
            if ray.coords == coords:
                return i
        return None

    def full_dimensional_cones(self):
        return tuple(c for c in self.max_cones if len(c) == self.rank)


def make_fan(rank, rays, cones):
    """Builds and validates a fan from plain lists (0-based cone indices)."""
    vectors = [LatticeVector(tuple(r)) for r in rays]
    return validate_fan(Fan(rank=rank, rays=tuple(vectors), max_cones=tuple(tuple(c) for c in cones)))


def validate_fan(fan):
    for ray in fan.rays:
        if len(ray) != fan.rank:
            raise ValidationError('RankMismatch', f"ray {list(ray.coords)} in a rank-{fan.rank} fan", MODULE)
        if ray.is_zero() or not ray.primitive:
            raise ValidationError('NonPrimitiveRay', f"ray {list(ray.coords)} is not primitive", MODULE)

    # Deduplicate rays, remapping cone indices onto the first occurrence.
    unique = []
    remap = {}
    for i, ray in enumerate(fan.rays):
        if ray in unique:
            remap[i] = unique.index(ray)
        else:
            remap[i] = len(unique)
            unique.append(ray)

    cones = []
    for cone in fan.max_cones:
        if any(i < 0 or i >= len(fan.rays) for i in cone):
            raise ValidationError('MalformedInput', f"cone {list(cone)} references a missing ray", MODULE)
        mapped = tuple(sorted({remap[i] for i in cone}))
        if mapped in cones:
            raise ValidationError('DuplicateCone', f"cone {list(cone)} listed twice", MODULE)
        cones.append(mapped)
    cones.sort()

    used = {i for cone in cones for i in cone}
    if fan.rank > 0 and len(used) != len(unique):
        unused = [list(unique[i].coords) for i in range(len(unique)) if i not in used]
        raise ValidationError('UnusedRay', f"rays {unused} appear in no cone", MODULE)

    for cone in cones:
        gens = [unique[i].coords for i in cone]
        if gens and rank_of(gens) < len(gens):
            raise ValidationError('NonSimplicialCone', f"cone {list(cone)} has dependent generators", MODULE)

    smooth = all(lattice_index([unique[i] for i in cone]) == 1 for cone in cones)
    validated = Fan(
        rank=fan.rank,
        rays=tuple(unique),
        max_cones=tuple(cones),
        simplicial=True,
        smooth=smooth,
    )
    complete = _probe_completeness(validated)
    return Fan(
        rank=validated.rank,
        rays=validated.rays,
        max_cones=validated.max_cones,
        simplicial=True,
        complete=complete,
        smooth=smooth,
    )


def containing_cones(fan, v):
    """Maximal cones containing v, with v's coordinates in each."""
    found = []
    for cone in fan.max_cones:
        lam = span_coordinates(v, fan.cone_generators(cone))
        if lam is not None and all(x >= 0 for x in lam):
            found.append((cone, lam))
    return found


def in_support(fan, v):
    return bool(containing_cones(fan, v))


def completeness_probes(rank, rays, seed=FAN_PROBE_SEED, count=FAN_PROBE_COUNT):
    probes = []
    for ray in rays:
        probes.append(ray.coords)
        probes.append((-ray).coords)
    for i in range(rank):
        unit = tuple(int(i == j) for j in range(rank))
        probes.append(unit)
        probes.append(tuple(-x for x in unit))
    for a, b in combinations(rays, 2):
        probes.append((a + b).coords)
    rng = random.Random(seed)
    for _ in range(count):
        probes.append(tuple(rng.randint(-7, 7) for _ in range(rank)))
    return [LatticeVector(p) for p in probes if any(p)]


def _probe_completeness(fan):
    if fan.rank == 0:
        return True
    if not fan.full_dimensional_cones():
        return False
    return all(in_support(fan, probe) for probe in completeness_probes(fan.rank, fan.rays))


def star_subdivide(fan, v):
    v = v if isinstance(v, LatticeVector) else LatticeVector(tuple(v))
    if v.is_zero() or not v.primitive:
        raise PreconditionError('NotPrimitive', f"{list(v.coords)} is not primitive", MODULE)
    if fan.ray_index(v) is not None:
        return fan

    hits = containing_cones(fan, v)
    if not hits:
        raise PreconditionError('OutsideSupport', f"{list(v.coords)} lies outside the fan's support", MODULE)

    new_index = len(fan.rays)
    touched = set()
    cones = []
    for cone, lam in hits:
        touched.add(cone)
        support = [cone[k] for k, x in enumerate(lam) if x > 0]
        # Facets of the cone that miss some support generator join with v.
        for dropped in support:
            cones.append(tuple(sorted([i for i in cone if i != dropped] + [new_index])))
    for cone in fan.max_cones:
        if cone not in touched:
            cones.append(cone)

    subdivided = Fan(
        rank=fan.rank,
        rays=fan.rays + (v,),
        max_cones=tuple(sorted(set(cones))),
        simplicial=True,
        complete=fan.complete,
        smooth=False,
    )
    smooth = all(lattice_index(subdivided.cone_generators(c)) == 1 for c in subdivided.max_cones)
    logger.debug("Star subdivision at %s: %d -> %d cones", list(v.coords), len(fan.max_cones), len(subdivided.max_cones))
    return Fan(
        rank=subdivided.rank,
        rays=subdivided.rays,
        max_cones=subdivided.max_cones,
        simplicial=True,
        complete=fan.complete,
        smooth=smooth,
    )


@dataclass(frozen=True)
class FanQuotient:
    """The quotient fan together with where each neighbouring ray went.

    images maps a parent ray index to (quotient ray index, multiplicity) with
    projection(parent ray) = multiplicity * quotient ray.
    """
    fan: Fan
    lattice: object
    ray_index: int
    images: dict = field(default_factory=dict)

    def preimage(self, quotient_ray):
        for parent, (image, _) in self.images.items():
            if image == quotient_ray:
                return parent
        return None


def quotient_fan(fan, v):
    v = v if isinstance(v, LatticeVector) else LatticeVector(tuple(v))
    index = fan.ray_index(v)
    if index is None:
        raise PreconditionError('NotARay', f"{list(v.coords)} is not a ray of the fan", MODULE)
    lattice = quotient_lattice(fan.rank, v)

    star = [cone for cone in fan.max_cones if index in cone]
    rays = []
    images = {}
    for cone in star:
        for i in cone:
            if i == index or i in images:
                continue
            image, mult = lattice.image(fan.rays[i])
            if image not in rays:
                rays.append(image)
            images[i] = (rays.index(image), mult)

    cones = [tuple(sorted(images[i][0] for i in cone if i != index)) for cone in star]
    quotient = Fan(rank=fan.rank - 1, rays=tuple(rays), max_cones=tuple(sorted(set(cones))))
    validated = validate_fan(quotient)
    # validate_fan keeps first occurrences in order, so indices are unchanged.
    return FanQuotient(fan=validated, lattice=lattice, ray_index=index, images=images)


def primitive_image(lattices, w):
    """Pushes a lifted vector through successive quotients, then takes the primitive part."""
    current = w if isinstance(w, LatticeVector) else LatticeVector(tuple(w))
    for lattice in lattices:
        current = lattice.project(current)
    return primitive_part(current)
