"""
Torus-invariant flag chains
src/fans/flags.py

A flag is fed by primitive vectors v_1..v_j, v_k living in N^{k-1}. The forward
pass star-subdivides and takes quotients level by level; the backward pass
(complete flags only) recovers the cones tau_j / gamma_j, the vectors v_{j,k},
the multiplicities m_{j,k} and the coefficients c_{j,k}, c'_{j,k}.
Tables are keyed by 1-based (j, k) pairs, 1 <= j <= k <= n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from common.errors import ConsistencyError, PreconditionError, ValidationError
from common.log import get_logger
from fans.fan import containing_cones, primitive_image, quotient_fan, star_subdivide
from lattice import LatticeVector, lattice_index, primitive_part, span_coordinates

logger = get_logger(__name__)

MODULE = 'fans'


@dataclass(frozen=True, eq=False)
class FlagChain:
    rank: int
    inputs: tuple[LatticeVector, ...]
    vectors: tuple[LatticeVector, ...]
    fans: tuple = ()
    subdivided: tuple = ()
    quotients: tuple = ()
    table: dict = field(default_factory=dict)
    multiplicities: dict = field(default_factory=dict)
    coefficients: dict = field(default_factory=dict)
    normalized: dict = field(default_factory=dict)
    tau: tuple = ()
    gamma: tuple = ()
    tau_multiplicities: tuple = ()
    admissible: bool = False
    l_values: tuple | None = None
    first_level_rays: tuple = ()
    tau0_cone: tuple = ()
    lifted: bool = True

    @property
    def depth(self):
        return len(self.vectors)

    @property
    def complete(self):
        return self.depth == self.rank

    @property
    def base_fan(self):
        return self.fans[0]

    def c_prime_row(self, j):
        return {k: self.normalized[(j, k)] for k in range(j, self.rank + 1)}

    def require_complete(self):
        if not self.complete:
            raise PreconditionError('IncompleteFlag', f"flag has depth {self.depth}, needs {self.rank}", MODULE)


def build_flag_chain(fan, vs, lifted=True):
    """Builds the flag data.

    With lifted=True every input is a vector of N^0 and v_k is the primitive
    part of its image in N^{k-1}; otherwise inputs are already coordinates of
    N^{k-1} in the quotient bases chosen by quotient_lattice.
    """
    n = fan.rank
    inputs = tuple(v if isinstance(v, LatticeVector) else LatticeVector(tuple(v)) for v in vs)
    if not inputs or len(inputs) > n:
        raise PreconditionError('IncompleteFlag', f"flag needs between 1 and {n} vectors, got {len(inputs)}", MODULE)

    fans = [fan]
    subdivided = []
    quotients = []
    vectors = []
    lattices = []
    for k, raw in enumerate(inputs, start=1):
        if lifted:
            if len(raw) != n:
                raise ValidationError('RankMismatch', f"lifted flag vector {list(raw.coords)} must have length {n}", MODULE)
            v = primitive_image(lattices, raw)
        else:
            if len(raw) != n - k + 1:
                raise ValidationError('RankMismatch', f"flag vector {k} must have length {n - k + 1}", MODULE)
            if raw.is_zero() or not raw.primitive:
                raise PreconditionError('NotPrimitive', f"flag vector {k} must be primitive in N^{k - 1}", MODULE)
            v = raw
        vectors.append(v)
        current = star_subdivide(fans[-1], v)
        subdivided.append(current)
        if k < n:
            q = quotient_fan(current, v)
            quotients.append(q)
            lattices.append(q.lattice)
            if k < len(inputs):
                fans.append(q.fan)

    if len(vectors) < n:
        logger.info("Partial flag built: depth=%d of %d", len(vectors), n)
        return FlagChain(rank=n, inputs=inputs, vectors=tuple(vectors), fans=tuple(fans),
                         subdivided=tuple(subdivided), quotients=tuple(quotients), lifted=lifted)

    table = {(n, n): vectors[-1]}
    multiplicities = {}
    coefficients = {(n, n): Fraction(1)}
    tau = {n - 1: (vectors[-1],)}
    gamma = {n - 1: (vectors[-1],)}
    admissible = fans[-1].ray_index(vectors[-1]) is not None

    for j in range(n - 1, 0, -1):
        v_j = vectors[j - 1]
        q = quotients[j - 1]
        sub = subdivided[j - 1]
        base = fans[j - 1]

        for k in range(j + 1, n + 1):
            target = q.fan.ray_index(table[(j + 1, k)])
            parent = q.preimage(target) if target is not None else None
            if parent is None:
                raise ConsistencyError('AmbiguousCone', f"no preimage of v_{{{j + 1},{k}}} next to v_{j}", MODULE)
            table[(j, k)] = sub.rays[parent]
            multiplicities[(j + 1, k)] = q.images[parent][1]
        gamma[j - 1] = (v_j,) + tuple(table[(j, k)] for k in range(j + 1, n + 1))

        if base.ray_index(v_j) is not None:
            table[(j, j)] = v_j
        else:
            admissible = False
            table[(j, j)] = _select_tau_ray(base, v_j, [table[(j, k)] for k in range(j + 1, n + 1)], j)
        tau[j - 1] = tuple(table[(j, k)] for k in range(j, n + 1))

        lam = span_coordinates(v_j, tau[j - 1])
        if lam is None or any(x < 0 for x in lam) or lam[0] <= 0:
            raise ConsistencyError('AmbiguousCone', f"v_{j} is not in the interior side of tau_{j - 1}", MODULE)
        for offset, value in enumerate(lam):
            coefficients[(j, j + offset)] = value

    for k in range(1, n + 1):
        multiplicities[(1, k)] = 1

    normalized = {}
    for j in range(1, n + 1):
        for k in range(j, n + 1):
            denominator = 1
            for i in range(1, j + 1):
                denominator *= multiplicities[(i, k)]
            normalized[(j, k)] = coefficients[(j, k)] / denominator

    tau_multiplicities = tuple(lattice_index(tau[j]) for j in range(n))
    _check_cone_sequence(n, tau_multiplicities, coefficients, multiplicities)

    l_values = None
    if admissible:
        l_values = (1,) + tuple(lattice_index([table[(1, k)] for k in range(1, j + 1)]) for j in range(1, n + 1))
        for j in range(1, n + 1):
            product = 1
            for i in range(1, j + 1):
                product *= multiplicities[(i, j)]
            if Fraction(product) != Fraction(l_values[j], l_values[j - 1]):
                raise ConsistencyError('FlagInvariant', f"admissible multiplicity mismatch at level {j}", MODULE)

    first_level_rays = tuple(fan.ray_index(table[(1, k)]) for k in range(1, n + 1))
    logger.info("Flag chain built: depth=%d admissible=%s", n, admissible)
    return FlagChain(
        rank=n,
        inputs=inputs,
        vectors=tuple(vectors),
        fans=tuple(fans),
        subdivided=tuple(subdivided),
        quotients=tuple(quotients),
        table=table,
        multiplicities=multiplicities,
        coefficients=coefficients,
        normalized=normalized,
        tau=tuple(tau[j] for j in range(n)),
        gamma=tuple(gamma[j] for j in range(n)),
        tau_multiplicities=tau_multiplicities,
        admissible=admissible,
        l_values=l_values,
        first_level_rays=first_level_rays,
        tau0_cone=tuple(sorted(first_level_rays)),
        lifted=lifted,
    )


def _select_tau_ray(base, v_j, face, level):
    """The extra generator of the unique cone of `base` holding gamma_{j-1}."""
    face_idx = set()
    for w in face:
        idx = base.ray_index(w)
        if idx is None:
            raise ConsistencyError('AmbiguousCone', f"gamma_{level - 1} generator {list(w.coords)} is not a ray", MODULE)
        face_idx.add(idx)

    candidates = set()
    for cone, lam in containing_cones(base, v_j):
        if not face_idx <= set(cone):
            continue
        support = {cone[i] for i, x in enumerate(lam) if x > 0}
        extra = support - face_idx
        if len(extra) == 1:
            candidates.add(extra.pop())
    if len(candidates) != 1:
        raise PreconditionError(
            'AmbiguousCone',
            f"{len(candidates)} cones of dimension {len(face) + 1} contain gamma_{level - 1}",
            MODULE,
        )
    return base.rays[candidates.pop()]


def _check_cone_sequence(n, tau_mult, c, m):
    for j in range(1, n + 1):
        lhs = Fraction(tau_mult[j - 1])
        for k in range(j, n + 1):
            lhs *= c[(k, k)]
        rhs = 1
        for i in range(j + 1, n + 1):
            for k in range(i, n + 1):
                rhs *= m[(i, k)]
        if lhs != rhs:
            raise ConsistencyError('FlagInvariant', f"mult(tau_{j - 1}) * prod c_kk = {lhs}, expected {rhs}", MODULE)


def admissible_flag(fan, generators):
    """Coordinate flag through a maximal cone, generators taken in the given order."""
    return build_flag_chain(fan, [g if isinstance(g, LatticeVector) else LatticeVector(tuple(g)) for g in generators])


def coordinate_flags(fan):
    """Every admissible coordinate flag: one per maximal cone and ordering of its rays."""
    flags = []
    for cone in fan.full_dimensional_cones():
        for order in permutations(cone):
            flags.append(admissible_flag(fan, [fan.rays[i] for i in order]))
    logger.info("Built %d coordinate flags over %d fixed points", len(flags), len(fan.full_dimensional_cones()))
    return flags


def flag_points(flags):
    """The first flag vector of every flag, as primitive vectors of N^0."""
    points = []
    for flag in flags:
        v = primitive_part(flag.vectors[0])
        if v not in points:
            points.append(v)
    return points
