"""
Zariski decomposition on toric surfaces and the surface S-integrals
src/thresholds/zariski.py

For D big on a complete toric surface, the positive part has coefficients
-min_{P_D} <u, v_rho>. Along a flag Y_1 > Y_2 the path x -> L - xY_1 on the
blowup is decomposed at sample points; P(x), N(x) and P(x).Y_1 are affine
between consecutive vertex projections of P_D.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from common.errors import ConsistencyError, PreconditionError
from common.log import get_logger
from fans.fan import star_subdivide
from okounkov.divisors import ToricDivisor, edge_intersection, require_big, support_value

logger = get_logger(__name__)

MODULE = 'thresholds'


@dataclass(frozen=True)
class ZariskiDecomposition:
    negative: ToricDivisor
    positive: ToricDivisor
    intersections: tuple[Fraction, ...]


def _interpolate(start, end, a, b, x):
    w = (Fraction(x) - start) / (end - start)
    return a + w * (b - a)


@dataclass(frozen=True)
class PathPiece:
    start: Fraction
    end: Fraction
    intersection: tuple[Fraction, Fraction]
    negative_start: tuple[Fraction, ...]
    negative_end: tuple[Fraction, ...]
    positive_start: tuple[Fraction, ...]
    positive_end: tuple[Fraction, ...]

    def intersection_at(self, x):
        return _interpolate(self.start, self.end, *self.intersection, x)

    def negative_at(self, x):
        return tuple(_interpolate(self.start, self.end, a, b, x) for a, b in zip(self.negative_start, self.negative_end))

    def positive_at(self, x):
        return tuple(_interpolate(self.start, self.end, a, b, x) for a, b in zip(self.positive_start, self.positive_end))


@dataclass(frozen=True)
class ZariskiPath:
    u1: Fraction
    t1: Fraction
    breakpoints: tuple[Fraction, ...]
    pieces: tuple[PathPiece, ...]
    fan: object
    pulled: tuple[Fraction, ...]
    exceptional: int
    s1: Fraction
    s2: Fraction

    def piece_at(self, x):
        for piece in self.pieces:
            if piece.start <= x <= piece.end:
                return piece
        raise PreconditionError('TOutOfRange', f"x={x} lies outside [{self.u1}, {self.t1}]", MODULE)


def _require_surface(fan):
    if fan.rank != 2 or not fan.complete:
        raise PreconditionError('NotSurface', f"needs a complete rank-2 fan, got rank {fan.rank}", MODULE)


def zariski_surface(divisor):
    fan = divisor.fan
    _require_surface(fan)
    p = require_big(divisor)

    positive = ToricDivisor(fan, tuple(-p.min_pairing(ray.coords) for ray in fan.rays))
    negative = divisor - positive
    if any(x < 0 for x in negative.coefficients):
        raise ConsistencyError('ZariskiNegative', f"negative part {negative.coefficients} is not effective", MODULE)

    for cone in fan.max_cones:
        tight = [w for w in p.vertices if all(fan.rays[i].pair(w) == -positive.coefficients[i] for i in cone)]
        if not tight:
            raise ConsistencyError('ZariskiNotNef', f"positive part is not nef at cone {list(cone)}", MODULE)
    if positive.polytope.vertices != p.vertices:
        raise ConsistencyError('ZariskiPolytope', 'P_P differs from P_D', MODULE)

    intersections = tuple(edge_intersection(positive, i) for i in range(len(fan.rays)))
    for i, (n_i, meet) in enumerate(zip(negative.coefficients, intersections)):
        if n_i > 0 and meet != 0:
            raise ConsistencyError('ZariskiOrthogonal', f"P.D_{i} = {meet} on a component of N", MODULE)
    logger.debug("Zariski decomposition: N=%s", [str(x) for x in negative.coefficients])
    return ZariskiDecomposition(negative=negative, positive=positive, intersections=intersections)


def _decompose_at(fan, pulled, index, x):
    """Zariski decomposition of L - xY_1 on the blowup."""
    coefficients = list(pulled)
    coefficients[index] -= x
    return zariski_surface(ToricDivisor(fan, tuple(coefficients)))


def _row(decomposition, index):
    return (
        (decomposition.intersections[index],)
        + decomposition.negative.coefficients
        + decomposition.positive.coefficients
    )


def _simpson(lo, hi, f_lo, f_mid, f_hi):
    """Exact integral of a quadratic from its values at lo, (lo+hi)/2, hi."""
    return (hi - lo) * (f_lo + 4 * f_mid + f_hi) / 6


def s_via_surface_zariski(divisor, flag):
    """(S_1, S_2) from the Zariski path of L - xY_1, as a ZariskiPath.

    Each piece is sampled at its start and its quarter points; P(x), N(x)
    and P(x).Y_1 must be affine through all four, and the values at the end
    of the piece are the affine extension (L - t_1 Y_1 is not big).
    """
    fan = divisor.fan
    _require_surface(fan)
    flag.require_complete()
    p = require_big(divisor)

    v1 = flag.vectors[0]
    a_v = support_value(divisor, v1)
    blown = star_subdivide(fan, v1)
    pulled = divisor.coefficients + ((a_v,) if blown is not fan else ())
    exceptional = blown.ray_index(v1)
    rho_index = blown.ray_index(flag.table[(1, 2)])
    m = flag.multiplicities[(2, 2)]
    count = len(blown.rays)

    volume = 2 * p.mass.volume
    levels = sorted({a_v + v1.pair(vertex) for vertex in p.vertices})
    u1, t1 = levels[0], levels[-1]

    pieces = []
    s1 = Fraction(0)
    s2 = Fraction(0)
    previous = None
    for lo, hi in zip(levels, levels[1:]):
        mid = (lo + hi) / 2
        first, quarter, middle, third = (
            _row(_decompose_at(blown, pulled, exceptional, lo + k * (hi - lo) / 4), exceptional)
            for k in range(4)
        )
        if previous is not None and previous != first:
            raise ConsistencyError('ZariskiPath', f"the Zariski path jumps at x={lo}", MODULE)
        last = tuple(2 * c - a for a, c in zip(first, middle))
        for a, b, c, d in zip(first, quarter, middle, third):
            if 2 * b != a + c or 2 * d != 3 * c - a:
                raise ConsistencyError('ZariskiPath', f"the Zariski path is not affine on [{lo}, {hi}]", MODULE)
        for row in (first, middle, last):
            negative = row[1:count + 1]
            if row[0] < 0 or any(x < 0 for x in negative):
                raise ConsistencyError('ZariskiPath', f"P.Y_1 or N(x) went negative on [{lo}, {hi}]", MODULE)

        lengths = (first[0], middle[0], last[0])
        negatives = (first[1:count + 1], middle[1:count + 1], last[1:count + 1])
        s1 += _simpson(lo, hi, *(x * l for x, l in zip((lo, mid, hi), lengths)))
        s2 += _simpson(lo, hi, *(l * (l / 2 + n[rho_index] / m) for l, n in zip(lengths, negatives)))
        pieces.append(PathPiece(
            start=lo,
            end=hi,
            intersection=(first[0], last[0]),
            negative_start=first[1:count + 1],
            negative_end=last[1:count + 1],
            positive_start=first[count + 1:],
            positive_end=last[count + 1:],
        ))
        previous = last

    s1 = 2 * s1 / volume
    s2 = 2 * s2 / volume
    logger.debug("Surface integrals over %d pieces: S1=%s S2=%s", len(pieces), s1, s2)
    return ZariskiPath(
        u1=u1,
        t1=t1,
        breakpoints=tuple(levels),
        pieces=tuple(pieces),
        fan=blown,
        pulled=pulled,
        exceptional=exceptional,
        s1=s1,
        s2=s2,
    )
