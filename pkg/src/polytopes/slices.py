"""
Slice-volume profiles
src/polytopes/slices.py

g(x) = vol_{n-1}(P ∩ {u_axis = x}) is piecewise polynomial of degree <= n-1,
with breaks at the vertex projections. Each piece is recovered by sampling n
interior points and interpolating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import Poly, QQ, Rational, Symbol
from sympy.polys.polyfuncs import interpolate

from common.errors import ConsistencyError, PreconditionError, ValidationError
from common.log import get_logger
from polytopes.polytope import Halfspace, vertices_from_halfspaces

logger = get_logger(__name__)

MODULE = 'polytopes'

X = Symbol('x')


def to_sympy(value):
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


def to_fraction(value):
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def poly_from_coefficients(coefficients):
    """Poly in x from ascending coefficients."""
    return Poly(list(reversed([to_sympy(c) for c in coefficients])) or [0], X, domain=QQ)


@dataclass(frozen=True)
class PiecewisePolynomial:
    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Poly, ...]

    @property
    def start(self):
        return self.breakpoints[0]

    @property
    def end(self):
        return self.breakpoints[-1]

    def piece_index(self, x, side='right'):
        x = Fraction(x)
        if x < self.start or x > self.end:
            raise PreconditionError('TOutOfRange', f"{x} outside [{self.start}, {self.end}]", MODULE)
        last = len(self.pieces) - 1
        for i in range(len(self.pieces)):
            lo, hi = self.breakpoints[i], self.breakpoints[i + 1]
            if side == 'left':
                if lo < x <= hi or (x == self.start and i == 0):
                    return i
            elif lo <= x < hi or (x == self.end and i == last):
                return i
        return last

    def evaluate(self, x, side='right'):
        piece = self.pieces[self.piece_index(x, side)]
        return to_fraction(piece.eval(to_sympy(x)))

    def derivative(self, x, side='right'):
        """One-sided derivative g'(x±)."""
        piece = self.pieces[self.piece_index(x, side)].diff(X)
        return to_fraction(piece.eval(to_sympy(x)))

    def _integrate(self, a, b, weight):
        a, b = Fraction(a), Fraction(b)
        if a > b:
            return -self._integrate(b, a, weight)
        total = Fraction(0)
        for i, piece in enumerate(self.pieces):
            lo = max(a, self.breakpoints[i])
            hi = min(b, self.breakpoints[i + 1])
            if lo >= hi:
                continue
            antiderivative = (piece * weight).integrate()
            total += to_fraction(antiderivative.eval(to_sympy(hi)) - antiderivative.eval(to_sympy(lo)))
        return total

    def integral(self, a=None, b=None):
        return self._integrate(self.start if a is None else a, self.end if b is None else b, Poly(1, X, domain=QQ))

    def moment(self, a=None, b=None):
        """∫ x g(x) dx."""
        return self._integrate(self.start if a is None else a, self.end if b is None else b, Poly(X, X, domain=QQ))

    def coefficients(self, i):
        return tuple(to_fraction(c) for c in reversed(self.pieces[i].all_coeffs()))

    def to_dict(self):
        return {
            'pieces': [
                {
                    'from': str(self.breakpoints[i]),
                    'to': str(self.breakpoints[i + 1]),
                    'coefficients': [str(c) for c in self.coefficients(i)],
                }
                for i in range(len(self.pieces))
            ]
        }

    @classmethod
    def from_pieces(cls, breakpoints, coefficient_lists):
        return cls(
            breakpoints=tuple(Fraction(b) for b in breakpoints),
            pieces=tuple(poly_from_coefficients(c) for c in coefficient_lists),
        )


def slice_volume(p, axis, x):
    """(n-1)-volume of the slice {u in p : u_axis = x}."""
    x = Fraction(x)
    rows = []
    for h in p.halfspaces:
        reduced = tuple(c for i, c in enumerate(h.normal) if i != axis)
        offset = h.offset - h.normal[axis] * x
        if not any(reduced):
            if offset > 0:
                return Fraction(0)
            continue
        rows.append(Halfspace.make(reduced, offset))
    try:
        piece = vertices_from_halfspaces(rows, p.dim - 1)
    except PreconditionError as e:
        if e.name == 'Empty':
            return Fraction(0)
        raise
    return piece.mass.volume if piece.full_dim else Fraction(0)


def slice_profile(p, axis):
    if not p.full_dim:
        raise PreconditionError('NotFullDim', 'slice profile needs a full-dimensional polytope', MODULE)
    if axis < 0 or axis >= p.dim:
        raise ValidationError('MalformedInput', f"axis {axis} outside 0..{p.dim - 1}", MODULE)
    n = p.dim
    breakpoints = sorted({v[axis] for v in p.vertices})

    pieces = []
    for lo, hi in zip(breakpoints, breakpoints[1:]):
        if n == 1:
            pieces.append(Poly(1, X, domain=QQ))
            continue
        samples = [lo + (hi - lo) * Fraction(i, n + 1) for i in range(1, n + 1)]
        points = [(to_sympy(x), to_sympy(slice_volume(p, axis, x))) for x in samples]
        pieces.append(Poly(interpolate(points, X), X, domain=QQ))

    profile = PiecewisePolynomial(breakpoints=tuple(breakpoints), pieces=tuple(pieces))

    mass = p.mass
    volume = profile.integral()
    if volume != mass.volume:
        raise ConsistencyError('SliceMismatch', f"slice integral {volume} != volume {mass.volume}", MODULE)
    if profile.moment() / volume != mass.barycenter[axis]:
        raise ConsistencyError('SliceMismatch', 'slice barycenter disagrees with triangulation', MODULE)
    logger.debug("Slice profile on axis %d: %d pieces", axis, len(pieces))
    return profile
