"""
Slice profiles for the barycenter bounds
src/bary/profile.py
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from common.errors import PreconditionError, ValidationError
from common.log import get_logger
from polytopes import slice_profile

logger = get_logger(__name__)

MODULE = 'bary'


@dataclass(frozen=True)
class BaryProfile:
    """g on [t0, t1] (known at least on [t0, e]) with its bound parameters."""
    n: int
    t0: Fraction
    t1: Fraction
    V: Fraction
    g: object
    e: Fraction
    v: Fraction
    t: Fraction | None = None
    u: Fraction | None = None
    w: Fraction | None = None

    @property
    def ge(self):
        return self.g.evaluate(self.e, side='left')

    @property
    def mass_before(self):
        """G = ∫_{t0}^{e} g."""
        return self.g.integral(self.t0, self.e)

    @property
    def moment_before(self):
        return self.g.moment(self.t0, self.e)

    @property
    def kappa(self):
        """Slope of (h0/g(e))^(1/(n-1)) past e."""
        return self.v / ((self.n - 1) * self.ge)

    def with_params(self, **params):
        return replace(self, **{k: (None if x is None else Fraction(x)) for k, x in params.items()})


def make_profile(n, g, e, v=None, side='left', V=None, t1=None, t=None, u=None, w=None):
    if n < 2:
        raise PreconditionError('DimensionTooSmall', f"barycenter bounds need n >= 2, got {n}", MODULE)
    e = Fraction(e)
    t0 = g.start
    t1 = g.end if t1 is None else Fraction(t1)
    if not t0 < e < t1:
        raise PreconditionError('TOutOfRange', f"e={e} must lie in ({t0}, {t1})", MODULE)
    if g.end < e:
        raise ValidationError('MalformedInput', f"g must be known on [{t0}, {e}]", MODULE)
    if V is None:
        if g.end != t1:
            raise ValidationError('MissingField', 'V is required when g does not cover [t0, t1]', MODULE)
        V = g.integral()
    V = Fraction(V)
    if g.end == t1 and g.integral() != V:
        raise ValidationError('MalformedInput', f"V={V} differs from the integral of g", MODULE)
    if V <= 0:
        raise PreconditionError('DegenerateSlice', f"V={V} is not positive", MODULE)
    if g.evaluate(e, side='left') <= 0:
        raise PreconditionError('DegenerateSlice', f"g({e}) <= 0", MODULE)
    if v is None:
        v = g.derivative(e, side=side)
    return BaryProfile(
        n=n, t0=t0, t1=t1, V=V, g=g, e=e, v=Fraction(v),
        t=None if t is None else Fraction(t),
        u=None if u is None else Fraction(u),
        w=None if w is None else Fraction(w),
    )


def profile_from_polytope(polytope, axis, e, side='left', **params):
    g = slice_profile(polytope, axis)
    logger.debug("Profile on axis %d with %d pieces", axis, len(g.pieces))
    return make_profile(polytope.dim, g, e, side=side, **params)


def envelope_h0(profile, x):
    """g before e, then the (n-1)-power of the tangent line of g^(1/(n-1))."""
    x = Fraction(x)
    if x <= profile.e:
        return profile.g.evaluate(x, side='left')
    base = 1 + profile.kappa * (x - profile.e)
    if base <= 0:
        return Fraction(0)
    return profile.ge * base ** (profile.n - 1)
