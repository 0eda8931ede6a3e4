"""
Barycenter bounds from slice-volume envelopes
src/bary/bounds.py

With G = ∫_{t0}^{e} g, ge = g(e) and kappa = v/((n-1)ge), the envelope past e is
h0(x) = ge * Y^(n-1), Y = 1 + kappa(x - e). Lower bounds use h0 (s0) and h0 cut
by a cone with apex t (s1); the upper bound uses the (n-1)-power of the line
from ge^(1/(n-1)) at e to w at u.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from common.errors import ConsistencyError, PreconditionError
from common.log import get_logger
from bary.numbers import (
    Estimate,
    estimate,
    is_interval,
    lift,
    power,
    precision,
    root,
)
from bary.profile import make_profile
from polytopes.slices import PiecewisePolynomial, slice_profile

logger = get_logger(__name__)

MODULE = 'bary'

# Environment Variables
BARY_SCAN_STEPS = int(os.environ.get('BARY_SCAN_STEPS', '8'))


@dataclass(frozen=True)
class BoundResult:
    kind: str
    breakpoint: Estimate | None
    bound: Estimate
    mass: Estimate

    @property
    def value(self):
        """The conservative end: lo for lower bounds, hi for upper bounds."""
        return self.bound.lo if self.kind == 'lower' else self.bound.hi

    def to_dict(self):
        out = {'kind': self.kind, 'bound': self.bound.to_dict(), 'value': self.value, 'mass': self.mass.to_dict()}
        if self.breakpoint is not None:
            out['breakpoint'] = self.breakpoint.to_dict()
        return out


def _lifted(values, inexact):
    return [lift(x) for x in values] if inexact else values


def _envelope_moment(n, ge, e, kappa, y):
    """∫_e^s x h0(x) dx with y = 1 + kappa(s - e), kappa != 0."""
    return (ge / kappa) * ((e - 1 / kappa) * (power(y, n) - 1) / n + (power(y, n + 1) - 1) / ((n + 1) * kappa))


def _envelope_mass(n, ge, kappa, y):
    return (ge / (n * kappa)) * (power(y, n) - 1)


def lower_bound_s0(profile, bits=None):
    n, V, e, v = profile.n, profile.V, profile.e, profile.v
    ge = profile.ge
    if ge <= 0:
        raise PreconditionError('DegenerateSlice', f"g(e) = {ge} <= 0", MODULE)
    G = profile.mass_before
    head = profile.moment_before

    if v == 0:
        s0 = e + (V - G) / ge
        bound = (head + ge * (s0 * s0 - e * e) / 2) / V
        mass = G + ge * (s0 - e)
        return BoundResult('lower', Estimate(s0, s0), Estimate(bound, bound), Estimate(mass, mass))

    kappa = profile.kappa
    radicand = 1 + n * kappa * (V - G) / ge
    if radicand < 0:
        raise PreconditionError('DegenerateSlice', 'the envelope vanishes before reaching volume V', MODULE)

    with precision(bits):
        y = root(radicand, n)
        ge_, e_, kappa_, V_, G_, head_ = _lifted([ge, e, kappa, V, G, head], is_interval(y))
        s0 = e_ + (y - 1) / kappa_
        bound = (head_ + _envelope_moment(n, ge_, e_, kappa_, y)) / V_
        mass = G_ + _envelope_mass(n, ge_, kappa_, y)
        result = BoundResult('lower', estimate(s0), estimate(bound), estimate(mass))
    logger.debug("s0 bound: %s (%s)", result.value, result.bound.exactness)
    return result


def h1_mass(profile):
    """W = ∫_{t0}^{t} h0."""
    n, e, t = profile.n, profile.e, profile.t
    ge, G = profile.ge, profile.mass_before
    if profile.v == 0:
        return G + (t - e) * ge
    y_t = 1 + profile.kappa * (t - e)
    if y_t < 0:
        raise PreconditionError('DegenerateSlice', f"the envelope vanishes before t={t}", MODULE)
    return G + _envelope_mass(n, ge, profile.kappa, y_t)


def lower_bound_h1(profile, bits=None):
    n, V, e, v, t = profile.n, profile.V, profile.e, profile.v, profile.t
    if t is None:
        raise PreconditionError('TOutOfRange', 'lower_bound_h1 needs t', MODULE)
    if not e < t <= profile.t1:
        raise PreconditionError('TOutOfRange', f"t={t} must lie in ({e}, {profile.t1}]", MODULE)
    ge, G, head = profile.ge, profile.mass_before, profile.moment_before
    if ge <= 0:
        raise PreconditionError('DegenerateSlice', f"g(e) = {ge} <= 0", MODULE)

    W = h1_mass(profile)
    if W < V:
        raise PreconditionError('WBelowV', f"W={W} < V={V}", MODULE)
    if G + ge * (t - e) / n > V:
        raise PreconditionError('ConeAboveV', 'the cone from e already exceeds V', MODULE)

    if v == 0:
        s1 = (n * (V - G) - ge * (t - n * e)) / ((n - 1) * ge)
        length = t - s1
        tail = ge * length * (t / n - length / (n + 1))
        bound = (head + ge * (s1 * s1 - e * e) / 2 + tail) / V
        return BoundResult('lower', Estimate(s1, s1), Estimate(bound, bound), Estimate(V, V))

    kappa = profile.kappa
    denominator = ge * (v * (t - e) + (n - 1) * ge)
    numerator = n * v * (V - G) + (n - 1) * ge * ge
    if denominator == 0:
        if numerator != 0:
            raise PreconditionError('DegenerateSlice', 'the envelope vanishes at t with mass left over', MODULE)
        y = Fraction(0)
        bound = (head + _envelope_moment(n, ge, e, kappa, y)) / V
        return BoundResult('lower', Estimate(t, t), Estimate(bound, bound), Estimate(W, W))

    rho = numerator / denominator
    with precision(bits):
        y = root(rho, n - 1)
        ge_, e_, kappa_, V_, G_, head_, t_, rho_ = _lifted([ge, e, kappa, V, G, head, t, rho], is_interval(y))
        s1 = e_ + (y - 1) / kappa_
        length = t_ - s1
        cone_height = ge_ * rho_
        tail = cone_height * length * (t_ / n - length / (n + 1))
        bound = (head_ + _envelope_moment(n, ge_, e_, kappa_, y) + tail) / V_
        mass = G_ + _envelope_mass(n, ge_, kappa_, y) + cone_height * length / n
        result = BoundResult('lower', estimate(s1), estimate(bound), estimate(mass))
    logger.debug("h1 bound: %s (%s)", result.value, result.bound.exactness)
    return result


def _h2_terms(n, sigma, w):
    return [power(sigma, n - 1 - i) * power(w, i) for i in range(n)]


def upper_constraint(profile, w, bits=None):
    """(u - e) sum sigma^i w^(n-1-i) - n(V - G), as an Estimate."""
    n = profile.n
    u, e = profile.u, profile.e
    with precision(bits):
        sigma = root(profile.ge, n - 1)
        inexact = is_interval(sigma)
        u_, e_, w_, V_, G_ = _lifted([u, e, Fraction(w), profile.V, profile.mass_before], inexact)
        value = (u_ - e_) * sum(_h2_terms(n, sigma, w_)) - n * (V_ - G_)
        return estimate(value)


def upper_bound_h2(profile, bits=None):
    n, V, e, u, w = profile.n, profile.V, profile.e, profile.u, profile.w
    if u is None or w is None:
        raise PreconditionError('ConstraintViolated', 'upper_bound_h2 needs u and w', MODULE)
    if u < profile.t1:
        raise PreconditionError('TOutOfRange', f"u={u} must be at least t1={profile.t1}", MODULE)
    if w < 0:
        raise PreconditionError('ConstraintViolated', f"w={w} < 0", MODULE)
    ge, G, head = profile.ge, profile.mass_before, profile.moment_before
    if G + (u - e) * ge / n > V:
        raise PreconditionError('ConstraintViolated', 'G + (u - e) g(e) / n exceeds V', MODULE)
    if upper_constraint(profile, w, bits).lo < 0:
        raise PreconditionError('ConstraintViolated', f"w={w} is not certified to satisfy the mass constraint", MODULE)

    with precision(bits):
        sigma = root(ge, n - 1)
        u_, e_, w_, V_, G_, head_ = _lifted([u, e, w, V, G, head], is_interval(sigma))
        terms = _h2_terms(n, sigma, w_)
        moment = (u_ - e_) * sum(
            term * (e_ / n + (u_ - e_) * (i + 1) / (n * (n + 1))) for i, term in enumerate(terms)
        )
        bound = (head_ + moment) / V_
        mass = G_ + (u_ - e_) * sum(terms) / n
        result = BoundResult('upper', None, estimate(bound), estimate(mass))
    logger.debug("h2 bound: %s (%s)", result.value, result.bound.exactness)
    return result


def minimal_w(profile, bits=None, steps=None):
    """Least dyadic w (resolution 2^-steps) certified to satisfy the h2 constraint."""
    if profile.u is None:
        raise PreconditionError('ConstraintViolated', 'minimal_w needs u', MODULE)
    steps = steps or 32
    lo, hi = Fraction(0), Fraction(1)
    if upper_constraint(profile, lo, bits).lo >= 0:
        return lo
    while upper_constraint(profile, hi, bits).lo < 0:
        hi *= 2
        if hi > 2 ** 64:
            raise PreconditionError('ConstraintViolated', 'no certified w found', MODULE)
    for _ in range(steps):
        mid = (lo + hi) / 2
        if upper_constraint(profile, mid, bits).lo >= 0:
            hi = mid
        else:
            lo = mid
    return hi


def sandwich(profile, exact=None, bits=None):
    """Runs every bound whose parameters are present and checks their order."""
    results = {'s0': lower_bound_s0(profile, bits)}
    if profile.t is not None:
        results['h1'] = lower_bound_h1(profile, bits)
    if profile.u is not None and profile.w is not None:
        results['h2'] = upper_bound_h2(profile, bits)

    lower = max(r.value for k, r in results.items() if k != 'h2')
    if 'h1' in results and results['h1'].bound.hi < results['s0'].bound.lo:
        raise ConsistencyError('BarySandwich', 'h1 bound fell below the s0 bound', MODULE)
    if exact is not None:
        if lower > exact:
            raise ConsistencyError('BarySandwich', f"lower bound {lower} exceeds barycenter {exact}", MODULE)
        if 'h2' in results and results['h2'].value < exact:
            raise ConsistencyError('BarySandwich', f"upper bound {results['h2'].value} below barycenter {exact}", MODULE)
    return results


def _attempt(run):
    try:
        return run()
    except PreconditionError as e:
        logger.debug("Skipped: %s", e.name)
        return None


def grid_scan(polytope, axis, steps=None, bits=None):
    """Evaluates the bounds for e on a grid of (t0, t1) and keeps the best certified pair."""
    steps = steps or BARY_SCAN_STEPS
    g = slice_profile(polytope, axis)
    t0, t1 = g.start, g.end
    best_lower = None
    best_upper = None
    for k in range(1, steps + 1):
        e = t0 + (t1 - t0) * Fraction(k, steps + 1)
        base = _attempt(lambda: make_profile(polytope.dim, g, e))
        if base is None:
            continue
        lowers = [
            _attempt(lambda: lower_bound_s0(base, bits)),
            _attempt(lambda: lower_bound_h1(base.with_params(t=t1), bits)),
        ]
        for result in filter(None, lowers):
            if best_lower is None or result.value > best_lower[1]:
                best_lower = (e, result.value)

        upper = base.with_params(u=t1)
        w = _attempt(lambda: minimal_w(upper, bits))
        result = None if w is None else _attempt(lambda: upper_bound_h2(upper.with_params(w=w), bits))
        if result is not None and (best_upper is None or result.value < best_upper[1]):
            best_upper = (e, result.value)

    logger.info("Grid scan over %d points: lower=%s upper=%s", steps, best_lower, best_upper)
    return {
        'lower': None if best_lower is None else {'e': best_lower[0], 'value': best_lower[1]},
        'upper': None if best_upper is None else {'e': best_upper[0], 'value': best_upper[1]},
    }


# ---------------------------------------------------------------------------
# Blown-up line
# ---------------------------------------------------------------------------


def line_profile(n, d, V0, t, tau):
    """g(x) = ((2-d)x^(n-1) + (n-1)x^(n-2)) / (n-1)! on [0, 1], e = 1, V = V0/n!."""
    coefficients = [Fraction(0)] * n
    coefficients[n - 1] += Fraction(2 - d, factorial(n - 1))
    coefficients[n - 2] += Fraction(n - 1, factorial(n - 1))
    g = PiecewisePolynomial.from_pieces([0, 1], [coefficients])
    return _line_profile(n, g, Fraction(V0) / factorial(n), Fraction(t), Fraction(tau))


def _line_profile(n, g, V, t, tau):
    # make_profile demands e < t1; the blown-up line has e = 1 < tau.
    return make_profile(n, g, 1, side='left', V=V, t1=tau, t=t)


def _check_line_preconditions(n, d, V0, t, tau):
    if n < 2:
        raise PreconditionError('DimensionTooSmall', f"n={n} < 2", MODULE)
    if d > n:
        raise PreconditionError('DegreeAboveDimension', f"d={d} > n={n}", MODULE)
    k = n + 2 - d
    if V0 < k:
        raise PreconditionError('VolumeTooSmall', f"V0={V0} < n+2-d={k}", MODULE)
    if not 1 < t <= tau:
        raise PreconditionError('TOutOfRange', f"t={t} must lie in (1, {tau}]", MODULE)
    a, c = n - d, n + 1 - d
    if d == n:
        if 2 + n * (t - 1) < V0:
            raise PreconditionError('WBelowV', f"2 + n(t-1) < V0={V0}", MODULE)
    elif ((a * t + 1) / Fraction(c)) ** n < 1 + a * (V0 - k) / Fraction(c * c):
        raise PreconditionError('WBelowV', 'the envelope mass up to t is below V', MODULE)
    if k + c * (t - 1) > V0:
        raise PreconditionError('ConeAboveV', f"n+2-d + (n+1-d)(t-1) > V0={V0}", MODULE)


def line_s_lower_bound(n, d, V0, t, tau, bits=None):
    """Closed-form h1 bound for S along the exceptional divisor over a blown-up line."""
    V0, t, tau = Fraction(V0), Fraction(t), Fraction(tau)
    _check_line_preconditions(n, d, V0, t, tau)
    a, c = n - d, n + 1 - d
    head = Fraction(n * (2 - d), n + 1) + (n - 1)

    if d == n:
        s1 = (V0 - 2 - t + n) / (n - 1)
        length = t - s1
        value = (head + Fraction(n, 2) * (s1 * s1 - 1) + n * length * (t / n - length / (n + 1))) / V0
        closed = Estimate(value, value)
    else:
        k = n + 2 - d
        beta = (a * (V0 - k) + c * c) / (c * (a * t + 1))
        with precision(bits):
            gamma = root(beta, n - 1)
            inexact = is_interval(gamma)
            t_, V0_, head_, beta_, slope, scale = _lifted([t, V0, head, beta, Fraction(c, a), Fraction(n, a * a)], inexact)
            length = t_ - 1 - slope * (gamma - 1)
            envelope = scale * (
                c ** 3 * (power(gamma, n + 1) - 1) / (n + 1) - c * c * (power(gamma, n) - 1) / n
            )
            tail = n * c * beta_ * length * (t_ / n - length / (n + 1))
            closed = estimate((head_ + envelope + tail) / V0_)

    generic = lower_bound_h1(line_profile(n, d, V0, t, tau), bits).bound
    if closed.exact and generic.exact and closed.lo != generic.lo:
        raise ConsistencyError('LineSMismatch', f"closed form {closed.lo} != envelope integral {generic.lo}", MODULE)
    if closed.hi < generic.lo or generic.hi < closed.lo:
        raise ConsistencyError('LineSMismatch', 'closed form and envelope integral do not overlap', MODULE)
    return BoundResult('lower', None, closed, Estimate(V0 / factorial(n), V0 / factorial(n)))
