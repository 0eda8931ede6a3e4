"""
Exact-or-interval numbers for the barycenter bounds
src/bary/numbers.py

Values stay Fraction while every root is a perfect power. Otherwise the root
is enclosed in a dyadic interval and the whole formula is re-evaluated in
mpmath interval arithmetic, which rounds outward.
"""

from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv
from mpmath.libmp import to_rational
from sympy import integer_nthroot

from common.errors import PreconditionError

MODULE = 'bary'

# Environment Variables
BARY_PRECISION_BITS = int(os.environ.get('BARY_PRECISION_BITS', '128'))

_precision_lock = threading.RLock()


@contextmanager
def precision(bits=None):
    bits = bits or BARY_PRECISION_BITS
    with _precision_lock:
        saved = iv.prec
        iv.prec = bits
        try:
            yield bits
        finally:
            iv.prec = saved


@dataclass(frozen=True)
class Estimate:
    lo: Fraction
    hi: Fraction

    @property
    def exact(self):
        return self.lo == self.hi

    @property
    def exactness(self):
        return 'rational' if self.exact else 'interval'

    def to_dict(self):
        if self.exact:
            return {'exactness': 'rational', 'value': self.lo}
        return {'exactness': 'interval', 'lo': self.lo, 'hi': self.hi}


def is_interval(x):
    return hasattr(x, '_mpi_')


def lift(x):
    """Fraction -> enclosing iv interval; intervals pass through."""
    if is_interval(x):
        return x
    x = Fraction(x)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def lift_range(lo, hi):
    lo_iv = lift(lo)
    return lo_iv + (lift(hi) - lo_iv) * iv.mpf([0, 1])


def endpoints(x):
    if not is_interval(x):
        x = Fraction(x)
        return x, x
    a, b = x._mpi_
    try:
        lo = Fraction(*to_rational(a))
        hi = Fraction(*to_rational(b))
    except ValueError:
        raise PreconditionError('DegenerateSlice', 'interval evaluation diverged', MODULE)
    return lo, hi


def estimate(x):
    return Estimate(*endpoints(x))


def power(x, k):
    if k == 0:
        return lift(1) if is_interval(x) else Fraction(1)
    return x ** k


def exact_root(q, k):
    """q^(1/k) when both numerator and denominator are perfect k-th powers."""
    q = Fraction(q)
    if q < 0:
        return None
    p_root, p_exact = integer_nthroot(q.numerator, k)
    d_root, d_exact = integer_nthroot(q.denominator, k)
    if p_exact and d_exact:
        return Fraction(int(p_root), int(d_root))
    return None


def root_bounds(q, k, bits):
    """Dyadic [lo, hi] with hi - lo = 2^-bits containing q^(1/k)."""
    q = Fraction(q)
    scaled = (q.numerator << (k * bits)) // q.denominator
    a = int(integer_nthroot(scaled, k)[0])
    return Fraction(a, 1 << bits), Fraction(a + 1, 1 << bits)


def root(q, k, bits=None):
    """Fraction when exact, otherwise an iv enclosure (call under precision())."""
    q = Fraction(q)
    if q < 0:
        raise PreconditionError('DegenerateSlice', f"negative radicand {q}", MODULE)
    if k == 1:
        return q
    exact = exact_root(q, k)
    if exact is not None:
        return exact
    lo, hi = root_bounds(q, k, bits or iv.prec)
    return lift_range(lo, hi)


def certified_nonnegative(x):
    return endpoints(x)[0] >= 0
