"""
Closed-form thresholds and threshold identities
src/thresholds/oracles.py

Curve and Hirzebruch closed forms, the product formula for toric products,
and the scaling / proportional-collapse / inverse-additivity identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy.utilities.iterables import multiset_partitions

from common.errors import PreconditionError, ValidationError
from common.log import get_logger
from fans.fan import make_fan
from okounkov.divisors import make_boundary, make_divisor, normalize_divisor
from thresholds.engine import coupled_thresholds, delta_upper
from thresholds.problem import make_problem

logger = get_logger(__name__)

MODULE = 'thresholds'


@dataclass(frozen=True)
class HirzebruchResult:
    p: tuple[Fraction, ...]
    q: tuple[Fraction, ...]
    delta: Fraction


@dataclass(frozen=True)
class ProductResult:
    lhs: Fraction
    rhs: Fraction
    factors: tuple[Fraction, Fraction]

    @property
    def equal(self):
        return self.lhs == self.rhs


def hirzebruch_fan(m):
    """F_m with rays (1,0), (0,1), (-1,m), (0,-1); E = V((0,1)), F = V((1,0))."""
    if m < 0:
        raise ValidationError('MalformedInput', f"m must be nonnegative, got {m}", MODULE)
    return make_fan(2, [(1, 0), (0, 1), (-1, m), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])


def hirzebruch_divisor(fan, a, b):
    """aE + bF as coefficients (b, a, 0, 0)."""
    return make_divisor(fan, [b, a, 0, 0])


def hirzebruch_oracle(m, terms):
    """Closed-form p_i = S(L_i; E), q_i = S(L_i; F) and delta = min(1/sum c p, 1/sum c q)."""
    if m < 0:
        raise ValidationError('MalformedInput', f"m must be nonnegative, got {m}", MODULE)
    p_values = []
    q_values = []
    for c, a, b in terms:
        c, a, b = Fraction(c), Fraction(a), Fraction(b)
        if c <= 0:
            raise ValidationError('InvalidWeight', f"weight {c} <= 0", MODULE)
        if a <= 0 or b <= 0:
            raise PreconditionError('NotBig', f"aE + bF with a={a}, b={b} is not big", MODULE)
        if m == 0:
            p, q = a / 2, b / 2
        elif m * a >= b:
            p, q = a - b / (3 * m), b / 3
        else:
            p = a * (3 * b - m * a) / (3 * (2 * b - m * a))
            q = (3 * b * b - 3 * m * a * b + m * m * a * a) / (3 * (2 * b - m * a))
        p_values.append(p)
        q_values.append(q)
    weights = [Fraction(t[0]) for t in terms]
    sum_p = sum((c * p for c, p in zip(weights, p_values)), Fraction(0))
    sum_q = sum((c * q for c, q in zip(weights, q_values)), Fraction(0))
    return HirzebruchResult(p=tuple(p_values), q=tuple(q_values), delta=min(1 / sum_p, 1 / sum_q))


def curve_delta(b, terms):
    """2(1 - b) / sum c_i d_i on P^1 with boundary b at one point."""
    b = Fraction(b)
    if b < 0 or b >= 1:
        raise ValidationError('InvalidBoundary', f"boundary coefficient {b} outside [0, 1)", MODULE)
    total = Fraction(0)
    for c, d in terms:
        c, d = Fraction(c), Fraction(d)
        if c <= 0:
            raise ValidationError('InvalidWeight', f"weight {c} <= 0", MODULE)
        if d <= 0:
            raise PreconditionError('NotBig', f"degree {d} <= 0", MODULE)
        total += c * d
    if not total:
        raise ValidationError('MalformedInput', 'no terms', MODULE)
    return 2 * (1 - b) / total


def curve_problem(b, terms):
    """The same data as a coupled problem on the P^1 fan."""
    fan = make_fan(1, [(1,), (-1,)], [(0,), (1,)])
    return make_problem(
        fan,
        [(c, make_divisor(fan, [d, 0])) for c, d in terms],
        boundary=make_boundary(fan, [b, 0]),
    )


def product_problem(p1, p2):
    if len(p1.terms) != len(p2.terms) or p1.weights != p2.weights:
        raise ValidationError('MismatchedTerms', 'product needs the same weights on both factors', MODULE)
    f1, f2 = p1.fan, p2.fan
    n1, n2 = f1.rank, f2.rank
    rays = [r.coords + (0,) * n2 for r in f1.rays] + [(0,) * n1 + r.coords for r in f2.rays]
    shift = len(f1.rays)
    cones = [c1 + tuple(i + shift for i in c2) for c1 in f1.max_cones for c2 in f2.max_cones]
    fan = make_fan(n1 + n2, rays, cones)

    terms = [
        (t1.weight, make_divisor(fan, t1.divisor.coefficients + t2.divisor.coefficients))
        for t1, t2 in zip(p1.terms, p2.terms)
    ]
    boundary = make_boundary(fan, p1.boundary.coefficients + p2.boundary.coefficients)
    candidates = [v.coords + (0,) * n2 for v in p1.candidates] + [(0,) * n1 + w.coords for w in p2.candidates]
    return make_problem(fan, terms, boundary=boundary, candidates=candidates, flags=[])


def product_check(p1, p2):
    """delta of the product against the smaller factor delta, both candidate-restricted."""
    product = product_problem(p1, p2)
    lhs = coupled_thresholds(product).delta_upper
    d1, d2 = delta_upper(p1), delta_upper(p2)
    result = ProductResult(lhs=lhs, rhs=min(d1, d2), factors=(d1, d2))
    logger.info("Product check: lhs=%s rhs=%s", result.lhs, result.rhs)
    return result


def proportional_factors(problem):
    """c'_i with L_i = c'_i L_1 as classes, or None."""
    cone = problem.fan.full_dimensional_cones()[0]
    base = normalize_divisor(problem.terms[0].divisor, cone).coefficients
    pivot = next(i for i, a in enumerate(base) if a != 0) if any(base) else None
    if pivot is None:
        return None
    factors = []
    for term in problem.terms:
        coefficients = normalize_divisor(term.divisor, cone).coefficients
        ratio = coefficients[pivot] / base[pivot]
        if any(a != ratio * b for a, b in zip(coefficients, base)):
            return None
        factors.append(ratio)
    return tuple(factors)


def partition_bounds(problem):
    """(blocks, sum of 1/delta over the blocks) for every split of the terms into two or more blocks."""
    inverse = {}
    out = []
    for blocks in multiset_partitions(list(range(len(problem.terms)))):
        if len(blocks) < 2:
            continue
        for block in blocks:
            key = tuple(block)
            if key not in inverse:
                inverse[key] = 1 / delta_upper(problem.subproblem(key))
        out.append((tuple(tuple(b) for b in blocks), sum((inverse[tuple(b)] for b in blocks), Fraction(0))))
    return out


def threshold_scaling_suite(problem, c):
    c = Fraction(c)
    if c <= 0:
        raise ValidationError('InvalidWeight', f"scale {c} <= 0", MODULE)
    base = delta_upper(problem)
    scaled = delta_upper(problem.scaled(c))
    report = {
        'delta': base,
        'scale': c,
        'scaled_delta': scaled,
        'scaling_holds': scaled == base / c,
    }

    factors = proportional_factors(problem)
    if factors is not None:
        single = delta_upper(problem.subproblem([0]).with_weights([1]))
        expected = single / sum((t.weight * f for t, f in zip(problem.terms, factors)), Fraction(0))
        report['collapse'] = {'factors': list(factors), 'expected': expected, 'holds': expected == base}

    report['inverse_additivity_holds'] = all(1 / base <= bound for _, bound in partition_bounds(problem))
    return report
