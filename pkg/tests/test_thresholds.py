"""
Threshold tests
Coupled delta/alpha upper bounds, chain lower bounds and closed-form oracles

Usage:
    python tests/test_thresholds.py
"""

import sys
from fractions import Fraction

from harness import run_module

from common.errors import PreconditionError, ValidationError
from fans import build_flag_chain
from okounkov import make_boundary, make_divisor
from seed_data import corpus_fans, f_fan, p112_fan, p1xp1_fan, p2_fan, random_big_divisor, rng, surface_fans, threefold_fan
from thresholds import (
    az_flag_bound,
    coupled_thresholds,
    curve_delta,
    curve_problem,
    delta_upper,
    hirzebruch_divisor,
    hirzebruch_fan,
    hirzebruch_oracle,
    make_problem,
    partition_bounds,
    product_check,
    threshold_scaling_suite,
)
from thresholds.handler import handle


def _raises(cls, name, func, *args, **kwargs):
    try:
        func(*args, **kwargs)
    except cls as e:
        assert e.name == name, f"expected {name}, got {e.name}"
        return
    raise AssertionError(f"expected {name}")


HIRZEBRUCH_GRID = [(1, 1), (1, 3), (2, 1), (Fraction(1, 2), 2), (3, 5)]


def _anticanonical(fan):
    return make_divisor(fan, [1] * len(fan.rays))


def test_f1_delta_is_certified():
    fan = f_fan(1)
    report = coupled_thresholds(make_problem(fan, [(1, _anticanonical(fan))]))
    assert report.delta_upper == Fraction(6, 7)
    assert report.delta_lower == Fraction(6, 7)
    assert report.certified
    assert report.delta_minimizers == [(0, 1)]
    assert report.alpha_upper == Fraction(1, 3)
    assert sorted(report.alpha_minimizers) == [(-1, 1), (1, 0)]


def test_p2_and_p1xp1_are_k_semistable():
    for fan in (p2_fan(), p1xp1_fan()):
        report = coupled_thresholds(make_problem(fan, [(1, _anticanonical(fan))]))
        assert report.delta_upper == 1
        assert report.certified


def test_threefold_anticanonical_chain_bound():
    fan = threefold_fan()
    report = coupled_thresholds(make_problem(fan, [(1, _anticanonical(fan))]))
    assert report.delta_lower is not None
    assert report.delta_lower <= report.delta_upper


def test_non_coordinate_flag_bound():
    fan = f_fan(1)
    problem = make_problem(fan, [(1, _anticanonical(fan))], flags=[])
    flag = build_flag_chain(fan, [(1, 1), (0, 1)])
    assert az_flag_bound(problem, flag) == Fraction(6, 7)
    assert problem.flags == ()
    report = coupled_thresholds(problem)
    assert report.delta_lower is None and not report.certified


def test_hirzebruch_grid():
    fan = hirzebruch_fan(1)
    oracle = hirzebruch_oracle(1, [(1, 2, 3)])
    assert oracle.p == (Fraction(7, 6),) and oracle.q == (Fraction(13, 12),)
    assert oracle.delta == Fraction(6, 7)
    assert hirzebruch_oracle(0, [(1, 2, 4)]).delta == Fraction(1, 2)

    mixed = hirzebruch_oracle(2, [(1, 1, 3), (Fraction(1, 2), 2, 1)])
    assert mixed.p == (Fraction(7, 12), Fraction(11, 6))
    assert mixed.q == (Fraction(13, 12), Fraction(1, 3))
    assert mixed.delta == Fraction(2, 3)

    for m in range(4):
        fan = hirzebruch_fan(m)
        for a, b in HIRZEBRUCH_GRID:
            oracle = hirzebruch_oracle(m, [(1, a, b)])
            problem = make_problem(fan, [(1, hirzebruch_divisor(fan, a, b))], flags=[])
            assert delta_upper(problem) == oracle.delta


def test_hirzebruch_grid_is_certified():
    for m in (1, 2, 3):
        fan = hirzebruch_fan(m)
        for a, b in HIRZEBRUCH_GRID:
            report = coupled_thresholds(make_problem(fan, [(1, hirzebruch_divisor(fan, a, b))]))
            assert report.delta_upper == hirzebruch_oracle(m, [(1, a, b)]).delta
            assert report.certified, f"F_{m} with a={a}, b={b}: lower {report.delta_lower}"
            assert len(report.flags) == 8


def test_hirzebruch_errors():
    _raises(ValidationError, 'MalformedInput', hirzebruch_fan, -1)
    _raises(ValidationError, 'InvalidWeight', hirzebruch_oracle, 1, [(0, 1, 1)])
    _raises(PreconditionError, 'NotBig', hirzebruch_oracle, 1, [(1, 0, 1)])


def test_curve_delta():
    assert curve_delta(Fraction(1, 2), [(1, 2)]) == Fraction(1, 2)
    assert curve_delta(0, [(1, 1), (1, 1)]) == 1
    report = coupled_thresholds(curve_problem(Fraction(1, 2), [(1, 2)]))
    assert report.delta_upper == Fraction(1, 2)
    assert report.certified
    _raises(ValidationError, 'InvalidBoundary', curve_delta, 1, [(1, 2)])
    _raises(PreconditionError, 'NotBig', curve_delta, 0, [(1, 0)])


def test_product_of_curves():
    result = product_check(curve_problem(0, [(1, 2)]), curve_problem(0, [(1, 4)]))
    assert result.factors == (1, Fraction(1, 2))
    assert result.lhs == Fraction(1, 2)
    assert result.equal
    _raises(ValidationError, 'MismatchedTerms', product_check, curve_problem(0, [(1, 2)]), curve_problem(0, [(2, 2)]))


def test_products_with_surface_factors():
    r = rng(21)
    factors = [
        curve_problem(0, [(1, 2)]),
        curve_problem(Fraction(1, 2), [(1, 3)]),
        make_problem(p2_fan(), [(1, _anticanonical(p2_fan()))], flags=[]),
        make_problem(f_fan(1), [(1, _anticanonical(f_fan(1)))], flags=[]),
        make_problem(p1xp1_fan(), [(1, random_big_divisor(p1xp1_fan(), r, low=1))], flags=[]),
    ]
    pairs = [(i, j) for i in range(len(factors)) for j in range(i, len(factors)) if factors[i].fan.rank + factors[j].fan.rank <= 4]
    assert len(pairs) >= 10
    surfaces = 0
    for i, j in pairs:
        result = product_check(factors[i], factors[j])
        assert result.equal, f"factors {i}, {j}: {result.lhs} != {result.rhs}"
        assert result.factors == (delta_upper(factors[i]), delta_upper(factors[j]))
        surfaces += factors[i].fan.rank == 2 or factors[j].fan.rank == 2
    assert surfaces >= 6


def _random_problem(r, fan, k):
    terms = [(Fraction(r.randint(1, 3), r.randint(1, 2)), random_big_divisor(fan, r)) for _ in range(k)]
    return make_problem(fan, terms, flags=[])


def test_raising_a_weight_never_raises_delta():
    r = rng(22)
    for fan in surface_fans():
        problem = _random_problem(r, fan, 2)
        base = delta_upper(problem)
        for i, weight in enumerate(problem.weights):
            previous = None
            for k in (1, 2, 4, 8, 16, 64):
                eps = Fraction(1, k)
                raised = list(problem.weights)
                raised[i] += eps
                value = delta_upper(problem.with_weights(raised))
                assert base / (1 + eps / weight) <= value <= base
                if previous is not None:
                    assert previous <= value
                previous = value
            assert base - previous <= base / (64 * weight)


def test_alpha_delta_sandwich():
    r = rng(23)
    for fan in corpus_fans():
        for k in (1, 2):
            report = coupled_thresholds(_random_problem(r, fan, k))
            assert report.alpha_upper <= report.delta_upper <= (fan.rank + 1) * report.alpha_upper
            for row in report.candidates:
                assert row.alpha_ratio <= row.delta_ratio <= (fan.rank + 1) * row.alpha_ratio


def test_inverse_additivity_over_every_partition():
    r = rng(24)
    for fan in (f_fan(1), p112_fan(), threefold_fan()):
        for k, count in ((2, 1), (3, 4), (4, 14)):
            problem = _random_problem(r, fan, k)
            base = delta_upper(problem)
            bounds = partition_bounds(problem)
            assert len(bounds) == count
            assert all(1 / base <= bound for _, bound in bounds)
            assert threshold_scaling_suite(problem, 2)['inverse_additivity_holds']


def test_inverse_additivity_is_tight_for_one_class():
    fan = f_fan(2)
    d = random_big_divisor(fan, rng(25))
    problem = make_problem(fan, [(1, d), (Fraction(1, 2), d), (3, d)], flags=[])
    base = delta_upper(problem)
    assert all(bound == 1 / base for _, bound in partition_bounds(problem))


def test_scaling_suite():
    fan = f_fan(1)
    k = _anticanonical(fan)
    suite = threshold_scaling_suite(make_problem(fan, [(1, k)], flags=[]), 2)
    assert suite['scaled_delta'] == Fraction(3, 7)
    assert suite['scaling_holds']
    assert suite['collapse']['holds']
    assert suite['inverse_additivity_holds']

    coupled = make_problem(fan, [(1, k), (Fraction(1, 2), k.scaled(2))], flags=[])
    suite = threshold_scaling_suite(coupled, 3)
    assert suite['delta'] == Fraction(3, 7)
    assert suite['collapse']['factors'] == [1, 2]
    assert suite['collapse']['holds']
    assert suite['inverse_additivity_holds']


def test_inverse_additivity_on_random_terms():
    r = rng(8)
    fan = f_fan(2)
    for _ in range(3):
        terms = [(Fraction(r.randint(1, 3)), random_big_divisor(fan, r)) for _ in range(2)]
        suite = threshold_scaling_suite(make_problem(fan, terms, flags=[]), Fraction(1, 2))
        assert suite['scaling_holds']
        assert suite['inverse_additivity_holds']


def test_problem_validation():
    fan = f_fan(1)
    k = _anticanonical(fan)
    _raises(ValidationError, 'MalformedInput', make_problem, fan, [])
    _raises(ValidationError, 'InvalidWeight', make_problem, fan, [(0, k)])
    _raises(ValidationError, 'MismatchedTerms', make_problem, fan, [(1, _anticanonical(p2_fan()))])
    _raises(PreconditionError, 'NotBig', make_problem, fan, [(1, make_divisor(fan, [1, 0, 0, 0]))])
    _raises(ValidationError, 'TooLarge', make_problem, fan, [(1, k)] * 9)
    _raises(ValidationError, 'RankMismatch', make_problem, fan, [(1, k)], candidates=[(1, 0, 0)], flags=[])
    _raises(PreconditionError, 'NotPrimitive', make_problem, fan, [(1, k)], candidates=[(2, 2)], flags=[])


def test_boundary_lowers_delta():
    fan = f_fan(1)
    k = _anticanonical(fan)
    boundary = make_boundary(fan, [0, Fraction(1, 2), 0, 0])
    problem = make_problem(fan, [(1, k)], boundary=boundary, candidates=[(0, 1)], flags=[])
    assert delta_upper(problem) == Fraction(3, 7)


def test_handler_reports():
    fan = {'rank': 2, 'rays': [[1, 0], [0, 1], [-1, 1], [0, -1]], 'cones': [[0, 1], [1, 2], [2, 3], [0, 3]]}
    delta = handle({'command': 'delta', 'payload': {'fan': fan, 'terms': [{'weight': 1, 'divisor': [1, 1, 1, 1]}]}})
    assert delta['statusCode'] == 0
    assert delta['body']['delta_upper'] == Fraction(6, 7)
    assert len(delta['body']['flags']) == 8

    alpha = handle({'command': 'alpha', 'payload': {'fan': fan, 'terms': [{'weight': 1, 'divisor': [1, 1, 1, 1]}]}})
    assert alpha['body']['alpha_upper'] == Fraction(1, 3)

    az = handle({'command': 'az-bound', 'payload': {
        'fan': fan, 'terms': [{'weight': 1, 'divisor': [1, 1, 1, 1]}], 'flags': [], 'flag': [[1, 1], [0, 1]],
    }})
    assert az['statusCode'] == 0
    assert az['body']['bound'] == Fraction(6, 7)

    hirzebruch = handle({'command': 'hirzebruch', 'payload': {'m': 2, 'terms': [
        {'weight': 1, 'a': 1, 'b': 3}, {'weight': '1/2', 'a': 2, 'b': 1},
    ]}})
    assert hirzebruch['statusCode'] == 0
    assert hirzebruch['body']['delta'] == Fraction(2, 3)

    product = handle({'command': 'product-check', 'payload': {'factors': [fan]}})
    assert product['statusCode'] == 2


def main():
    return run_module('THRESHOLDS', globals())


if __name__ == '__main__':
    sys.exit(main())
