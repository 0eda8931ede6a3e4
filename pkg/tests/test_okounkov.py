"""
Okounkov tests
Moment polytopes, S/T-invariants, flag bodies and log discrepancies

Usage:
    python tests/test_okounkov.py
"""

import sys
from fractions import Fraction

from harness import run_module

from common.errors import PreconditionError, ValidationError
from fans import admissible_flag, build_flag_chain, coordinate_flags, make_fan, star_subdivide
from lattice import content, primitive_part
from okounkov import (
    divisor_volume,
    edge_intersection,
    flag_log_discrepancies,
    flag_log_discrepancy,
    flag_s_invariant,
    flag_s_values,
    log_discrepancy,
    make_boundary,
    make_divisor,
    moment_polytope,
    normalize_divisor,
    okounkov_body,
    s_t_invariants,
    s_via_subdivision,
    support_value,
)
from okounkov.handler import handle
from seed_data import (
    THREEFOLD_DIVISOR,
    THREEFOLD_FLAG,
    corpus_fans,
    f_fan,
    p1_fan,
    p112_fan,
    p2_fan,
    random_big_divisor,
    random_complete_flag,
    rng,
    threefold_fan,
)


def _raises(cls, name, func, *args):
    try:
        func(*args)
    except cls as e:
        assert e.name == name, f"expected {name}, got {e.name}"
        return
    raise AssertionError(f"expected {name}")


def test_f1_anticanonical_s_values():
    d = make_divisor(f_fan(1), [1, 1, 1, 1])
    assert s_t_invariants(d, (0, 1))[0] == Fraction(7, 6)
    assert s_t_invariants(d, (1, 0))[0] == Fraction(13, 12)
    assert s_t_invariants(d, (0, -1))[0] == Fraction(5, 6)
    assert divisor_volume(d) == 8


def test_f1_s_and_t_along_the_negative_curve():
    d = make_divisor(f_fan(1), [0, 2, 3, 0])
    s, t = s_t_invariants(d, (0, 1))
    assert s == Fraction(7, 6)
    assert t == 2
    assert d.polytope.mass.volume == 4


def test_support_value_is_linear_on_cones():
    d = make_divisor(f_fan(1), [1, 2, 3, 4])
    assert support_value(d, (1, 1)) == 3
    assert support_value(d, (0, 1)) == 2
    assert support_value(d, (-1, 2)) == 5
    _raises(PreconditionError, 'OutsideSupport', support_value, make_divisor(_quadrant(), [0, 0]), (-1, 0))


def _quadrant():
    return make_fan(2, [(1, 0), (0, 1)], [(0, 1)])


def test_not_big():
    d = make_divisor(f_fan(1), [1, 0, 0, 0])
    assert not d.is_big
    _raises(PreconditionError, 'NotBig', s_t_invariants, d, (0, 1))
    assert not make_divisor(f_fan(1), [0, 0, 0, 0]).is_big


def test_malformed_divisors():
    _raises(ValidationError, 'MalformedInput', make_divisor, f_fan(1), [1, 1])
    _raises(ValidationError, 'InvalidBoundary', make_boundary, f_fan(1), [0, 1, 0, 0])
    _raises(ValidationError, 'InvalidBoundary', make_boundary, f_fan(1), [0, Fraction(-1, 2), 0, 0])
    _raises(PreconditionError, 'NotPrimitive', s_t_invariants, make_divisor(f_fan(1), [1, 1, 1, 1]), (2, 0))


def test_normalize_divisor():
    d = make_divisor(f_fan(1), [1, 1, 1, 1])
    shifted = normalize_divisor(d, (0, 1))
    assert shifted.coefficients == (0, 0, 1, 2)
    assert s_t_invariants(shifted, (0, 1)) == s_t_invariants(d, (0, 1))
    _raises(PreconditionError, 'ConeNotFullDim', normalize_divisor, d, (0, 2))


def test_edge_intersections():
    d = make_divisor(f_fan(1), [1, 1, 1, 1])
    assert [edge_intersection(d, i) for i in range(4)] == [2, 1, 2, 3]
    _raises(PreconditionError, 'NotSurface', edge_intersection, make_divisor(threefold_fan(), THREEFOLD_DIVISOR), 0)


def test_threefold_flag_values():
    d = make_divisor(threefold_fan(), THREEFOLD_DIVISOR)
    flag = build_flag_chain(threefold_fan(), THREEFOLD_FLAG)
    assert flag_s_values(d, flag) == (Fraction(59, 18), Fraction(1, 2), Fraction(4, 27))
    rays = [s_t_invariants(d, flag.table[(1, k)])[0] for k in (1, 2, 3)]
    assert rays == [Fraction(7, 9), Fraction(1, 2), Fraction(4, 9)]
    assert flag_log_discrepancies(make_boundary(threefold_fan()), flag) == (5, 1, Fraction(1, 3))


def test_moment_polytope_and_flag_levels():
    assert set(moment_polytope(make_divisor(p1_fan(), [0, 1])).vertices) == {(0,), (1,)}
    d = make_divisor(threefold_fan(), THREEFOLD_DIVISOR)
    assert moment_polytope(d).mass.volume == Fraction(3, 2)
    flag = build_flag_chain(threefold_fan(), THREEFOLD_FLAG)
    assert [flag_s_invariant(d, flag, j) for j in (1, 2, 3)] == [Fraction(59, 18), Fraction(1, 2), Fraction(4, 27)]


def test_threefold_body():
    d = make_divisor(threefold_fan(), THREEFOLD_DIVISOR)
    result = okounkov_body(d, build_flag_chain(threefold_fan(), THREEFOLD_FLAG))
    assert result.volume == Fraction(3, 2)
    assert len(result.body.vertices) == 8
    assert d.polytope.mass.volume == Fraction(3, 2)


def test_flag_values_ignore_coordinates():
    shear = ((1, 1, 0), (0, 1, 0), (2, 0, 1))
    moved = [tuple(sum(a * x for a, x in zip(row, v)) for row in shear) for v in THREEFOLD_FLAG]
    rays = [tuple(sum(a * x for a, x in zip(row, r.coords)) for row in shear) for r in threefold_fan().rays]
    fan = make_fan(3, rays, threefold_fan().max_cones)
    d = make_divisor(fan, THREEFOLD_DIVISOR)
    assert flag_s_values(d, build_flag_chain(fan, moved)) == (Fraction(59, 18), Fraction(1, 2), Fraction(4, 27))


def test_unimodular_flag_s_matches_ray_s():
    d = make_divisor(f_fan(1), [1, 1, 1, 1])
    for flag in coordinate_flags(f_fan(1)):
        rays = tuple(s_t_invariants(d, flag.table[(1, k)])[0] for k in (1, 2))
        assert flag_s_values(d, flag) == rays


def test_p112_log_discrepancies():
    boundary = make_boundary(p112_fan())
    assert log_discrepancy(boundary, (1, 1)) == 1
    assert log_discrepancy(boundary, (0, 1)) == 2
    flag = admissible_flag(p112_fan(), [(1, 0), (1, 2)])
    assert flag_log_discrepancies(boundary, flag) == (1, Fraction(1, 2))
    half = make_boundary(p112_fan(), [Fraction(1, 2), 0, 0])
    assert flag_log_discrepancy(half, flag, 1) == Fraction(1, 2)
    _raises(ValidationError, 'MalformedInput', flag_log_discrepancy, boundary, flag, 0)
    _raises(PreconditionError, 'IncompleteFlag', flag_log_discrepancy, boundary, flag, 3)


def test_incomplete_flag_is_rejected():
    d = make_divisor(threefold_fan(), THREEFOLD_DIVISOR)
    partial = build_flag_chain(threefold_fan(), [(1, 1, 1)])
    _raises(PreconditionError, 'IncompleteFlag', okounkov_body, d, partial)
    _raises(PreconditionError, 'IncompleteFlag', flag_s_values, d, partial)


def _identity_fans():
    return corpus_fans() + [f_fan(3), star_subdivide(p2_fan(), (1, 1))]


def test_volume_identity_over_corpus():
    r = rng(5)
    checked = 0
    for fan in _identity_fans():
        for _ in range(3):
            d = random_big_divisor(fan, r)
            flag = random_complete_flag(fan, r)
            body = okounkov_body(d, flag)
            assert body.volume == d.polytope.mass.volume
            assert flag_s_values(d, flag) == body.barycenter
            checked += 1
    assert checked >= 20


def _random_primitive(r, rank):
    while True:
        v = [r.randint(-3, 3) for _ in range(rank)]
        if any(v):
            return primitive_part(v)


def test_s_lies_between_t_fractions():
    r = rng(26)
    for fan in _identity_fans():
        n = fan.rank
        d = random_big_divisor(fan, r)
        for v in list(fan.rays) + [_random_primitive(r, n) for _ in range(4)]:
            s, t = s_t_invariants(d, v)
            assert t / (1 + n) <= s <= t, f"{list(v.coords)}: S={s} T={t}"


def test_volume_times_s_grows_with_the_divisor():
    r = rng(27)
    for fan in _identity_fans():
        d = random_big_divisor(fan, r)
        bigger = make_divisor(fan, [a + Fraction(r.randint(0, 2), 2) for a in d.coefficients])
        for v in list(fan.rays) + [_random_primitive(r, fan.rank) for _ in range(3)]:
            small = divisor_volume(d) * s_t_invariants(d, v)[0]
            large = divisor_volume(bigger) * s_t_invariants(bigger, v)[0]
            assert small <= large


def test_s_is_linear_on_each_cone():
    r = rng(28)
    for fan in _identity_fans():
        d = random_big_divisor(fan, r)
        for cone in fan.full_dimensional_cones():
            gens = [fan.rays[i] for i in cone]
            weights = [r.randint(1, 3) for _ in gens]
            u = [sum(w * g[k] for w, g in zip(weights, gens)) for k in range(fan.rank)]
            k = content(u)
            total = sum((w * s_t_invariants(d, g)[0] for w, g in zip(weights, gens)), Fraction(0))
            assert k * s_t_invariants(d, primitive_part(u))[0] == total


def test_s_invariant_scaling_and_translation():
    r = rng(6)
    for fan in corpus_fans():
        d = random_big_divisor(fan, r)
        doubled = d.scaled(2)
        shifted = normalize_divisor(d, fan.full_dimensional_cones()[0])
        for ray in fan.rays:
            s, t = s_t_invariants(d, ray)
            assert s_t_invariants(doubled, ray) == (2 * s, 2 * t)
            assert s_t_invariants(shifted, ray) == (s, t)
            assert 0 <= s <= t


def test_s_via_subdivision_matches():
    r = rng(7)
    for fan in corpus_fans():
        d = random_big_divisor(fan, r)
        for _ in range(3):
            v = [r.randint(-3, 3) for _ in range(fan.rank)]
            if not any(v):
                continue
            v = primitive_part(v)
            assert s_via_subdivision(d, v) == s_t_invariants(d, v)[0]


def test_handler_status_codes():
    fan = {'rank': 2, 'rays': [[1, 0], [0, 1], [-1, 1], [0, -1]], 'cones': [[0, 1], [1, 2], [2, 3], [0, 3]]}
    ok = handle({'command': 's-invariant', 'payload': {'fan': fan, 'divisor': [1, 1, 1, 1], 'vectors': [[0, 1]]}})
    assert ok['statusCode'] == 0
    assert ok['body']['values'][0]['S'] == Fraction(7, 6)
    assert ok['body']['values'][0]['S_subdivision'] == Fraction(7, 6)

    not_big = handle({'command': 's-invariant', 'payload': {'fan': fan, 'divisor': [1, 0, 0, 0]}})
    assert not_big['statusCode'] == 3
    assert not_big['body']['error'] == 'NotBig'

    missing = handle({'command': 'log-discrepancy', 'payload': {'fan': fan}})
    assert missing['statusCode'] == 2
    assert missing['body']['error'] == 'MissingField'

    unknown = handle({'command': 'nope', 'payload': {}})
    assert unknown['statusCode'] == 2


def test_s_invariant_defaults_to_fan_rays():
    fan = {'rank': 2, 'rays': [[1, 0], [0, 1], [-1, 1], [0, -1]], 'cones': [[0, 1], [1, 2], [2, 3], [0, 3]]}
    for payload in ({'fan': fan, 'divisor': [1, 1, 1, 1]}, {'fan': fan, 'divisor': [1, 1, 1, 1], 'vectors': []}):
        result = handle({'command': 's-invariant', 'payload': payload})
        assert result['statusCode'] == 0, result['body']
        rows = result['body']['values']
        assert [row['v'] for row in rows] == fan['rays']
        for row in rows:
            assert row['S'] == row['S_subdivision']
            assert row['S'] <= row['T']
    assert rows[1]['S'] == Fraction(7, 6)


def main():
    return run_module('OKOUNKOV', globals())


if __name__ == '__main__':
    sys.exit(main())
