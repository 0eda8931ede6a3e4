"""
JSON job payloads <-> domain objects
src/cli/codec.py

Every parse_* validates shape before anything is computed; every dump_*
produces the input form again, with rationals as "p/q" strings.
"""

from bary.profile import make_profile
from common.encoding import format_rational, parse_integer, parse_rational
from common.errors import ValidationError
from fans.fan import make_fan
from fans.flags import build_flag_chain
from lattice.core import LatticeVector
from okounkov.divisors import make_boundary, make_divisor
from polytopes import Halfspace, PiecewisePolynomial, polytope_from_vertices, vertices_from_halfspaces
from thresholds.problem import make_problem

MODULE = 'cli'


def require(payload, key, module=MODULE):
    if not isinstance(payload, dict):
        raise ValidationError('MalformedInput', f"expected an object holding {key!r}", module)
    if payload.get(key) is None:
        raise ValidationError('MissingField', f"missing required field {key!r}", module)
    return payload[key]


def _list(value, field):
    if not isinstance(value, list):
        raise ValidationError('MalformedInput', f"{field}: expected a list", MODULE)
    return value


def parse_vector(value, field='vector'):
    coords = tuple(parse_integer(x, field) for x in _list(value, field))
    if not coords:
        raise ValidationError('MalformedInput', f"{field}: empty vector", MODULE)
    return LatticeVector(coords)


def parse_rationals(value, field):
    return [parse_rational(x, field) for x in _list(value, field)]


# ---------------------------------------------------------------------------
# Fans, divisors, flags
# ---------------------------------------------------------------------------

def parse_fan(data):
    rank = parse_integer(require(data, 'rank'), 'rank')
    if rank < 1:
        raise ValidationError('MalformedInput', f"rank must be positive, got {rank}", MODULE)
    rays = [parse_vector(r, 'rays').coords for r in _list(require(data, 'rays'), 'rays')]
    cones = [[parse_integer(i, 'cones') for i in _list(c, 'cones')] for c in _list(require(data, 'cones'), 'cones')]
    return make_fan(rank, rays, cones)


def dump_fan(fan):
    return {
        'rank': fan.rank,
        'rays': [list(r.coords) for r in fan.rays],
        'cones': [list(c) for c in fan.max_cones],
    }


def parse_divisor(fan, data):
    coefficients = data.get('coefficients') if isinstance(data, dict) else data
    return make_divisor(fan, parse_rationals(coefficients, 'divisor'))


def dump_divisor(divisor):
    return {'coefficients': [format_rational(a) for a in divisor.coefficients]}


def parse_boundary(fan, data):
    if data is None:
        return make_boundary(fan)
    coefficients = data.get('coefficients') if isinstance(data, dict) else data
    return make_boundary(fan, parse_rationals(coefficients, 'boundary'))


def dump_boundary(boundary):
    return {'coefficients': [format_rational(b) for b in boundary.coefficients]}


def parse_flag(fan, data):
    if isinstance(data, list):
        data = {'vectors': data}
    coordinates = data.get('coordinates', 'lifted')
    if coordinates not in ('lifted', 'quotient'):
        raise ValidationError('MalformedInput', f"coordinates must be 'lifted' or 'quotient', got {coordinates!r}", MODULE)
    vectors = [parse_vector(v, 'flag') for v in _list(require(data, 'vectors'), 'vectors')]
    return build_flag_chain(fan, vectors, lifted=coordinates == 'lifted')


def dump_flag(flag):
    return {
        'vectors': [list(v.coords) for v in flag.inputs],
        'coordinates': 'lifted' if flag.lifted else 'quotient',
    }


def describe_flag(flag):
    """Input form plus the derived chain data."""
    out = dump_flag(flag)
    out['quotient_vectors'] = [list(v.coords) for v in flag.vectors]
    if not flag.complete:
        out['complete'] = False
        return out
    n = flag.rank
    out.update({
        'complete': True,
        'admissible': flag.admissible,
        'tau0_cone': list(flag.tau0_cone),
        'multiplicities': [[flag.multiplicities[(i, k)] for k in range(i, n + 1)] for i in range(1, n + 1)],
        'c_prime': [[flag.normalized[(j, k)] for k in range(j, n + 1)] for j in range(1, n + 1)],
        'ray_table': [[list(flag.table[(j, k)].coords) for k in range(j, n + 1)] for j in range(1, n + 1)],
    })
    if flag.l_values is not None:
        out['l_values'] = list(flag.l_values)
    return out


# ---------------------------------------------------------------------------
# Coupled problems
# ---------------------------------------------------------------------------

def parse_terms(fan, data):
    terms = []
    for i, term in enumerate(_list(data, 'terms')):
        weight = parse_rational(require(term, 'weight'), f"terms[{i}].weight")
        terms.append((weight, parse_divisor(fan, require(term, 'divisor'))))
    return terms


def parse_problem(data, candidates=None):
    """candidates overrides data['candidates'] (the CLI --candidates option)."""
    fan = parse_fan(require(data, 'fan'))
    terms = parse_terms(fan, require(data, 'terms'))
    boundary = parse_boundary(fan, data.get('boundary'))
    raw = candidates if candidates is not None else data.get('candidates')
    vectors = None if raw is None else [parse_vector(v, 'candidates') for v in _list(raw, 'candidates')]
    flags = None
    if 'flags' in data:
        flags = [parse_flag(fan, f) for f in _list(data['flags'], 'flags')]
    return make_problem(fan, terms, boundary=boundary, candidates=vectors, flags=flags)


def dump_problem(problem):
    return {
        'fan': dump_fan(problem.fan),
        'terms': [
            {'weight': format_rational(t.weight), 'divisor': dump_divisor(t.divisor)}
            for t in problem.terms
        ],
        'boundary': dump_boundary(problem.boundary),
        'candidates': [list(v.coords) for v in problem.candidates],
        'flags': [dump_flag(f) for f in problem.flags],
    }


# ---------------------------------------------------------------------------
# Polytopes and profiles
# ---------------------------------------------------------------------------

def parse_polytope(data):
    if not isinstance(data, dict):
        raise ValidationError('MalformedInput', 'polytope: expected an object', MODULE)
    if data.get('vertices') is not None:
        points = [parse_rationals(v, 'vertices') for v in _list(data['vertices'], 'vertices')]
        return polytope_from_vertices(points)
    rows = _list(require(data, 'halfspaces'), 'halfspaces')
    halfspaces = [
        Halfspace.make(parse_rationals(require(h, 'normal'), 'normal'), parse_rational(require(h, 'offset'), 'offset'))
        for h in rows
    ]
    dim = data.get('dim')
    return vertices_from_halfspaces(halfspaces, None if dim is None else parse_integer(dim, 'dim'))


def dump_polytope(polytope):
    return {'vertices': [[format_rational(x) for x in v] for v in polytope.vertices]}


def parse_piecewise(data):
    pieces = _list(require(data, 'pieces'), 'pieces')
    if not pieces:
        raise ValidationError('MalformedInput', 'g needs at least one piece', MODULE)
    breakpoints = [parse_rational(require(pieces[0], 'from'), 'from')]
    coefficient_lists = []
    for piece in pieces:
        start = parse_rational(require(piece, 'from'), 'from')
        end = parse_rational(require(piece, 'to'), 'to')
        if start != breakpoints[-1] or end <= start:
            raise ValidationError('MalformedInput', f"piece [{start}, {end}] does not continue the profile", MODULE)
        breakpoints.append(end)
        coefficient_lists.append(parse_rationals(require(piece, 'coefficients'), 'coefficients'))
    return PiecewisePolynomial.from_pieces(breakpoints, coefficient_lists)


PROFILE_PARAMS = ('t', 'u', 'w')


def parse_profile(data):
    n = parse_integer(require(data, 'n'), 'n')
    g = parse_piecewise(require(data, 'g'))
    t0 = parse_rational(data['t0'], 't0') if data.get('t0') is not None else g.start
    if t0 != g.start:
        raise ValidationError('MalformedInput', f"t0={t0} differs from the start of g", MODULE)
    optional = {
        key: parse_rational(data[key], key)
        for key in ('V', 't1', 'v') + PROFILE_PARAMS
        if data.get(key) is not None
    }
    side = data.get('side', 'left')
    if side not in ('left', 'right'):
        raise ValidationError('MalformedInput', f"side must be 'left' or 'right', got {side!r}", MODULE)
    return make_profile(n, g, parse_rational(require(data, 'e'), 'e'), side=side, **optional)


def dump_profile(profile):
    out = {
        'n': profile.n,
        't0': format_rational(profile.t0),
        't1': format_rational(profile.t1),
        'V': format_rational(profile.V),
        'g': profile.g.to_dict(),
        'e': format_rational(profile.e),
        'v': format_rational(profile.v),
    }
    for key in PROFILE_PARAMS:
        value = getattr(profile, key)
        if value is not None:
            out[key] = format_rational(value)
    return out
