"""
Bary Service - certified barycenter bounds from slice volumes
src/bary/handler.py

Commands: bary-bounds

The payload carries either a "profile" (explicit piecewise g) or a
"polytope" with an "axis" and "e"; optional "line_s" and "scan" blocks run
the blown-up-line closed form and the grid scan.
"""

from bary.bounds import grid_scan, line_s_lower_bound, minimal_w, sandwich
from bary.profile import envelope_h0, profile_from_polytope
from cli.codec import dump_profile, parse_polytope, parse_profile, require
from common.encoding import parse_integer, parse_rational
from common.errors import ToricError, ValidationError
from common.log import get_logger

logger = get_logger(__name__)

MODULE = 'bary'


def handle(event, context=None):
    """Handler principal - dispatches on event['command']"""
    command = event.get('command')
    payload = event.get('payload') or {}
    options = event.get('options') or {}

    logger.info("Command: %s", command)

    try:
        if command == 'bary-bounds':
            body = bary_report(payload, options.get('precision'))
        else:
            raise ValidationError('UnknownCommand', f"bary cannot run {command!r}", MODULE)
        return {'statusCode': 0, 'body': body}

    except ToricError as e:
        logger.warning("%s failed: %s", command, e)
        return {'statusCode': e.status, 'body': e.to_dict()}

    except Exception as e:
        logger.exception("Unexpected error in %s", command)
        return {
            'statusCode': 1,
            'body': {'error': 'InternalError', 'message': str(e), 'module': MODULE},
        }


def _params(payload):
    return {
        key: parse_rational(payload[key], key)
        for key in ('t', 'u', 'w')
        if payload.get(key) not in (None, 'minimal')
    }


def _load_profile(payload):
    """(profile, exact barycenter coordinate or None)."""
    if payload.get('profile') is not None:
        return parse_profile(payload['profile']), None
    polytope = parse_polytope(require(payload, 'polytope', MODULE))
    axis = parse_integer(payload.get('axis', 0), 'axis')
    side = payload.get('side', 'left')
    if side not in ('left', 'right'):
        raise ValidationError('MalformedInput', f"side must be 'left' or 'right', got {side!r}", MODULE)
    profile = profile_from_polytope(polytope, axis, parse_rational(require(payload, 'e', MODULE), 'e'), side=side, **_params(payload))
    return profile, polytope.mass.barycenter[axis]


def bary_report(payload, bits=None):
    bits = None if bits is None else parse_integer(bits, 'precision')
    report = {}

    if payload.get('profile') is not None or payload.get('polytope') is not None:
        profile, exact = _load_profile(payload)
        if payload.get('w') == 'minimal' and profile.u is not None:
            profile = profile.with_params(w=minimal_w(profile, bits))
        results = sandwich(profile, exact=exact, bits=bits)
        report['profile'] = dump_profile(profile)
        report['bounds'] = {name: result.to_dict() for name, result in results.items()}
        if exact is not None:
            report['barycenter'] = exact
        samples = payload.get('samples') or []
        if samples:
            report['envelope'] = [
                {'x': x, 'h0': envelope_h0(profile, x), 'g': profile.g.evaluate(x) if profile.t0 <= x <= profile.g.end else None}
                for x in (parse_rational(s, 'samples') for s in samples)
            ]

    if payload.get('line_s') is not None:
        block = payload['line_s']
        result = line_s_lower_bound(
            parse_integer(require(block, 'n', MODULE), 'n'),
            parse_integer(require(block, 'd', MODULE), 'd'),
            parse_rational(require(block, 'V0', MODULE), 'V0'),
            parse_rational(require(block, 't', MODULE), 't'),
            parse_rational(require(block, 'tau', MODULE), 'tau'),
            bits,
        )
        report['line_s'] = result.to_dict()

    if payload.get('scan') is not None:
        block = payload['scan']
        polytope = parse_polytope(require(block, 'polytope', MODULE))
        axis = parse_integer(block.get('axis', 0), 'axis')
        steps = block.get('steps')
        report['scan'] = grid_scan(
            polytope,
            axis,
            steps=None if steps is None else parse_integer(steps, 'steps'),
            bits=bits,
        )
        report['scan']['barycenter'] = polytope.mass.barycenter[axis]

    if not report:
        raise ValidationError('MissingField', "bary-bounds needs 'profile', 'polytope', 'line_s' or 'scan'", MODULE)
    return report

