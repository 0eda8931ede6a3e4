"""
Okounkov Service - bodies, S/T-invariants, log discrepancies
src/okounkov/handler.py

Commands: okounkov-body, s-invariant, flag-s, log-discrepancy
"""

from fractions import Fraction

from cli.codec import describe_flag, parse_boundary, parse_divisor, parse_fan, parse_flag, parse_vector, require
from common.errors import ToricError, ValidationError
from common.log import get_logger
from okounkov.divisors import divisor_volume, normalize_divisor
from okounkov.invariants import (
    flag_log_discrepancies,
    flag_s_values,
    log_discrepancy,
    okounkov_body,
    s_t_invariants,
    s_via_subdivision,
)

logger = get_logger(__name__)

MODULE = 'okounkov'


def handle(event, context=None):
    """Handler principal - dispatches on event['command']"""
    command = event.get('command')
    payload = event.get('payload') or {}

    logger.info("Command: %s", command)

    try:
        if command == 'okounkov-body':
            body = body_report(payload)
        elif command == 's-invariant':
            body = s_invariant_report(payload)
        elif command == 'flag-s':
            body = flag_s_report(payload)
        elif command == 'log-discrepancy':
            body = log_discrepancy_report(payload)
        else:
            raise ValidationError('UnknownCommand', f"okounkov cannot run {command!r}", MODULE)
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


def body_report(payload):
    fan = parse_fan(require(payload, 'fan', MODULE))
    divisor = parse_divisor(fan, require(payload, 'divisor', MODULE))
    flag = parse_flag(fan, require(payload, 'flag', MODULE))
    result = okounkov_body(divisor, flag)
    mass = result.body.mass
    return {
        'flag': describe_flag(flag),
        'normalized_divisor': list(result.divisor.coefficients),
        'transform': [list(row) for row in result.transform],
        'vertices': [list(v) for v in result.body.vertices],
        'volume': mass.volume,
        'moment_volume': divisor.polytope.mass.volume,
        'barycenter': list(mass.barycenter),
    }


def s_invariant_report(payload):
    fan = parse_fan(require(payload, 'fan', MODULE))
    divisor = parse_divisor(fan, require(payload, 'divisor', MODULE))
    raw = payload.get('vectors')
    vectors = [parse_vector(v, 'vectors') for v in raw] if raw else list(fan.rays)

    rows = []
    for v in vectors:
        s, t = s_t_invariants(divisor, v)
        rows.append({
            'v': list(v.coords),
            'S': s,
            'T': t,
            'S_subdivision': s_via_subdivision(divisor, v),
        })
    return {
        'volume': divisor_volume(divisor),
        'moment_volume': divisor.polytope.mass.volume,
        'values': rows,
    }


def flag_s_report(payload):
    fan = parse_fan(require(payload, 'fan', MODULE))
    divisor = parse_divisor(fan, require(payload, 'divisor', MODULE))
    flag = parse_flag(fan, require(payload, 'flag', MODULE))
    boundary = parse_boundary(fan, payload.get('boundary'))

    s_values = flag_s_values(divisor, flag)
    a_values = flag_log_discrepancies(boundary, flag)
    ray_values = [s_t_invariants(divisor, flag.table[(1, k)])[0] for k in range(1, flag.rank + 1)]
    return {
        'flag': describe_flag(flag),
        'normalized_divisor': list(normalize_divisor(divisor, flag.tau0_cone).coefficients),
        'ray_S': ray_values,
        'S': list(s_values),
        'A': list(a_values),
        'ratios': [a / s if s else None for a, s in zip(a_values, s_values)],
    }


def log_discrepancy_report(payload):
    fan = parse_fan(require(payload, 'fan', MODULE))
    boundary = parse_boundary(fan, payload.get('boundary'))
    report = {}
    if payload.get('vectors'):
        report['values'] = [
            {'v': list(v.coords), 'A': log_discrepancy(boundary, v)}
            for v in (parse_vector(x, 'vectors') for x in payload['vectors'])
        ]
    if payload.get('flag'):
        flag = parse_flag(fan, payload['flag'])
        report['flag'] = describe_flag(flag)
        report['A'] = list(flag_log_discrepancies(boundary, flag))
    if not report:
        raise ValidationError('MissingField', "log-discrepancy needs 'vectors' or 'flag'", MODULE)
    report['boundary'] = [Fraction(b) for b in boundary.coefficients]
    return report
