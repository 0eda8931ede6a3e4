"""
Thresholds Service - coupled delta/alpha, chain bounds, Zariski, oracles
src/thresholds/handler.py

Commands: delta, alpha, az-bound, zariski-surface, product-check,
hirzebruch, curve-delta
"""

from cli.codec import describe_flag, parse_divisor, parse_fan, parse_flag, parse_problem, require
from common.encoding import parse_integer, parse_rational
from common.errors import ConsistencyError, ToricError, ValidationError
from common.log import get_logger
from okounkov.invariants import flag_s_values
from thresholds.engine import az_flag_row, coupled_thresholds
from thresholds.oracles import (
    curve_delta,
    curve_problem,
    hirzebruch_divisor,
    hirzebruch_fan,
    hirzebruch_oracle,
    product_check,
    threshold_scaling_suite,
)
from thresholds.problem import make_problem
from thresholds.zariski import s_via_surface_zariski, zariski_surface

logger = get_logger(__name__)

MODULE = 'thresholds'


def handle(event, context=None):
    """Handler principal - dispatches on event['command']"""
    command = event.get('command')
    payload = event.get('payload') or {}
    options = event.get('options') or {}

    logger.info("Command: %s", command)

    try:
        if command == 'delta':
            body = delta_report(payload, options.get('candidates'))
        elif command == 'alpha':
            body = alpha_report(payload, options.get('candidates'))
        elif command == 'az-bound':
            body = az_report(payload, options.get('candidates'))
        elif command == 'zariski-surface':
            body = zariski_report(payload)
        elif command == 'product-check':
            body = product_report(payload)
        elif command == 'hirzebruch':
            body = hirzebruch_report(payload)
        elif command == 'curve-delta':
            body = curve_report(payload)
        else:
            raise ValidationError('UnknownCommand', f"thresholds cannot run {command!r}", MODULE)
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


def _candidate_table(report):
    return [
        {
            'v': list(row.v),
            'A': row.A,
            'S': list(row.S),
            'T': list(row.T),
            'delta_ratio': row.delta_ratio,
            'alpha_ratio': row.alpha_ratio,
        }
        for row in report.candidates
    ]


def _flag_rows(rows):
    return [
        {
            'flag': describe_flag(row.flag),
            'A': list(row.A),
            'S': list(row.S),
            'ratios': list(row.ratios),
            'bound': row.bound,
        }
        for row in rows
    ]


def delta_report(payload, candidates=None):
    problem = parse_problem(payload, candidates)
    report = coupled_thresholds(problem)
    body = {
        'delta_upper': report.delta_upper,
        'alpha_upper': report.alpha_upper,
        'delta_lower': report.delta_lower,
        'certified': report.certified,
        'delta_minimizers': [list(v) for v in report.delta_minimizers],
        'candidates': _candidate_table(report),
        'flags': _flag_rows(report.flags),
    }
    if payload.get('scale') is not None:
        body['properties'] = threshold_scaling_suite(problem, parse_rational(payload['scale'], 'scale'))
    return body


def alpha_report(payload, candidates=None):
    problem = parse_problem(dict(payload, flags=[]), candidates)
    report = coupled_thresholds(problem)
    return {
        'alpha_upper': report.alpha_upper,
        'alpha_minimizers': [list(v) for v in report.alpha_minimizers],
        'candidates': _candidate_table(report),
    }


def az_report(payload, candidates=None):
    problem = parse_problem(payload, candidates)
    flags = problem.flags
    if payload.get('flag') is not None:
        flags = (parse_flag(problem.fan, payload['flag']),)
    if not flags:
        raise ValidationError('MissingField', "az-bound needs 'flag' or a problem with flags", MODULE)
    rows = [az_flag_row(problem, flag) for flag in flags]
    return {
        'bound': max(row.bound for row in rows),
        'flags': _flag_rows(rows),
    }


def zariski_report(payload):
    fan = parse_fan(require(payload, 'fan', MODULE))
    divisor = parse_divisor(fan, require(payload, 'divisor', MODULE))
    decomposition = zariski_surface(divisor)
    body = {
        'negative': list(decomposition.negative.coefficients),
        'positive': list(decomposition.positive.coefficients),
        'intersections': list(decomposition.intersections),
    }
    if payload.get('flag') is not None:
        flag = parse_flag(fan, payload['flag'])
        path = s_via_surface_zariski(divisor, flag)
        barycentric = flag_s_values(divisor, flag)
        if (path.s1, path.s2) != tuple(barycentric):
            raise ConsistencyError(
                'SurfaceSMismatch', f"Zariski path gives {(path.s1, path.s2)}, barycenter gives {barycentric}", MODULE,
            )
        body['flag'] = describe_flag(flag)
        body['S'] = [path.s1, path.s2]
        body['path'] = {
            'u1': path.u1,
            't1': path.t1,
            'breakpoints': list(path.breakpoints),
            'exceptional': path.exceptional,
            'pieces': [
                {
                    'from': piece.start,
                    'to': piece.end,
                    'intersection': list(piece.intersection),
                    'negative_from': list(piece.negative_start),
                    'negative_to': list(piece.negative_end),
                    'positive_from': list(piece.positive_start),
                    'positive_to': list(piece.positive_end),
                }
                for piece in path.pieces
            ],
        }
    return body


def product_report(payload):
    factors = require(payload, 'factors', MODULE)
    if not isinstance(factors, list) or len(factors) != 2 or not all(isinstance(f, dict) for f in factors):
        raise ValidationError('MalformedInput', "product-check needs exactly two 'factors'", MODULE)
    p1, p2 = (parse_problem(dict(f, flags=[])) for f in factors)
    result = product_check(p1, p2)
    return {
        'lhs': result.lhs,
        'rhs': result.rhs,
        'factors': list(result.factors),
        'equal': result.equal,
    }


def hirzebruch_report(payload):
    m = parse_integer(require(payload, 'm', MODULE), 'm')
    terms = [
        (
            parse_rational(require(t, 'weight', MODULE), 'weight'),
            parse_rational(require(t, 'a', MODULE), 'a'),
            parse_rational(require(t, 'b', MODULE), 'b'),
        )
        for t in require(payload, 'terms', MODULE)
    ]
    oracle = hirzebruch_oracle(m, terms)

    fan = hirzebruch_fan(m)
    problem = make_problem(fan, [(c, hirzebruch_divisor(fan, a, b)) for c, a, b in terms])
    report = coupled_thresholds(problem)
    if report.delta_upper != oracle.delta:
        raise ConsistencyError(
            'HirzebruchMismatch', f"engine delta {report.delta_upper} != closed form {oracle.delta}", MODULE,
        )
    return {
        'p': list(oracle.p),
        'q': list(oracle.q),
        'delta': oracle.delta,
        'delta_lower': report.delta_lower,
        'certified': report.certified,
    }


def curve_report(payload):
    b = parse_rational(payload.get('b', 0), 'b')
    terms = [
        (parse_rational(require(t, 'weight', MODULE), 'weight'), parse_rational(require(t, 'degree', MODULE), 'degree'))
        for t in require(payload, 'terms', MODULE)
    ]
    closed = curve_delta(b, terms)
    report = coupled_thresholds(curve_problem(b, terms))
    if report.delta_upper != closed:
        raise ConsistencyError('CurveMismatch', f"engine delta {report.delta_upper} != 2(1-b)/sum c d = {closed}", MODULE)
    return {
        'delta': closed,
        'alpha_upper': report.alpha_upper,
        'certified': report.certified,
    }
