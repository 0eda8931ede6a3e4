"""
Exact rational encoding for JSON payloads
src/common/encoding.py

Rationals travel as "p/q" strings. Reports render every Fraction as
{"exact": "p/q", "decimal": "<12 significant digits>"}.
"""

import json
from decimal import Decimal, localcontext
from fractions import Fraction

from common.errors import ValidationError

DECIMAL_DIGITS = 12


def parse_rational(value, field='value'):
    """Accept ints and "p/q" / integer / decimal strings; floats are rejected."""
    if isinstance(value, bool):
        raise ValidationError('MalformedRational', f"{field}: booleans are not rationals", 'common')
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError('MalformedRational', f"{field}: cannot parse {value!r}", 'common')
    raise ValidationError('MalformedRational', f"{field}: expected \"p/q\" string, got {type(value).__name__}", 'common')


def parse_integer(value, field='value'):
    if isinstance(value, bool):
        raise ValidationError('MalformedInput', f"{field}: expected integer", 'common')
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise ValidationError('MalformedInput', f"{field}: expected integer, got {value!r}", 'common')


def format_rational(value):
    return str(Fraction(value))


def decimal_string(value):
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return str(Decimal(value.numerator) / Decimal(value.denominator))


class FractionEncoder(json.JSONEncoder):
    """Helper para serializar Fraction (exact + decimal rendering)"""
    def default(self, obj):
        if isinstance(obj, Fraction):
            return {'exact': format_rational(obj), 'decimal': decimal_string(obj)}
        if isinstance(obj, (tuple, frozenset, set)):
            return list(obj)
        return super(FractionEncoder, self).default(obj)


def dumps_report(report):
    """Deterministic rendering: sorted keys, two-space indent, trailing LF."""
    return json.dumps(report, cls=FractionEncoder, sort_keys=True, indent=2, ensure_ascii=False) + '\n'
