"""
Bundled worked examples (--corpus)
src/cli/corpus.py

Each case runs through cli.main.run exactly as a job file would, and its
report is compared against stored exact values.
"""

from fractions import Fraction

from cli.main import run
from common.log import get_logger

logger = get_logger(__name__)


# Colors
class Colors:
    GREEN = '\033[92m'
    RED = '\033[91m'
    YELLOW = '\033[93m'
    CYAN = '\033[96m'
    BOLD = '\033[1m'
    END = '\033[0m'


F = Fraction

THREEFOLD_FAN = {
    'rank': 3,
    'rays': [[0, 1, 0], [1, 0, 0], [0, 0, -1], [0, 0, 1], [0, -1, 1], [-1, 0, 0]],
    'cones': [[0, 1, 2], [0, 1, 3], [1, 2, 4], [1, 3, 4], [0, 2, 5], [0, 3, 5], [2, 4, 5], [3, 4, 5]],
}
THREEFOLD_FLAG = {'vectors': [[1, 3, -1], [1, 0, 0], [0, 0, -1]]}

F1_FAN = {'rank': 2, 'rays': [[1, 0], [0, 1], [-1, 1], [0, -1]], 'cones': [[0, 1], [1, 2], [2, 3], [0, 3]]}

SQUARE = {'vertices': [[0, 0], [1, 0], [1, 1], [0, 1]]}
PENTAGON = {'vertices': [[0, 0], [2, 0], [2, 1], [1, 2], [0, 2]]}


CASES = [
    {
        'name': 'Threefold flag S-invariants',
        'command': 'flag-s',
        'payload': {'fan': THREEFOLD_FAN, 'divisor': [0, 0, 0, 1, 2, 1], 'flag': THREEFOLD_FLAG},
        'expect': {
            ('S',): [F(59, 18), F(1, 2), F(4, 27)],
            ('ray_S',): [F(7, 9), F(1, 2), F(4, 9)],
            ('A',): [F(5), F(1), F(1, 3)],
            ('flag', 'multiplicities', 2): [3],
            ('flag', 'c_prime'): [[F(3), F(1), F(1)], [F(1), F(0)], [F(1, 3)]],
        },
    },
    {
        'name': 'Threefold Okounkov body',
        'command': 'okounkov-body',
        'payload': {'fan': THREEFOLD_FAN, 'divisor': [0, 0, 0, 1, 2, 1], 'flag': THREEFOLD_FLAG},
        'expect': {('volume',): F(3, 2), ('moment_volume',): F(3, 2)},
        'check': lambda body: len(body['vertices']) == 8,
    },
    {
        'name': 'F1 anticanonical delta',
        'command': 'delta',
        'payload': {'fan': F1_FAN, 'terms': [{'weight': 1, 'divisor': [1, 1, 1, 1]}]},
        'expect': {('delta_upper',): F(6, 7), ('delta_lower',): F(6, 7), ('certified',): True},
    },
    {
        'name': 'F1 S along the (-1)-curve',
        'command': 's-invariant',
        'payload': {'fan': F1_FAN, 'divisor': [0, 2, 3, 0], 'vectors': [[0, 1]]},
        'expect': {('values', 0, 'S'): F(7, 6), ('values', 0, 'T'): F(2), ('moment_volume',): F(4)},
    },
    {
        'name': 'Malformed ray (2,0)',
        'command': 'delta',
        'payload': {
            'fan': {'rank': 2, 'rays': [[2, 0], [0, 1], [-1, -1]], 'cones': [[0, 1], [1, 2], [0, 2]]},
            'terms': [{'weight': 1, 'divisor': [1, 1, 1]}],
        },
        'status': 2,
        'expect': {('error',): 'NonPrimitiveRay'},
    },
    {
        'name': 'Hirzebruch m=1, 2E+3F',
        'command': 'hirzebruch',
        'payload': {'m': 1, 'terms': [{'weight': 1, 'a': 2, 'b': 3}]},
        'expect': {('p',): [F(7, 6)], ('q',): [F(13, 12)], ('delta',): F(6, 7)},
    },
    {
        'name': 'Hirzebruch m=0 (P1 x P1)',
        'command': 'hirzebruch',
        'payload': {'m': 0, 'terms': [{'weight': 1, 'a': 2, 'b': 4}]},
        'expect': {('delta',): F(1, 2)},
    },
    {
        'name': 'Curve delta',
        'command': 'curve-delta',
        'payload': {'b': '1/2', 'terms': [{'weight': 1, 'degree': 2}]},
        'expect': {('delta',): F(1, 2)},
    },
    {
        'name': 'F1 Zariski decomposition, 3E+2F',
        'command': 'zariski-surface',
        'payload': {'fan': F1_FAN, 'divisor': [0, 3, 2, 0]},
        'expect': {('negative',): [F(0), F(1), F(0), F(0)], ('positive',): [F(0), F(2), F(2), F(0)]},
    },
    {
        'name': 'F1 surface S along a fibre',
        'command': 'zariski-surface',
        'payload': {'fan': F1_FAN, 'divisor': [3, 2, 0, 0], 'flag': {'vectors': [[1, 0], [0, 1]]}},
        'expect': {('S',): [F(13, 12), F(7, 6)]},
    },
    {
        'name': 'Square barycenter bounds',
        'command': 'bary-bounds',
        'payload': {'polytope': SQUARE, 'axis': 0, 'e': '1/2', 't': 1, 'u': 1, 'w': 1},
        'expect': {
            ('bounds', 's0', 'value'): F(1, 2),
            ('bounds', 'h1', 'value'): F(1, 2),
            ('bounds', 'h2', 'value'): F(1, 2),
        },
    },
    {
        'name': 'Pentagon barycenter sandwich',
        'command': 'bary-bounds',
        'payload': {'polytope': PENTAGON, 'axis': 0, 'e': 1, 't': 2, 'u': 2, 'w': 'minimal'},
        'expect': {
            ('barycenter',): F(19, 21),
            ('bounds', 's0', 'value'): F(7, 8),
            ('bounds', 'h1', 'value'): F(37, 42),
            ('bounds', 'h2', 'value'): F(19, 21),
        },
    },
    {
        'name': 'Blown-up line, n=2 d=1',
        'command': 'bary-bounds',
        'payload': {'line_s': {'n': 2, 'd': 1, 'V0': 6, 't': 2, 'tau': 2}},
        'expect': {('line_s', 'value'): F(26, 27)},
    },
]


def _lookup(body, path):
    for key in path:
        body = body[key]
    return body


def check_case(case):
    """(passed, detail) for one corpus case."""
    status, body = run(case['command'], case['payload'])
    expected_status = case.get('status', 0)
    if status != expected_status:
        return False, f"status {status} (expected {expected_status}): {body.get('error', '')}"
    for path, expected in case.get('expect', {}).items():
        try:
            actual = _lookup(body, path)
        except (KeyError, IndexError, TypeError):
            return False, f"missing {'.'.join(map(str, path))}"
        if actual != expected:
            return False, f"{'.'.join(map(str, path))} = {actual}, expected {expected}"
    if 'check' in case and not case['check'](body):
        return False, 'custom check failed'
    return True, ''


def run_corpus(cases=None):
    cases = CASES if cases is None else cases
    print(f"\n{Colors.BOLD}{Colors.CYAN}{'=' * 72}{Colors.END}")
    print(f"{Colors.BOLD}{Colors.CYAN}WORKED EXAMPLES{Colors.END}")
    print(f"{Colors.BOLD}{Colors.CYAN}{'=' * 72}{Colors.END}\n")

    failures = 0
    for case in cases:
        try:
            passed, detail = check_case(case)
        except Exception as e:
            logger.exception("Case %s raised", case['name'])
            passed, detail = False, str(e)
        if passed:
            print(f"{Colors.GREEN}✅ {case['name']:40} {case['command']}{Colors.END}")
        else:
            failures += 1
            print(f"{Colors.RED}❌ {case['name']:40} {detail}{Colors.END}")

    total = len(cases)
    color = Colors.GREEN if not failures else Colors.RED
    print(f"\n{color}{Colors.BOLD}{total - failures}/{total} passed{Colors.END}")
    return 0 if not failures else 1
