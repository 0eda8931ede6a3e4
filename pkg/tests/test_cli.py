"""
CLI tests
Routing, job files, the JSON codec, deterministic reports and the worked examples

Usage:
    python tests/test_cli.py
"""

import glob
import json
import os
import sys
import tempfile
from fractions import Fraction

from harness import run_module

from cli.codec import (
    dump_flag,
    dump_problem,
    dump_profile,
    parse_fan,
    parse_flag,
    parse_piecewise,
    parse_polytope,
    parse_problem,
    parse_profile,
    require,
)
from cli.corpus import CASES, check_case, run_corpus
from cli.main import ROUTES, load_job, main, run
from common.encoding import decimal_string, dumps_report, parse_integer, parse_rational
from common.errors import ValidationError

JOBS = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'jobs')

F1 = {'rank': 2, 'rays': [[1, 0], [0, 1], [-1, 1], [0, -1]], 'cones': [[0, 1], [1, 2], [2, 3], [0, 3]]}
F1_DELTA = {'fan': F1, 'terms': [{'weight': '1', 'divisor': ['1', '1', '1', '1']}]}


def _raises(name, func, *args):
    try:
        func(*args)
    except ValidationError as e:
        assert e.name == name, f"expected {name}, got {e.name}"
        return
    raise AssertionError(f"expected {name}")


def _write_job(directory, name, data):
    path = os.path.join(directory, name)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f)
    return path


def test_every_command_is_routed():
    assert len(ROUTES) == 12
    for command in ROUTES:
        status, body = run(command, {})
        assert status == 2, f"{command} accepted an empty payload"
        assert body['error'] in ('MissingField', 'MalformedInput')


def test_run_rejects_unknown_and_malformed():
    status, body = run('nope', {})
    assert status == 2 and body['error'] == 'UnknownCommand'
    status, body = run('delta', [1, 2])
    assert status == 2 and body['error'] == 'MalformedInput'


def test_rational_parsing():
    assert parse_rational('3/6') == Fraction(1, 2)
    assert parse_rational(' 2 ') == 2
    assert parse_rational('0.25') == Fraction(1, 4)
    assert parse_integer('7') == 7
    _raises('MalformedRational', parse_rational, 0.5)
    _raises('MalformedRational', parse_rational, True)
    _raises('MalformedRational', parse_rational, '1/0')
    _raises('MalformedInput', parse_integer, '1.5')
    assert decimal_string(Fraction(6, 7)) == '0.857142857143'


def test_require():
    assert require({'a': 1}, 'a') == 1
    _raises('MissingField', require, {'a': None}, 'a')
    _raises('MalformedInput', require, [1], 'a')


def test_problem_roundtrip():
    problem = parse_problem(dict(F1_DELTA, candidates=[[1, 1], [0, 1]], flags=[[[1, 0], [0, 1]]]))
    dumped = dump_problem(problem)
    assert dumped['candidates'] == [[1, 1], [0, 1]]
    assert dumped['terms'][0]['divisor'] == {'coefficients': ['1', '1', '1', '1']}
    again = parse_problem(dumped)
    assert dump_problem(again) == dumped


def test_flags_key_controls_coordinate_flags():
    assert len(parse_problem(F1_DELTA).flags) == 8
    assert parse_problem(dict(F1_DELTA, flags=[])).flags == ()
    problem = parse_problem(F1_DELTA, candidates=[[0, 1]])
    assert [v.coords for v in problem.candidates] == [(0, 1)]


def test_flag_codec():
    fan = parse_fan(F1)
    flag = parse_flag(fan, {'vectors': [[1, 0], [1]], 'coordinates': 'quotient'})
    assert dump_flag(flag) == {'vectors': [[1, 0], [1]], 'coordinates': 'quotient'}
    assert parse_flag(fan, [[1, 0], [0, 1]]).lifted
    _raises('MalformedInput', parse_flag, fan, {'vectors': [[1, 0]], 'coordinates': 'polar'})
    _raises('MissingField', parse_flag, fan, {})


def test_polytope_codec():
    square = parse_polytope({'halfspaces': [
        {'normal': [1, 0], 'offset': 0}, {'normal': [0, 1], 'offset': 0},
        {'normal': [-1, 0], 'offset': -1}, {'normal': [0, -1], 'offset': '-1'},
    ]})
    assert square.mass.volume == 1
    assert parse_polytope({'vertices': [['0', '0'], ['1/2', '0'], ['0', '1/2']]}).mass.volume == Fraction(1, 8)
    _raises('MissingField', parse_polytope, {})
    _raises('MalformedInput', parse_polytope, [[0, 0]])


def test_profile_codec():
    data = {
        'n': 2, 'e': '1/2', 't': '1', 'u': '1', 'w': '1',
        'g': {'pieces': [{'from': '0', 'to': '1', 'coefficients': ['1']}]},
    }
    profile = parse_profile(data)
    assert profile.V == 1 and profile.v == 0
    dumped = dump_profile(profile)
    assert dumped['g']['pieces'][0]['coefficients'] == ['1']
    assert dump_profile(parse_profile(dumped)) == dumped
    _raises('MalformedInput', parse_profile, dict(data, side='up'))
    _raises('MalformedInput', parse_profile, dict(data, t0='1/4'))
    _raises('MalformedInput', parse_piecewise, {'pieces': [
        {'from': '0', 'to': '1', 'coefficients': ['1']}, {'from': '2', 'to': '3', 'coefficients': ['1']},
    ]})
    _raises('MalformedInput', parse_piecewise, {'pieces': []})


def test_dumps_report_is_deterministic():
    status, body = run('delta', F1_DELTA)
    assert status == 0
    text = dumps_report(body)
    assert text == dumps_report(run('delta', F1_DELTA)[1])
    assert text.endswith('}\n')
    parsed = json.loads(text)
    assert parsed['delta_upper'] == {'exact': '6/7', 'decimal': '0.857142857143'}
    assert parsed['certified'] is True


def test_load_job_forms():
    with tempfile.TemporaryDirectory() as tmp:
        envelope = _write_job(tmp, 'envelope.json', {'command': 'delta', 'payload': F1_DELTA, 'options': {'precision': 64}})
        assert load_job(envelope) == ('delta', F1_DELTA, {'precision': 64})
        bare = _write_job(tmp, 'bare.json', F1_DELTA)
        assert load_job(bare) == (None, F1_DELTA, {})
        broken = os.path.join(tmp, 'broken.json')
        with open(broken, 'w', encoding='utf-8') as f:
            f.write('{"command": ')
        _raises('MalformedInput', load_job, broken)
        _raises('MalformedInput', load_job, os.path.join(tmp, 'missing.json'))


def test_main_writes_report():
    with tempfile.TemporaryDirectory() as tmp:
        job = _write_job(tmp, 'job.json', F1_DELTA)
        out = os.path.join(tmp, 'report.json')
        assert main(['delta', '--input', job, '--output', out, '--candidates', '[[0, 1], [1, 0]]']) == 0
        with open(out, encoding='utf-8') as f:
            report = json.load(f)
        assert report['delta_upper']['exact'] == '6/7'
        assert [row['v'] for row in report['candidates']] == [[0, 1], [1, 0]]


def test_main_rejections():
    with tempfile.TemporaryDirectory() as tmp:
        job = _write_job(tmp, 'job.json', F1_DELTA)
        out = os.path.join(tmp, 'report.json')
        assert main(['--input', job, '--output', out]) == 2
        with open(out, encoding='utf-8') as f:
            assert json.load(f)['error'] == 'MissingField'
        assert main(['delta', '--output', out]) == 2
        assert main(['bary-bounds', '--input', job, '--output', out, '--precision', '4']) == 2
        assert main(['delta', '--input', job, '--output', out, '--candidates', '[[0,']) == 2
        bad = _write_job(tmp, 'bad.json', {'command': 'delta', 'payload': {'fan': F1, 'terms': [
            {'weight': '1', 'divisor': ['1', '0', '0', '0']},
        ]}})
        assert main(['--input', bad, '--output', out]) == 3


def test_bundled_jobs():
    paths = sorted(glob.glob(os.path.join(JOBS, '*.json')))
    assert len(paths) == 12
    for path in paths:
        command, payload, options = load_job(path)
        status, body = run(command, payload, options)
        expected = 2 if os.path.basename(path) == 'malformed_ray.json' else 0
        assert status == expected, f"{os.path.basename(path)}: status {status} {body.get('error', '')}"


def test_worked_examples():
    for case in CASES:
        passed, detail = check_case(case)
        assert passed, f"{case['name']}: {detail}"
    assert run_corpus(CASES[:1]) == 0


def main_():
    return run_module('CLI', globals())


if __name__ == '__main__':
    sys.exit(main_())
