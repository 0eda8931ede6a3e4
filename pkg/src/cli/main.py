"""
Command-line entry point
src/cli/main.py

Usage:
    python run-job.py <command> --input job.json [--output report.json]
                      [--precision BITS] [--candidates JSON]
    python run-job.py --corpus

Exit codes: 0 ok, 1 internal consistency failure, 2 validation error,
3 mathematical precondition failure.
"""

import argparse
import json
import sys

from bary import handler as bary_handler
from common.encoding import dumps_report
from common.errors import ValidationError
from common.log import get_logger
from okounkov import handler as okounkov_handler
from thresholds import handler as thresholds_handler

logger = get_logger(__name__)

MODULE = 'cli'

ROUTES = {
    'okounkov-body': okounkov_handler.handle,
    's-invariant': okounkov_handler.handle,
    'flag-s': okounkov_handler.handle,
    'log-discrepancy': okounkov_handler.handle,
    'delta': thresholds_handler.handle,
    'alpha': thresholds_handler.handle,
    'az-bound': thresholds_handler.handle,
    'zariski-surface': thresholds_handler.handle,
    'product-check': thresholds_handler.handle,
    'hirzebruch': thresholds_handler.handle,
    'curve-delta': thresholds_handler.handle,
    'bary-bounds': bary_handler.handle,
}


def run(command, payload, options=None):
    """Routes one job to its service; returns (exit status, report)."""
    if command not in ROUTES:
        error = ValidationError('UnknownCommand', f"unknown command {command!r}", MODULE)
        return error.status, error.to_dict()
    if not isinstance(payload, dict):
        error = ValidationError('MalformedInput', 'job payload must be a JSON object', MODULE)
        return error.status, error.to_dict()
    response = ROUTES[command]({'command': command, 'payload': payload, 'options': options or {}})
    return response['statusCode'], response['body']


def load_job(path):
    """Reads a job file; a {"command", "payload"} envelope or a bare payload."""
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise ValidationError('MalformedInput', f"cannot read {path}: {e.strerror}", MODULE)
    except json.JSONDecodeError as e:
        raise ValidationError('MalformedInput', f"{path}: invalid JSON at line {e.lineno}", MODULE)
    if isinstance(data, dict) and 'payload' in data:
        return data.get('command'), data['payload'], data.get('options') or {}
    return None, data, {}


def build_parser():
    parser = argparse.ArgumentParser(
        prog='run-job.py',
        description='Exact toric Okounkov bodies, S/T-invariants and coupled stability thresholds',
    )
    parser.add_argument('command', nargs='?', choices=sorted(ROUTES), help='job to run')
    parser.add_argument('--input', help='job JSON file')
    parser.add_argument('--output', help='report file (default: stdout)')
    parser.add_argument('--precision', type=int, help='interval precision in bits for bary-bounds')
    parser.add_argument('--candidates', help='JSON list of candidate vectors overriding the job file')
    parser.add_argument('--corpus', action='store_true', help='run the bundled worked examples')
    return parser


def _write(report, path):
    text = dumps_report(report)
    if path:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.corpus:
        from cli.corpus import run_corpus
        return run_corpus()

    try:
        if not args.input:
            raise ValidationError('MissingField', '--input is required', MODULE)
        command, payload, options = load_job(args.input)
        command = args.command or command
        if command is None:
            raise ValidationError('MissingField', 'no command given on the command line or in the job file', MODULE)
        if args.precision is not None:
            if args.precision < 8:
                raise ValidationError('MalformedInput', f"precision must be at least 8 bits, got {args.precision}", MODULE)
            options['precision'] = args.precision
        if args.candidates is not None:
            try:
                options['candidates'] = json.loads(args.candidates)
            except json.JSONDecodeError:
                raise ValidationError('MalformedInput', '--candidates must be a JSON list of vectors', MODULE)
    except ValidationError as e:
        logger.warning("Job rejected: %s", e)
        _write(e.to_dict(), args.output)
        return e.status

    status, report = run(command, payload, options)
    _write(report, args.output)
    logger.info("Job %s finished with status %d", command, status)
    return status


if __name__ == '__main__':
    sys.exit(main())
