"""
Run one job (or the worked-example corpus) from the repository root

Usage:
    python run-job.py <command> --input <job.json> [--output <report.json>]
    python run-job.py --corpus

Examples:
    python run-job.py flag-s --input jobs/threefold_flag_s.json
    python run-job.py delta --input jobs/f1_delta.json --candidates '[[0,1],[1,0]]'
    python run-job.py bary-bounds --input jobs/pentagon_bounds.json --precision 256
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

from cli.main import main  # noqa: E402

if __name__ == '__main__':
    sys.exit(main())
