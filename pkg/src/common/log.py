"""
Logging setup
src/common/log.py
"""

import logging
import os
import sys

LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')

_configured = False


def get_logger(name):
    global _configured
    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s'))
        root = logging.getLogger('toric')
        root.addHandler(handler)
        root.setLevel(LOG_LEVEL.upper())
        root.propagate = False
        _configured = True
    return logging.getLogger(f'toric.{name}')
