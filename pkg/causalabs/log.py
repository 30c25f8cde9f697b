#!/usr/bin/env python3
"""
Logging setup for the command line.

Debug levels: 0 = warnings only, 1 = basic progress, 2 = verbose.
Messages are tagged with the emitting module, e.g. ``[SOLVER] ...``.
"""

import logging
import sys

DEBUG_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}


class _TagFilter(logging.Filter):
    def filter(self, record):
        record.tag = record.name.rsplit('.', 1)[-1].upper()
        return True


def configure_logging(debug_level=0, stream=None):
    """Send ``causalabs`` log records to stderr at the given debug level."""
    logger = logging.getLogger('causalabs')
    for handler in list(logger.handlers):
        if getattr(handler, '_causalabs', False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler._causalabs = True
    handler.addFilter(_TagFilter())
    handler.setFormatter(logging.Formatter('[%(tag)s] %(message)s'))
    logger.addHandler(handler)
    logger.setLevel(DEBUG_LEVELS.get(debug_level, logging.DEBUG))
    return logger
