"""
CLI Utilities
"""

# libraries
import csv
import json
import math
import regex

from .exceptions import UsageError
from .hill import load_potential
from .structures import PotentialSpec

# logging
import logging as log
from logging.handlers import RotatingFileHandler
logger = log.getLogger('tubespectra')

_PAIR = regex.compile(r'^\s*\(?\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)?\s*$')
_NUMBER = r'[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?'
_POTENTIAL = regex.compile(
    r'^(?:(?P<zero>zero)'
    r'|cosine:(?P<amplitude>{n})'
    r'|well:(?P<depth>{n}):(?P<width>{n})'
    r'|file:(?P<path>.+))$'.format(n=_NUMBER))


LOG_LEVELS = {0: log.WARN, 1: log.INFO, 2: log.DEBUG}
FILE_FORMAT = '%(asctime)s %(levelname)-7s [%(threadName)s] %(message)s'
CONSOLE_FORMAT = 'tubespectra: %(levelname)s: %(message)s'


def set_logger(log_level, log_file):
    """Route the package logger to the console or a rotating log file.

    Args:
        log_level (int): 0 (warnings only), 1 (info) or 2 (debug).
        log_file (str): Log file path; None logs to stderr.
    """
    level = LOG_LEVELS.get(log_level, log.INFO)
    if log_file:
        handler = RotatingFileHandler(
            log_file, maxBytes=5000000, backupCount=9, encoding='utf-8')
        handler.set_name('tubespectra.file')
        handler.setFormatter(log.Formatter(FILE_FORMAT))
    else:
        handler = log.StreamHandler()
        handler.set_name('tubespectra.console')
        handler.setFormatter(log.Formatter(CONSOLE_FORMAT))
    handler.setLevel(level)

    # replace earlier handlers
    for old in list(logger.handlers):
        logger.removeHandler(old)
        old.close()
    logger.setLevel(level)
    logger.addHandler(handler)
    logger.propagate = False


def parse_pair(text, flag):
    """'p1,p2' (optionally parenthesized) as a pair of ints."""
    m = _PAIR.match(text or '')
    if m is None:
        raise UsageError('{}: expected an integer pair like 1,0, got {!r}'.
                         format(flag, text))
    return int(m.group(1)), int(m.group(2))


def parse_float(text, flag):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise UsageError('{}: not a number: {!r}'.format(flag, text))


def parse_int(text, flag, minimum=None):
    try:
        value = int(text)
    except (TypeError, ValueError):
        raise UsageError('{}: not an integer: {!r}'.format(flag, text))
    if minimum is not None and value < minimum:
        raise UsageError('{}: must be at least {}, got {}'.format(
            flag, minimum, value))
    return value


def parse_potential(text):
    """Read the --potential mini-grammar.

    Args:
        text (str): ``zero``, ``cosine:A``, ``well:DEPTH:WIDTH`` or
            ``file:PATH`` (a two-column x,value CSV file).

    Returns:
        PotentialSpec
    """
    m = _POTENTIAL.match((text or '').strip())
    if m is None:
        raise UsageError(
            '--potential: expected zero, cosine:A, well:DEPTH:WIDTH or '
            'file:PATH, got {!r}'.format(text))
    if m.group('zero'):
        return PotentialSpec.zero()
    if m.group('amplitude') is not None:
        return PotentialSpec.cosine(float(m.group('amplitude')))
    if m.group('depth') is not None:
        return PotentialSpec.well(float(m.group('depth')),
                                  float(m.group('width')))
    return load_potential(m.group('path'))


def format_number(x):
    """15 significant digits, '.' as the decimal separator."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return '{:.15g}'.format(x)
    return str(x)


def get_writer(f):
    return csv.writer(
        f,
        delimiter=',',
        quotechar='"',
        lineterminator='\n',
        quoting=csv.QUOTE_MINIMAL)


def write_csv(f, header, rows):
    writer = get_writer(f)
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(x) for x in row])


def _json_safe(x):
    """Non-finite floats as 'inf', '-inf' and null."""
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        if math.isnan(x):
            return None
        return 'inf' if x > 0 else '-inf'
    return x


def write_json(f, data):
    json.dump(_json_safe(data), f, sort_keys=True, indent=2, allow_nan=False)
    f.write('\n')
