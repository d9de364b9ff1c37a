"""
Configuration
"""

# libraries
import os
from logging import getLogger

PKG_NAME = "tubespectra"
VERSION = "{} 0.1.0".format(PKG_NAME)

# Runge-Kutta steps per unit edge
RK_STEPS = 2048

# lambda scan
SCAN_STEP = 0.05
SCAN_FLOOR = -50.0
ROOT_TOL = 1e-10
ROOT_MAX_ITER = 100

# tolerances
WRONSKIAN_TOL = 1e-8
MEMBERSHIP_TOL = 1e-9
EVENNESS_TOL = 1e-9
MERGE_TOL = 1e-12
STRICT_TOL = 1e-10

# extremum search
COARSE_POINTS = 2000
GOLDEN_TOL = 1e-10

# environment
THREADS_ENV = 'NANOTUBE_SPECTRA_THREADS'

logger = getLogger('tubespectra')


def thread_count():
    """Number of worker threads for independent solves.

    Reads NANOTUBE_SPECTRA_THREADS; 0, unset or garbage means one thread
    per CPU.
    """
    raw = os.environ.get(THREADS_ENV, '0').strip() or '0'
    try:
        n = int(raw)
    except ValueError:
        logger.warning('Ignoring {}={!r}: not an integer'.format(
            THREADS_ENV, raw))
        n = 0

    if n <= 0:
        n = os.cpu_count() or 1
    return n
