"""
The dispersion module.

Roots F1 <= F2 <= F3 of 9x^3 - x - (cos t1 + 1)(3x + cos t2) = 0.
"""

# libraries
import math
from collections import namedtuple

import numpy as np

from .structures import Theta, RootTriple

# use logger
from logging import getLogger
logger = getLogger('tubespectra')

# |acos argument| this close to 1 is a double root
_DOUBLE_ROOT_SNAP = 1e-13

LevelSet = namedtuple('LevelSet', ['name', 'axis', 'coordinates', 'values'])

# families of straight lines in B on which one sheet of F is constant
LINEAR_LEVEL_SETS = (
    LevelSet('A1', 'theta1', (math.pi, -math.pi), (-1.0 / 3, 0.0, 1.0 / 3)),
    LevelSet('A2', 'theta2', (math.pi, -math.pi), (1.0 / 3,)),
    LevelSet('A3', 'theta2', (0.0,), (-1.0 / 3,)),
    LevelSet('A4', 'theta2', (math.pi / 2, -math.pi / 2), (0.0,)),
)


# the module
def theta_zero():
    """arccos(-1/3)."""
    return math.acos(-1.0 / 3.0)


def _depressed(theta1, theta2):
    a = np.cos(theta1) + 1.0
    p = -(1.0 + 3.0 * a) / 9.0
    q = -a * np.cos(theta2) / 9.0
    return p, q


def cubic(x, theta1, theta2):
    """The dispersion cubic 9x^3 - x - (cos t1 + 1)(3x + cos t2)."""
    return (9.0 * x**3 - x
            - (np.cos(theta1) + 1.0) * (3.0 * x + np.cos(theta2)))


def cubic_discriminant(theta1, theta2):
    """-(4P^3 + 27Q^2) of the depressed form x^3 + Px + Q."""
    p, q = _depressed(np.asarray(theta1, dtype=float),
                      np.asarray(theta2, dtype=float))
    return -(4.0 * p**3 + 27.0 * q**2)


def solve_F_array(theta1, theta2):
    """Sorted real roots over arrays of quasimomenta.

    Trigonometric Cardano: P < 0 everywhere on B, so the three roots are
    m cos((phi - 2 pi k) / 3) with m = 2 sqrt(-P/3).

    Returns:
        numpy.ndarray: shape ``(3,) + broadcast shape``, ascending along
        the first axis.
    """
    t1, t2 = np.broadcast_arrays(np.asarray(theta1, dtype=float),
                                 np.asarray(theta2, dtype=float))
    p, q = _depressed(t1, t2)
    m = 2.0 * np.sqrt(-p / 3.0)
    arg = (3.0 * q / (2.0 * p)) * np.sqrt(-3.0 / p)
    arg = np.where(np.abs(np.abs(arg) - 1.0) <= _DOUBLE_ROOT_SNAP,
                   np.sign(arg), arg)
    phi = np.arccos(np.clip(arg, -1.0, 1.0))
    roots = np.stack([m * np.cos((phi - 2.0 * np.pi * k) / 3.0)
                      for k in range(3)])
    return np.sort(roots, axis=0)


def solve_F(theta):
    """F(theta) = (F1, F2, F3) for a single quasimomentum."""
    f = solve_F_array(theta.theta1, theta.theta2)
    return RootTriple(float(f[0]), float(f[1]), float(f[2]))


def solve_F_oracle(theta):
    """F(theta) from the companion matrix, polished by Newton steps."""
    a = math.cos(theta.theta1) + 1.0
    p = -(1.0 + 3.0 * a) / 9.0
    q = -a * math.cos(theta.theta2) / 9.0
    companion = np.array([[0.0, 0.0, -q],
                          [1.0, 0.0, -p],
                          [0.0, 1.0, 0.0]])
    roots = np.sort(np.linalg.eigvals(companion).real)

    polished = []
    for x in roots.tolist():
        for _ in range(3):
            fx = x**3 + p * x + q
            dfx = 3.0 * x**2 + p
            if abs(dfx) < 1e-8:
                break
            x -= fx / dfx
        polished.append(x)
    polished.sort()
    return RootTriple(*polished)


def dirac_points():
    """The two touching points in [0, pi]^2 with the sheets that meet."""
    t0 = theta_zero()
    return [(Theta(t0, 0.0), (1, 2), -1.0 / 3.0),
            (Theta(t0, math.pi), (2, 3), 1.0 / 3.0)]


def surface(n):
    """F over the n x n grid of B, rows (t1, t2, F1, F2, F3)."""
    axis = np.linspace(-math.pi, math.pi, n)
    t1, t2 = np.meshgrid(axis, axis, indexing='ij')
    f = solve_F_array(t1, t2)
    logger.debug('Dispersion surface on {}x{} grid'.format(n, n))
    return np.column_stack([t1.ravel(), t2.ravel(), f[0].ravel(),
                            f[1].ravel(), f[2].ravel()])
