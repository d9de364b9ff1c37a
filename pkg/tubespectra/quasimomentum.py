"""
The quasimomentum module.

The restriction set B_p = {theta in B : p1 t1 + p2 t2 in 2 pi Z}, its
reduction to V_q with q = (|p1|, |p2|), and the segments T_{q,k}.
"""

# libraries
import math

import numpy as np

from .config import MEMBERSHIP_TOL
from .dispersion import LINEAR_LEVEL_SETS, dirac_points
from .exceptions import PreconditionError
from .structures import (Theta, TubeVector, ReducedVector, Segment,
                         SegmentFamily)

# use logger
from logging import getLogger
logger = getLogger('tubespectra')


# the module
def reduce(p):
    """(|p1|, |p2|)."""
    if not isinstance(p, TubeVector):
        p = TubeVector(*p)
    return ReducedVector(abs(p.p1), abs(p.p2))


def _segment(k, t1a, t2a, t1b, t2b, direction):
    start, end = Theta(t1a, t2a), Theta(t1b, t2b)
    return Segment(k, start, end, direction, start == end)


def segments(q):
    """All nonempty T_{q,k} clipped to B = [-pi, pi]^2.

    Endpoints are exact multiples of pi/q1 and pi/q2. A clipped line that
    only touches a corner of B is kept as a degenerate segment.
    """
    q1, q2 = q.q1, q.q2
    pi = math.pi
    out = []

    if q2 == 0:
        for k in range(q1 // 2 + 1):
            t1 = 2 * k * pi / q1
            out.append(_segment(k, t1, -pi, t1, pi, (0.0, 1.0)))
    else:
        norm = math.hypot(q1, q2)
        direction = (q2 / norm, q1 / norm)
        for k in range((q1 + q2) // 2 + 1):
            if q1 == 0:
                t2 = -2 * k * pi / q2
                out.append(_segment(k, -pi, t2, pi, t2, direction))
                continue
            # t1 = n * pi / q1 with n integer, t2 = (n - 2k) * pi / q2
            lo = max(-q1, 2 * k - q2)
            hi = min(q1, 2 * k + q2)
            if lo > hi:
                continue
            out.append(_segment(k, lo * pi / q1, (lo - 2 * k) * pi / q2,
                                hi * pi / q1, (hi - 2 * k) * pi / q2,
                                direction))

    logger.debug('q = ({},{}): {} segments'.format(q1, q2, len(out)))
    return SegmentFamily(q, tuple(out))


def contains(p, theta, tol=MEMBERSHIP_TOL):
    """Whether p1 t1 + p2 t2 lies within tol of 2 pi Z."""
    s = p.p1 * theta.theta1 + p.p2 * theta.theta2
    r = math.fmod(s, 2.0 * math.pi)
    if r < 0:
        r += 2.0 * math.pi
    return min(r, 2.0 * math.pi - r) <= tol


def sample_segment(segment, n):
    """n equally spaced points of the segment, both ends included."""
    if n < 2:
        raise PreconditionError('n must be at least 2, got {}'.format(n))
    t1 = np.linspace(segment.start.theta1, segment.end.theta1, n)
    t2 = np.linspace(segment.start.theta2, segment.end.theta2, n)
    return [Theta(a, b) for a, b in zip(t1.tolist(), t2.tolist())]


def segment_arrays(segment, n):
    """Like sample_segment, but as two coordinate arrays."""
    if segment.degenerate:
        return (np.full(n, segment.start.theta1),
                np.full(n, segment.start.theta2))
    return (np.linspace(segment.start.theta1, segment.end.theta1, n),
            np.linspace(segment.start.theta2, segment.end.theta2, n))


def _sgn(x):
    return -1 if x < 0 else 1


def unfold(p, theta):
    """Map a point of V_q back into B_p.

    F is invariant under both sign flips, so the image carries the same
    root triple.
    """
    return Theta(_sgn(p.p1) * theta.theta1, -_sgn(p.p2) * theta.theta2)


def level_sets_on_tube(p):
    """The linear level sets of F lying entirely inside B_p."""
    p1, p2 = abs(p.p1), abs(p.p2)
    inside = {
        'A1': p2 == 0 and p1 % 2 == 0,
        'A2': p1 == 0 and p2 % 2 == 0,
        'A3': p1 == 0,
        'A4': p1 == 0 and p2 % 4 == 0,
    }
    return [ls for ls in LINEAR_LEVEL_SETS if inside[ls.name]]


def dirac_points_on_tube(p, tol=MEMBERSHIP_TOL):
    """Dirac points (and their mirror images) that belong to B_p."""
    found = []
    for theta, branches, value in dirac_points():
        for sign in (1, -1):
            image = Theta(sign * theta.theta1, theta.theta2)
            if contains(p, image, tol):
                found.append((image, branches, value))
    return found
