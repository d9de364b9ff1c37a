"""
The ranges module.

Closed-form ranges of F1, F2 and F3 over V_q, the extremum search used by
the odd-q2 branches, and a brute-force sampling oracle.
"""

# libraries
import math
from functools import lru_cache

import numpy as np

from .config import COARSE_POINTS, GOLDEN_TOL, STRICT_TOL
from .dispersion import solve_F_array, theta_zero
from .exceptions import PreconditionError
from .intervals import IntervalSet, hausdorff
from .quasimomentum import segments, segment_arrays
from .structures import Theta, Extremum, RangeReport

# use logger
from logging import getLogger
logger = getLogger('tubespectra')

F1_MIN = 'F1-min'
F2_MAX = 'F2-max'

THIRD = 1.0 / 3.0
TWO_THIRDS = 2.0 / 3.0

# range case letters and the matching gap classification
GAP_CASES = {'a': 'even-p2', 'b': 'i', 'c': 'ii', 'd': 'iii', 'e': 'iv'}

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

# union pieces closer than this are one piece
UNION_TOL = 1e-10


# the module
def golden_section_search(f, a, b, tol=GOLDEN_TOL):
    """Golden-section search.

    Given a function f with a single local minimum in the interval [a, b],
    returns a point within tol of the minimizer.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return 0.5 * (a + b)

    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    if yc < yd:
        return 0.5 * (a + d)
    return 0.5 * (c + b)


def _F(j, theta1, theta2):
    return float(solve_F_array(theta1, theta2)[j - 1])


def l_zero(q1):
    """floor(q1 theta0 / 2 pi)."""
    return int(math.floor(q1 * theta_zero() / (2.0 * math.pi)))


def case_label(q):
    if q.q2 == 0:
        return 'b' if q.q1 == 1 else 'c'
    if q.q2 % 2 == 0:
        return 'a'
    return 'd' if q.q1 <= 1 else 'e'


def _local_optimum(segment, j, sign, s_lo, s_hi, tol):
    """Minimize sign * F_j along a segment parameter window."""

    def g(s):
        theta = segment.point(s)
        return sign * _F(j, theta.theta1, theta.theta2)

    s_tol = tol / max(segment.length(), 1e-300)
    s = golden_section_search(g, s_lo, s_hi, s_tol)
    return s, g(s)


def find_extremum(q, which, coarse=COARSE_POINTS, tol=GOLDEN_TOL):
    """Global min of F1 or max of F2 over V_q.

    Every segment is searched: a coarse grid locates the best sample and a
    golden-section search refines around it. The witness records whether
    an F1 minimum with q1 != 0 fell on T_{q,k0} or T_{q,k0+1}, q2 = 2k0+1.

    Args:
        q (ReducedVector): The reduced winding vector, q2 odd.
        which (str): ``F1-min`` or ``F2-max``.

    Returns:
        Extremum
    """
    if q.q2 % 2 != 1:
        raise PreconditionError(
            'extremum search needs odd q2, got q = ({},{})'.format(
                q.q1, q.q2))
    if which == F1_MIN:
        j, sign = 1, 1.0
    elif which == F2_MAX:
        j, sign = 2, -1.0
    else:
        raise PreconditionError('Unknown extremum: {}'.format(which))

    best = None
    grid = np.linspace(0.0, 1.0, coarse)
    for seg in segments(q):
        if seg.degenerate:
            cand = (sign * _F(j, seg.start.theta1, seg.start.theta2), 0.0)
        else:
            t1, t2 = segment_arrays(seg, coarse)
            vals = sign * solve_F_array(t1, t2)[j - 1]
            i = int(np.argmin(vals))
            s, v = _local_optimum(seg, j, sign, grid[max(i - 1, 0)],
                                  grid[min(i + 1, coarse - 1)], tol)
            cand = (v, s) if v < vals[i] else (float(vals[i]), grid[i])

        if best is None or cand[0] < best[0]:
            best = (cand[0], cand[1], seg)

    value, s, seg = best
    on_pair = None
    if which == F1_MIN and q.q1 != 0:
        k0 = (q.q2 - 1) // 2
        on_pair = seg.k in (k0, k0 + 1)

    witness = Extremum(which, sign * value, seg.point(s), seg.k, on_pair)
    logger.debug('q = ({},{}): {} = {:.12g} on k = {}'.format(
        q.q1, q.q2, which, witness.value, seg.k))
    return witness


def _range_F1(q):
    if q.q2 == 0:
        if q.q1 == 1:
            return IntervalSet([(-1.0, -TWO_THIRDS)]), None
        l0 = l_zero(q.q1)
        a = _F(1, 2 * l0 * math.pi / q.q1, 0.0)
        b = _F(1, 2 * (l0 + 1) * math.pi / q.q1, math.pi)
        return IntervalSet([(-1.0, max(a, -1.0)),
                            (min(b, -THIRD), -THIRD)]), None
    if q.q2 % 2 == 0:
        return IntervalSet([(-1.0, -THIRD)]), None

    if q.q1 == 0:
        k = q.q2 // 2
        theta = Theta(0.0, -2 * k * math.pi / q.q2)
        a = _F(1, theta.theta1, theta.theta2)
        witness = Extremum(F1_MIN, a, theta, k, None)
    else:
        witness = find_extremum(q, F1_MIN)
        a = witness.value
    return IntervalSet([(min(a, -THIRD), -THIRD)]), witness


def _range_F2(q):
    if q.q1 <= 1 and q.q2 % 2 == 1:
        witness = find_extremum(q, F2_MAX)
        return IntervalSet([(-THIRD, max(witness.value, -THIRD))]), witness
    return IntervalSet([(-THIRD, THIRD)]), None


def range_F1(q):
    """F1(V_q)."""
    return _range_F1(q)[0]


def range_F2(q):
    """F2(V_q)."""
    return _range_F2(q)[0]


def range_F3(q):
    """F3(V_q)."""
    if q.q2 == 0:
        if q.q1 == 1:
            return IntervalSet([(TWO_THIRDS, 1.0)])
        l0 = l_zero(q.q1)
        c = _F(3, 2 * (l0 + 1) * math.pi / q.q1, 0.0)
        d = _F(3, 2 * l0 * math.pi / q.q1, math.pi)
        return IntervalSet([(THIRD, max(c, THIRD)), (min(d, 1.0), 1.0)])
    return IntervalSet([(THIRD, 1.0)])


@lru_cache(maxsize=128)
def range_union(q):
    """All three ranges, their union and the case labels."""
    r1, w1 = _range_F1(q)
    r2, w2 = _range_F2(q)
    r3 = range_F3(q)
    label = case_label(q)
    union = r1.union(r2, r3, tol=UNION_TOL)
    logger.debug('q = ({},{}): case {}, F(V_q) = {}'.format(
        q.q1, q.q2, label, union.to_list()))
    return RangeReport(q, r1, r2, r3, union, label, GAP_CASES[label],
                       tuple(w for w in (w1, w2) if w is not None))


def case_ii_flags(q1):
    """Whether the lower and upper case-ii gaps open, for q = (q1, 0).

    A difference within the strictness threshold counts as touching.
    """
    l0 = l_zero(q1)
    lower = (_F(1, 2 * l0 * math.pi / q1, 0.0)
             < _F(1, 2 * (l0 + 1) * math.pi / q1, math.pi) - STRICT_TOL)
    upper = (_F(3, 2 * (l0 + 1) * math.pi / q1, 0.0)
             < _F(3, 2 * l0 * math.pi / q1, math.pi) - STRICT_TOL)
    return lower, upper


def brute_force_range(q, j, samples_per_segment):
    """F_j(V_q) from dense sampling of every segment.

    Sorted sample values are split wherever consecutive values differ by
    more than three times the largest jump seen between neighbouring
    samples of one segment; the ends of each piece are then pushed to the
    local extremum by golden-section search.
    """
    if samples_per_segment < 100:
        raise PreconditionError(
            'samples_per_segment must be at least 100, got {}'.format(
                samples_per_segment))

    segs = list(segments(q))
    values, owner, params = [], [], []
    jump = 0.0
    for si, seg in enumerate(segs):
        n = 1 if seg.degenerate else samples_per_segment
        t1, t2 = segment_arrays(seg, n)
        f = solve_F_array(t1, t2)[j - 1]
        if n > 1:
            jump = max(jump, float(np.max(np.abs(np.diff(f)))))
        values.append(f)
        owner.append(np.full(n, si))
        params.append(np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(1))

    values = np.concatenate(values)
    owner = np.concatenate(owner)
    params = np.concatenate(params)
    order = np.argsort(values, kind='stable')
    ordered = values[order]

    threshold = max(3.0 * jump, 1e-12)
    splits = np.flatnonzero(np.diff(ordered) > threshold)
    starts = np.concatenate([[0], splits + 1])
    stops = np.concatenate([splits, [ordered.size - 1]])

    step = 1.0 / (samples_per_segment - 1)
    pieces = []
    for i0, i1 in zip(starts.tolist(), stops.tolist()):
        lo, hi = float(ordered[i0]), float(ordered[i1])
        for idx, sign in ((order[i0], 1.0), (order[i1], -1.0)):
            seg = segs[owner[idx]]
            if seg.degenerate:
                continue
            s = params[idx]
            _, v = _local_optimum(seg, j, sign, max(s - step, 0.0),
                                  min(s + step, 1.0), 1e-8)
            if sign > 0:
                lo = min(lo, v)
            else:
                hi = max(hi, -v)
        pieces.append((lo, hi))

    return IntervalSet(pieces)


def oracle_comparison(q, samples_per_segment=4000):
    """Brute-force ranges next to the closed forms, with distances."""
    report = range_union(q)
    out = {}
    for j, closed in report.ranges().items():
        brute = brute_force_range(q, j, samples_per_segment)
        out[j] = {'intervals': brute.to_list(),
                  'hausdorff': hausdorff(closed, brute)}
    return out
