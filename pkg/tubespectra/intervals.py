"""
Finite unions of closed intervals on the real line.
"""

# libraries
import math

from .config import MERGE_TOL
from .exceptions import PreconditionError


# the module
class IntervalSet:
    """A normalized finite union of closed intervals.

    Intervals are kept sorted by their lower end and pairwise disjoint;
    pieces closer than ``tol`` are merged. Degenerate points ``[a, a]`` are
    allowed.
    """

    __slots__ = ('intervals',)

    def __init__(self, intervals=(), tol=MERGE_TOL):
        pieces = []
        for lo, hi in intervals:
            lo, hi = float(lo), float(hi)
            if math.isnan(lo) or math.isnan(hi):
                raise PreconditionError('NaN interval end')
            if lo > hi:
                raise PreconditionError(
                    'Interval [{}, {}] is reversed'.format(lo, hi))
            pieces.append((lo, hi))

        stack = []
        for lo, hi in sorted(pieces):
            if stack and lo <= stack[-1][1] + tol:
                stack[-1] = (stack[-1][0], max(stack[-1][1], hi))
            else:
                stack.append((lo, hi))
        self.intervals = tuple(stack)

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def from_list(cls, pairs):
        return cls([(p[0], p[1]) for p in pairs])

    def to_list(self):
        return [[lo, hi] for lo, hi in self.intervals]

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __getitem__(self, i):
        return self.intervals[i]

    def __bool__(self):
        return bool(self.intervals)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        return 'IntervalSet({})'.format(list(self.intervals))

    def __or__(self, other):
        return self.union(other)

    def __and__(self, other):
        return self.intersection(other)

    @property
    def lo(self):
        return self.intervals[0][0] if self.intervals else None

    @property
    def hi(self):
        return self.intervals[-1][1] if self.intervals else None

    def measure(self):
        return sum(hi - lo for lo, hi in self.intervals)

    def union(self, *others, tol=MERGE_TOL):
        pieces = list(self.intervals)
        for other in others:
            pieces.extend(other.intervals)
        return IntervalSet(pieces, tol=tol)

    def intersection(self, other):
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    def clip(self, lo, hi):
        """Intersect with the window ``[lo, hi]``."""
        if lo > hi:
            return IntervalSet.empty()
        return self.intersection(IntervalSet([(lo, hi)]))

    def gaps(self, min_width=0.0):
        """The closures of the bounded holes between consecutive pieces."""
        out = []
        for (_, left), (right, _) in zip(self.intervals, self.intervals[1:]):
            if right - left > min_width:
                out.append((left, right))
        return IntervalSet(out, tol=-1.0)

    def complement_within(self, lo, hi, min_width=0.0):
        """Closures of the parts of ``[lo, hi]`` not covered by the set."""
        out = []
        cursor = lo
        for a, b in self.clip(lo, hi):
            if a - cursor > min_width:
                out.append((cursor, a))
            cursor = max(cursor, b)
        if hi - cursor > min_width:
            out.append((cursor, hi))
        return IntervalSet(out, tol=-1.0)

    def contains(self, x, tol=0.0):
        for lo, hi in self.intervals:
            if lo - tol <= x <= hi + tol:
                return True
        return False

    def issubset(self, other, tol=0.0):
        return all(
            any(a - tol <= lo and hi <= b + tol for a, b in other.intervals)
            for lo, hi in self.intervals)

    def distance_to(self, x):
        """Distance from the point ``x`` to the set."""
        if not self.intervals:
            return math.inf
        best = math.inf
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return 0.0
            best = min(best, abs(x - lo), abs(x - hi))
        return best

    def scaled(self, factor):
        if factor >= 0:
            return IntervalSet([(factor * lo, factor * hi)
                                for lo, hi in self.intervals])
        return IntervalSet([(factor * hi, factor * lo)
                            for lo, hi in self.intervals])

    def endpoints(self):
        points = []
        for lo, hi in self.intervals:
            points.append(lo)
            if hi != lo:
                points.append(hi)
        return points


def _directed_hausdorff(a, b):
    # the distance to b is a tent over each hole of b, so the supremum over
    # a is reached at an end of a or at a hole midpoint clipped into a
    worst = 0.0
    holes = [(b[i][1], b[i + 1][0]) for i in range(len(b) - 1)]
    for lo, hi in a:
        candidates = [lo, hi]
        for g0, g1 in holes:
            left, right = max(lo, g0), min(hi, g1)
            if left <= right:
                mid = 0.5 * (g0 + g1)
                candidates.append(min(max(mid, left), right))
        for x in candidates:
            worst = max(worst, b.distance_to(x))
    return worst


def hausdorff(a, b):
    """Hausdorff distance between two interval sets.

    Args:
        a (IntervalSet): The first set.
        b (IntervalSet): The second set.

    Returns:
        float: 0 for two empty sets, infinity when exactly one is empty.
    """
    if not a and not b:
        return 0.0
    if not a or not b:
        return math.inf
    return max(_directed_hausdorff(a, b), _directed_hausdorff(b, a))
