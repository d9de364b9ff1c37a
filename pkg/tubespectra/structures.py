"""
The basic structures of spectra.
"""

# libraries
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .config import EVENNESS_TOL
from .exceptions import InvalidTubeError, PotentialError
from .intervals import IntervalSet

POTENTIAL_KINDS = ('zero', 'cosine', 'well', 'sampled')


# the module
@dataclass(frozen=True)
class PotentialSpec:
    """An even edge potential on [0, 1].

    Use the constructors ``zero``, ``cosine``, ``well`` and ``sampled``
    rather than the raw fields.
    """
    kind: str
    amplitude: float = 0.0
    depth: float = 0.0
    width: float = 0.0
    samples: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise PotentialError('Unknown potential kind: {}'.format(
                self.kind))
        if self.kind == 'well' and not 0.0 < self.width < 1.0:
            raise PotentialError(
                'Well width must lie in (0, 1), got {}'.format(self.width))
        if self.kind == 'sampled':
            self._check_samples()

    def _check_samples(self):
        if len(self.samples) < 2:
            raise PotentialError('A sampled potential needs two points')

        xs = np.array([s[0] for s in self.samples], dtype=float)
        vs = np.array([s[1] for s in self.samples], dtype=float)
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(vs))):
            raise PotentialError('Sampled potential has non-finite values')
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise PotentialError(
                'Sample points must start at 0 and end at 1, got {} .. {}'.
                format(xs[0], xs[-1]))
        bad = np.flatnonzero(np.diff(xs) <= 0)
        if bad.size:
            raise PotentialError(
                'Sample points must increase strictly (row {})'.format(
                    bad[0] + 2))

        mirror = np.interp(1.0 - xs, xs, vs)
        worst = np.max(np.abs(vs - mirror))
        if worst > EVENNESS_TOL:
            i = int(np.argmax(np.abs(vs - mirror)))
            raise PotentialError(
                'Potential is not even: q({x}) and q(1-{x}) differ by {d:.3g}'.
                format(x=xs[i], d=worst))

    @classmethod
    def zero(cls):
        return cls('zero')

    @classmethod
    def cosine(cls, amplitude):
        return cls('cosine', amplitude=float(amplitude))

    @classmethod
    def well(cls, depth, width):
        return cls('well', depth=float(depth), width=float(width))

    @classmethod
    def sampled(cls, points):
        return cls(
            'sampled',
            samples=tuple((float(x), float(v)) for x, v in points))

    def evaluate_array(self, x):
        """Evaluate q0 at the points ``x`` (no domain check)."""
        x = np.asarray(x, dtype=float)
        if self.kind == 'sampled':
            xs, vs = self.sample_arrays()
            return np.interp(x, xs, vs)

        y = np.minimum(x, 1.0 - x)
        if self.kind == 'cosine':
            return self.amplitude * np.cos(2.0 * np.pi * y)
        if self.kind == 'well':
            return np.where(y > 0.5 * (1.0 - self.width), -self.depth, 0.0)
        return np.zeros_like(y)

    def sample_arrays(self):
        xs = np.array([s[0] for s in self.samples], dtype=float)
        vs = np.array([s[1] for s in self.samples], dtype=float)
        return xs, vs

    def breakpoints(self):
        """Interior points where q0 is not smooth."""
        if self.kind == 'well':
            return [0.5 * (1.0 - self.width), 0.5 * (1.0 + self.width)]
        if self.kind == 'sampled':
            return [s[0] for s in self.samples[1:-1]]
        return []

    def minimum(self):
        if self.kind == 'cosine':
            return -abs(self.amplitude)
        if self.kind == 'well':
            return min(0.0, -self.depth)
        if self.kind == 'sampled':
            return min(s[1] for s in self.samples)
        return 0.0

    def describe(self):
        if self.kind == 'cosine':
            return 'cosine:{:g}'.format(self.amplitude)
        if self.kind == 'well':
            return 'well:{:g}:{:g}'.format(self.depth, self.width)
        if self.kind == 'sampled':
            return 'sampled:{}'.format(len(self.samples))
        return 'zero'

    def to_dict(self):
        d = {'kind': self.kind}
        if self.kind == 'cosine':
            d['amplitude'] = self.amplitude
        elif self.kind == 'well':
            d['depth'] = self.depth
            d['width'] = self.width
        elif self.kind == 'sampled':
            d['samples'] = [list(s) for s in self.samples]
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            d['kind'],
            amplitude=d.get('amplitude', 0.0),
            depth=d.get('depth', 0.0),
            width=d.get('width', 0.0),
            samples=tuple(tuple(s) for s in d.get('samples', ())))


def _wrap(t):
    t = float(t)
    if -math.pi <= t <= math.pi:
        return t
    return (t + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class Theta:
    """A quasimomentum in the Brillouin zone [-pi, pi]^2."""
    theta1: float
    theta2: float

    def __post_init__(self):
        object.__setattr__(self, 'theta1', _wrap(self.theta1))
        object.__setattr__(self, 'theta2', _wrap(self.theta2))

    def to_list(self):
        return [self.theta1, self.theta2]

    @classmethod
    def from_list(cls, pair):
        return cls(pair[0], pair[1])


@dataclass(frozen=True)
class RootTriple:
    f1: float
    f2: float
    f3: float

    def as_tuple(self):
        return (self.f1, self.f2, self.f3)

    def __getitem__(self, j):
        """1-based access: ``roots[1]`` is F1."""
        return self.as_tuple()[j - 1]


@dataclass(frozen=True)
class TubeVector:
    """The winding vector p of the nanotube T_p."""
    p1: int
    p2: int

    def __post_init__(self):
        object.__setattr__(self, 'p1', int(self.p1))
        object.__setattr__(self, 'p2', int(self.p2))
        if self.p1 == 0 and self.p2 == 0:
            raise InvalidTubeError(
                'p must be nonzero: p = (0,0) gives the whole graphyne, '
                'not a nanotube')

    def to_list(self):
        return [self.p1, self.p2]


@dataclass(frozen=True)
class ReducedVector:
    """q = (|p1|, |p2|)."""
    q1: int
    q2: int

    def __post_init__(self):
        object.__setattr__(self, 'q1', int(self.q1))
        object.__setattr__(self, 'q2', int(self.q2))
        if self.q1 < 0 or self.q2 < 0:
            raise InvalidTubeError(
                'q must be non-negative, got ({},{})'.format(
                    self.q1, self.q2))
        if self.q1 == 0 and self.q2 == 0:
            raise InvalidTubeError('q must be nonzero')

    def to_list(self):
        return [self.q1, self.q2]


@dataclass(frozen=True)
class Segment:
    """The piece T_{q,k} of the line q2*t2 = q1*t1 - 2*k*pi inside B."""
    k: int
    start: Theta
    end: Theta
    direction: Tuple[float, float]
    degenerate: bool = False

    def point(self, t):
        return Theta(
            self.start.theta1 + t * (self.end.theta1 - self.start.theta1),
            self.start.theta2 + t * (self.end.theta2 - self.start.theta2))

    def length(self):
        return math.hypot(self.end.theta1 - self.start.theta1,
                          self.end.theta2 - self.start.theta2)

    def to_dict(self):
        return {
            'k': self.k,
            'endpoints': [self.start.to_list(), self.end.to_list()],
            'direction': list(self.direction),
            'degenerate': self.degenerate,
        }


@dataclass(frozen=True)
class SegmentFamily:
    q: ReducedVector
    segments: Tuple[Segment, ...]

    def __iter__(self):
        return iter(self.segments)

    def __len__(self):
        return len(self.segments)

    def to_dict(self):
        return {
            'q': self.q.to_list(),
            'segments': [s.to_dict() for s in self.segments],
        }


@dataclass(frozen=True)
class Monodromy:
    c1: float
    s1: float
    c1p: float
    s1p: float
    lam: float

    @property
    def discriminant(self):
        return self.c1 + self.s1p

    @property
    def eta(self):
        return self.s1p

    @property
    def wronskian(self):
        return self.c1 * self.s1p - self.s1 * self.c1p

    def to_dict(self):
        return {'c1': self.c1, 's1': self.s1, 'c1p': self.c1p,
                's1p': self.s1p, 'lambda': self.lam}


@dataclass(frozen=True)
class DirichletSpectrum:
    eigenvalues: Tuple[float, ...]
    cutoff: float

    def __iter__(self):
        return iter(self.eigenvalues)

    def __len__(self):
        return len(self.eigenvalues)

    def to_dict(self):
        return {'eigenvalues': list(self.eigenvalues), 'cutoff': self.cutoff}


@dataclass(frozen=True)
class HillBand:
    """One band of the periodic Hill operator, counted from the bottom."""
    index: int
    lo: float
    hi: float
    truncated: bool = False


@dataclass(frozen=True)
class Extremum:
    which: str
    value: float
    theta: Theta
    segment_k: int
    on_k0_pair: Optional[bool] = None

    def to_dict(self):
        return {
            'which': self.which,
            'value': self.value,
            'theta': self.theta.to_list(),
            'segment_k': self.segment_k,
            'on_k0_pair': self.on_k0_pair,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d['which'], d['value'], Theta.from_list(d['theta']),
                   d['segment_k'], d.get('on_k0_pair'))


@dataclass(frozen=True)
class RangeReport:
    q: ReducedVector
    r1: IntervalSet
    r2: IntervalSet
    r3: IntervalSet
    union: IntervalSet
    case_label: str
    gap_case: str
    witnesses: Tuple[Extremum, ...] = ()

    @property
    def extremum_witness(self):
        return self.witnesses[0] if self.witnesses else None

    def ranges(self):
        return {1: self.r1, 2: self.r2, 3: self.r3}

    def to_dict(self):
        witness = self.extremum_witness
        return {
            'q': self.q.to_list(),
            'r1': self.r1.to_list(),
            'r2': self.r2.to_list(),
            'r3': self.r3.to_list(),
            'union': self.union.to_list(),
            'case_label': self.case_label,
            'gap_case': self.gap_case,
            'extremum_witness': witness.to_dict() if witness else None,
            'witnesses': [w.to_dict() for w in self.witnesses],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            ReducedVector(*d['q']),
            IntervalSet.from_list(d['r1']),
            IntervalSet.from_list(d['r2']),
            IntervalSet.from_list(d['r3']),
            IntervalSet.from_list(d['union']),
            d['case_label'],
            d['gap_case'],
            tuple(Extremum.from_dict(w) for w in d['witnesses']))


@dataclass(frozen=True)
class BandGaps:
    """The ac part and the gaps of T_p inside one Hill band."""
    hill_band_index: int
    band: Tuple[float, float]
    ac: IntervalSet
    gaps: IntervalSet
    case: str

    def to_dict(self):
        return {
            'hill_band_index': self.hill_band_index,
            'band': list(self.band),
            'ac': self.ac.to_list(),
            'gaps': self.gaps.to_list(),
            'case': self.case,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d['hill_band_index'], tuple(d['band']),
                   IntervalSet.from_list(d['ac']),
                   IntervalSet.from_list(d['gaps']), d['case'])


@dataclass(frozen=True)
class SigmaZero:
    lam: float
    eta_value: float
    family: str

    def to_dict(self):
        return {'lambda': self.lam, 'eta_value': self.eta_value,
                'family': self.family}

    @classmethod
    def from_dict(cls, d):
        return cls(d['lambda'], d['eta_value'], d['family'])


@dataclass(frozen=True)
class DiracPoint:
    """A touching point of two dispersion sheets that lies on the tube."""
    theta: Theta
    branches: Tuple[int, int]
    eta: float

    def to_dict(self):
        return {'theta': self.theta.to_list(),
                'branches': list(self.branches), 'eta': self.eta}

    @classmethod
    def from_dict(cls, d):
        return cls(Theta.from_list(d['theta']), tuple(d['branches']),
                   d['eta'])


@dataclass(frozen=True)
class PurePoint:
    sigma_D: Tuple[float, ...]
    sigma_0: Tuple[SigmaZero, ...]
    notes: Tuple[str, ...] = ()

    def to_dict(self):
        return {'sigma_D': list(self.sigma_D),
                'sigma_0': [s.to_dict() for s in self.sigma_0],
                'notes': list(self.notes)}


@dataclass(frozen=True)
class SpectrumReport:
    p: TubeVector
    potential: PotentialSpec
    lambda_window: Tuple[float, float]
    ac_bands: IntervalSet
    hill_bands: IntervalSet
    gaps_per_hill_band: Tuple[BandGaps, ...]
    sigma_D: Tuple[float, ...]
    sigma_0: Tuple[SigmaZero, ...]
    case: str
    dirac_points: Tuple[DiracPoint, ...] = ()
    notes: Tuple[str, ...] = field(default=())

    def to_dict(self):
        return {
            'p': self.p.to_list(),
            'potential': self.potential.to_dict(),
            'lambda_window': list(self.lambda_window),
            'ac_bands': self.ac_bands.to_list(),
            'hill_bands': self.hill_bands.to_list(),
            'gaps_per_hill_band': [g.to_dict()
                                   for g in self.gaps_per_hill_band],
            'sigma_D': list(self.sigma_D),
            'sigma_0': [s.to_dict() for s in self.sigma_0],
            'case': self.case,
            'dirac_points': [d.to_dict() for d in self.dirac_points],
            'notes': list(self.notes),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            TubeVector(*d['p']),
            PotentialSpec.from_dict(d['potential']),
            tuple(d['lambda_window']),
            IntervalSet.from_list(d['ac_bands']),
            IntervalSet.from_list(d['hill_bands']),
            tuple(BandGaps.from_dict(g) for g in d['gaps_per_hill_band']),
            tuple(d['sigma_D']),
            tuple(SigmaZero.from_dict(s) for s in d['sigma_0']),
            d['case'],
            tuple(DiracPoint.from_dict(x) for x in d['dirac_points']),
            tuple(d['notes']))
