"""
The spectra module.

Absolutely continuous bands, gaps per Hill band and the pure point
spectrum of the nanotube operator H_p.
"""

# libraries
import numpy as np

from .config import STRICT_TOL, SCAN_STEP, RK_STEPS
from .exceptions import PreconditionError
from .hill import (hill_band_list, hill_bands, dirichlet_spectrum,
                   solve_D_equals_many, discriminant_array)
from .intervals import IntervalSet
from .quasimomentum import reduce, dirac_points_on_tube
from .ranges import range_union, case_ii_flags
from .structures import (TubeVector, BandGaps, SigmaZero, DiracPoint,
                         PurePoint, SpectrumReport)

# use logger
from logging import getLogger
logger = getLogger('tubespectra')

# ac pieces and gaps narrower than this are dropped
_MIN_WIDTH = 1e-9
# tolerance of eta(mid) against F(V_q)
_ALLOWED_TOL = 1e-12

NOTE_SC = 'singular continuous spectrum is empty'
NOTE_MULTIPLICITY = ('every eigenvalue in sigma_D and sigma_0 has infinite '
                     'multiplicity')
NOTE_LOOPS = ('sigma_D eigenspaces are spanned by simple loop and tube loop '
              'states')


# the module
def _tube(p):
    return p if isinstance(p, TubeVector) else TubeVector(*p)


def window_floor(spec):
    """Default lower end of the lambda window: min(0, min q0) - 1."""
    return min(0.0, spec.minimum()) - 1.0


def sigma_zero_targets(p):
    """The (eta value, eigenfunction family) pairs of the extra spectrum."""
    p = _tube(p)
    n1, n2 = abs(p.p1), abs(p.p2)
    if n2 == 0 and n1 % 2 == 0:
        return [(0.0, 'rhombus-bracelet'),
                (-1.0 / 3, 'hexagon-bracelet-a'),
                (1.0 / 3, 'hexagon-bracelet-b')]
    if n1 == 0:
        if n2 % 2 == 1:
            return [(-1.0 / 3, 'flower')]
        if n2 % 4 == 2:
            return [(-1.0 / 3, 'flower'), (1.0 / 3, 'mushroom')]
        return [(-1.0 / 3, 'flower'), (0.0, 'double-band'),
                (1.0 / 3, 'mushroom')]
    return []


def expected_gap_count(p):
    """Gaps per complete Hill band predicted by the case analysis."""
    union = range_union(reduce(_tube(p))).union
    return len(union.complement_within(-1.0, 1.0, min_width=_MIN_WIDTH))


def band_decomposition(p, spec, lambda_max, lambda_min=None, step=SCAN_STEP,
                       steps=RK_STEPS):
    """Split every Hill band in the window into ac pieces and gaps.

    Breakpoints are the Hill band edges and the roots of D = 2c for every
    endpoint c of F(V_q); a piece is ac when D/2 at its midpoint lies in
    F(V_q), since D is monotone on each band.

    Args:
        step (float): Spacing of the sign-change scans; narrow gaps need
            a finer one.
        steps (int): Runge-Kutta steps per edge.

    Returns:
        list of BandGaps, ascending.
    """
    p = _tube(p)
    report = range_union(reduce(p))
    allowed = report.union
    lo = window_floor(spec) if lambda_min is None else float(lambda_min)
    hi = float(lambda_max)
    if hi <= lo:
        raise PreconditionError(
            'Empty lambda window [{}, {}]'.format(lo, hi))

    bands = [b for b in hill_band_list(spec, hi, step=step, steps=steps)
             if b.hi > lo]
    targets = sorted(set(2.0 * c for c in allowed.endpoints()))
    found = solve_D_equals_many(spec, targets, hi, step=step, steps=steps)
    roots = sorted(r for rs in found for r in rs)

    cuts = []
    for b in bands:
        inner = [r for r in roots
                 if b.lo + _MIN_WIDTH < r < b.hi - _MIN_WIDTH]
        cuts.append([b.lo] + inner + [b.hi])

    mids = np.array([0.5 * (x + y) for c in cuts for x, y in zip(c, c[1:])])
    halves = []
    if mids.size:
        halves = (0.5 * discriminant_array(spec, mids, steps)).tolist()

    out = []
    cursor = 0
    for b, c in zip(bands, cuts):
        kept = []
        for x, y in zip(c, c[1:]):
            if allowed.contains(halves[cursor], _ALLOWED_TOL):
                kept.append((x, y))
            cursor += 1
        ac = IntervalSet(kept)
        gaps = ac.complement_within(b.lo, b.hi, min_width=_MIN_WIDTH)

        band = (max(b.lo, lo), b.hi)
        out.append(BandGaps(b.index, band, ac.clip(*band),
                            gaps.clip(*band), report.gap_case))

    logger.debug('p = ({},{}): {} Hill bands in [{}, {}]'.format(
        p.p1, p.p2, len(out), lo, hi))
    return out


def ac_spectrum(p, spec, lambda_max, lambda_min=None, step=SCAN_STEP,
                steps=RK_STEPS):
    """{lambda : eta(lambda) in F(V_q)} inside the window."""
    pieces = band_decomposition(p, spec, lambda_max, lambda_min, step,
                                steps)
    return IntervalSet().union(*[b.ac for b in pieces])


def gap_report(p, spec, lambda_max, lambda_min=None, step=SCAN_STEP,
               steps=RK_STEPS):
    """Gaps of ac_spectrum per Hill band with the case label."""
    return band_decomposition(p, spec, lambda_max, lambda_min, step, steps)


def pure_point(p, spec, lambda_max, lambda_min=None, step=SCAN_STEP,
               steps=RK_STEPS):
    """Sigma^D and the extra eigenvalues Sigma^0 = D^-1(2 c) for the tube.

    Returns:
        PurePoint
    """
    p = _tube(p)
    lo = window_floor(spec) if lambda_min is None else float(lambda_min)
    hi = float(lambda_max)

    sigma_d = tuple(x for x in dirichlet_spectrum(spec, hi, step=step,
                                                 steps=steps).eigenvalues
                    if x >= lo)

    targets = sigma_zero_targets(p)
    found = solve_D_equals_many(spec, [2.0 * c for c, _ in targets], hi,
                                step=step, steps=steps)
    entries, omitted = [], 0
    for (c, family), lams in zip(targets, found):
        for lam in lams:
            if lam < lo:
                omitted += 1
                continue
            entries.append(SigmaZero(lam, c, family))
    entries.sort(key=lambda s: s.lam)

    notes = ()
    if omitted:
        logger.warning('{} sigma_0 values lie below {}'.format(omitted, lo))
        notes = ('{} sigma_0 values below the window floor omitted'.format(
            omitted),)
    return PurePoint(sigma_d, tuple(entries), notes)


def full_report(p, spec, lambda_window, step=SCAN_STEP, steps=RK_STEPS):
    """Everything known about the spectrum of H_p in the window.

    Args:
        p (TubeVector): The winding vector.
        spec (PotentialSpec): The edge potential.
        lambda_window: ``(lambda_min, lambda_max)``, or just ``lambda_max``.
        step (float): Spacing of the lambda scans.
        steps (int): Runge-Kutta steps per edge.

    Returns:
        SpectrumReport
    """
    p = _tube(p)
    if np.ndim(lambda_window) == 0:
        lo, hi = window_floor(spec), float(lambda_window)
    else:
        lo, hi = lambda_window
        lo = window_floor(spec) if lo is None else float(lo)
        hi = float(hi)

    logger.info('Spectrum of T_({},{}) with {} on [{}, {}]'.format(
        p.p1, p.p2, spec.describe(), lo, hi))

    pieces = band_decomposition(p, spec, hi, lo, step, steps)
    ac = IntervalSet().union(*[b.ac for b in pieces])
    pp = pure_point(p, spec, hi, lo, step, steps)
    q = reduce(p)
    case = range_union(q).gap_case

    notes = [NOTE_SC, NOTE_MULTIPLICITY]
    if pp.sigma_D:
        notes.append(NOTE_LOOPS)
    if case == 'ii':
        lower, upper = case_ii_flags(q.q1)
        for name, is_open in (('lower', lower), ('upper', upper)):
            if not is_open:
                notes.append('case ii {} gap closed: bands touch within '
                             '{:g}'.format(name, STRICT_TOL))
    notes.extend(pp.notes)

    dirac = tuple(DiracPoint(theta, branches, value)
                  for theta, branches, value in dirac_points_on_tube(p))

    hill = hill_bands(spec, hi, lo, step, steps)
    return SpectrumReport(p, spec, (lo, hi), ac, hill, tuple(pieces),
                          pp.sigma_D, pp.sigma_0, case, dirac, tuple(notes))
