"""
The Hill operator module.

Monodromy matrix, discriminant D(lambda), eta(lambda), the Dirichlet
spectrum and the level sets D(lambda) = c of the 1-periodic operator
-d^2/dx^2 + q0 built from an even edge potential.
"""

# libraries
import csv
import math
from functools import lru_cache

import numpy as np

from .config import RK_STEPS, SCAN_STEP, SCAN_FLOOR, ROOT_TOL, ROOT_MAX_ITER
from .exceptions import DomainError, PotentialError, PreconditionError
from .intervals import IntervalSet
from .structures import PotentialSpec, Monodromy, DirichletSpectrum, HillBand

# use logger
from logging import getLogger
logger = getLogger('tubespectra')

# q0 is sampled this far inside each mesh piece
_EDGE_DELTA = 1e-12
# roots closer than this are the same root
_DEDUP_TOL = 1e-8
# tangential contacts of D with +-2 are taken at the Dirichlet points
_TANGENT_TOL = 1e-8
# lambda scans kept across calls, all operators together
SCAN_CACHE_SIZE = 32


# the module
def _mesh_nodes(spec, steps):
    """Integration nodes on [0, 1], uniform between breakpoints of q0."""
    if spec.kind == 'sampled' and len(spec.samples) - 1 >= steps:
        return np.array([s[0] for s in spec.samples], dtype=float)

    cuts = [0.0] + sorted(spec.breakpoints()) + [1.0]
    parts = []
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        n = max(1, int(round(steps * (b - a))))
        parts.append(np.linspace(a, b, n + 1)[:-1])
    parts.append(np.array([1.0]))
    return np.concatenate(parts)


class HillOperator:
    """The periodic operator -d^2/dx^2 + q0 on the unit edge.

    Integrates u'' = (q0 - lambda) u with classical fixed-step RK4 for a
    whole array of lambda values at once.
    """

    def __init__(self, spec, steps=RK_STEPS):
        """The constructor

        Args:
            spec (PotentialSpec): The edge potential.
            steps (int): Runge-Kutta steps on [0, 1] (at least 16).
        """
        if steps < 16:
            raise PreconditionError(
                'steps must be at least 16, got {}'.format(steps))

        self.spec = spec
        self.steps = steps

        nodes = _mesh_nodes(spec, steps)
        left, right = nodes[:-1], nodes[1:]
        h = right - left
        qa = spec.evaluate_array(np.minimum(left + _EDGE_DELTA, right))
        qm = spec.evaluate_array(0.5 * (left + right))
        qb = spec.evaluate_array(np.maximum(right - _EDGE_DELTA, left))
        self._plan = list(zip(h.tolist(), qa.tolist(), qm.tolist(),
                              qb.tolist()))

        logger.info('Hill operator for {} on {} RK4 steps'.format(
            spec.describe(), len(self._plan)))

    def floor(self):
        """Default lower end of lambda scans."""
        return min(SCAN_FLOOR, self.spec.minimum() - 1.0)

    def propagate(self, lams):
        """Endpoint values (c1, s1, c1p, s1p) for every lambda in ``lams``."""
        lam = np.atleast_1d(np.asarray(lams, dtype=float))
        u = np.zeros((2, lam.size))
        v = np.zeros((2, lam.size))
        u[0] = 1.0
        v[1] = 1.0

        for h, qa, qm, qb in self._plan:
            ga = qa - lam
            gm = qm - lam
            gb = qb - lam
            k1u = v
            k1v = ga * u
            k2u = v + 0.5 * h * k1v
            k2v = gm * (u + 0.5 * h * k1u)
            k3u = v + 0.5 * h * k2v
            k3v = gm * (u + 0.5 * h * k2u)
            k4u = v + h * k3v
            k4v = gb * (u + h * k3u)
            u = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)

        return u[0], u[1], v[0], v[1]

    def monodromy(self, lam):
        c1, s1, c1p, s1p = self.propagate([lam])
        return Monodromy(float(c1[0]), float(s1[0]), float(c1p[0]),
                         float(s1p[0]), float(lam))

    def values(self, quantity, lams):
        c1, s1, _, s1p = self.propagate(lams)
        if quantity == 'D':
            return c1 + s1p
        if quantity == 'eta':
            return s1p
        if quantity == 's1':
            return s1
        raise ValueError('Unknown quantity: {}'.format(quantity))

    def scan(self, lo, hi, step=SCAN_STEP):
        """Grid on [lo, hi] (both ends included) with the endpoint values.

        Results are shared through a bounded cache; treat the arrays as
        read-only.
        """
        return self._scan(float(lo), float(hi), float(step))

    @lru_cache(maxsize=SCAN_CACHE_SIZE)
    def _scan(self, lo, hi, step):
        n = max(1, int(math.ceil((hi - lo) / step)))
        grid = lo + step * np.arange(n + 1)
        grid[-1] = hi
        c1, s1, _, s1p = self.propagate(grid)
        table = {'D': c1 + s1p, 'eta': s1p, 's1': s1}
        for a in (grid, *table.values()):
            a.flags.writeable = False
        logger.debug('Scanned [{}, {}] at {} points'.format(
            lo, hi, grid.size))
        return grid, table

    def level_roots(self, quantity, targets, lo, hi, step=SCAN_STEP,
                    tol=ROOT_TOL):
        """Roots of quantity(lambda) = c on [lo, hi] for each c in targets.

        Sign changes on the scan grid are refined together; grid nodes where
        the difference vanishes exactly are roots as they stand.
        """
        targets = [float(c) for c in targets]
        found = [[] for _ in targets]
        if hi <= lo:
            return found

        grid, table = self.scan(lo, hi, step)
        vals = table[quantity]

        a, b, fa, fb, owner = [], [], [], [], []
        for i, c in enumerate(targets):
            f = vals - c
            found[i].extend(grid[f == 0.0].tolist())
            idx = np.flatnonzero(f[:-1] * f[1:] < 0.0)
            a.append(grid[idx])
            b.append(grid[idx + 1])
            fa.append(f[idx])
            fb.append(f[idx + 1])
            owner.append(np.full(idx.size, i))

        owner = np.concatenate(owner)
        if owner.size:
            shift = np.array(targets)[owner]

            def func(x, sel):
                return self.values(quantity, x) - shift[sel]

            roots = _refine_roots(func, np.concatenate(a), np.concatenate(b),
                                  np.concatenate(fa), np.concatenate(fb), tol)
            for i, r in zip(owner.tolist(), roots.tolist()):
                found[i].append(r)

        return [_dedupe(sorted(r)) for r in found]


def _refine_roots(func, a, b, fa, fb, tol=ROOT_TOL, max_iter=ROOT_MAX_ITER):
    """Vectorized Illinois regula falsi on sign-change brackets [a, b].

    Every fourth round is a plain bisection so each bracket keeps
    shrinking from both sides.
    """
    a, b = a.astype(float).copy(), b.astype(float).copy()
    fa, fb = fa.astype(float).copy(), fb.astype(float).copy()
    side = np.zeros(a.size, dtype=int)
    root = 0.5 * (a + b)
    active = np.abs(b - a) > tol

    for it in range(max_iter):
        sel = np.flatnonzero(active)
        if sel.size == 0:
            break

        ai, bi, fai, fbi = a[sel], b[sel], fa[sel], fb[sel]
        with np.errstate(divide='ignore', invalid='ignore'):
            c = (ai * fbi - bi * fai) / (fbi - fai)
        bad = ~np.isfinite(c) | (c <= ai) | (c >= bi)
        if it % 4 == 3:
            bad[:] = True
        c = np.where(bad, 0.5 * (ai + bi), c)
        fc = func(c, sel)

        hit = fc == 0.0
        move_a = np.sign(fc) == np.sign(fai)
        new_a = np.where(move_a, c, ai)
        new_fa = np.where(move_a, fc, fai)
        new_b = np.where(move_a, bi, c)
        new_fb = np.where(move_a, fbi, fc)

        last = side[sel]
        new_fb = np.where(move_a & (last == 1), 0.5 * new_fb, new_fb)
        new_fa = np.where(~move_a & (last == -1), 0.5 * new_fa, new_fa)
        side[sel] = np.where(move_a, 1, -1)

        a[sel], b[sel], fa[sel], fb[sel] = new_a, new_b, new_fa, new_fb
        root[sel] = np.where(hit, c, 0.5 * (new_a + new_b))
        done = hit | (new_b - new_a <= tol)
        active[sel[done]] = False

    if np.any(active):
        logger.warning('{} root brackets did not reach {:g}'.format(
            int(np.count_nonzero(active)), tol))
    return root


def _dedupe(values, tol=_DEDUP_TOL):
    out = []
    for v in values:
        if out and v - out[-1] <= tol:
            continue
        out.append(v)
    return out


@lru_cache(maxsize=32)
def hill_operator(spec, steps=RK_STEPS):
    """Shared HillOperator per (potential, steps)."""
    return HillOperator(spec, steps)


def scan_floor(spec):
    return hill_operator(spec).floor()


def evaluate_potential(spec, x):
    """q0(x) for x in [0, 1].

    Raises:
        DomainError: x outside [0, 1].
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError('x = {} is outside [0, 1]'.format(x))
    return float(spec.evaluate_array(x))


def monodromy(spec, lam, steps=RK_STEPS):
    return hill_operator(spec, steps).monodromy(lam)


def discriminant(spec, lam, steps=RK_STEPS):
    """D(lambda) = c1 + s1p."""
    return monodromy(spec, lam, steps).discriminant


def eta(spec, lam, steps=RK_STEPS):
    """eta(lambda) = s1p, also at Dirichlet points."""
    return monodromy(spec, lam, steps).eta


def discriminant_array(spec, lams, steps=RK_STEPS):
    return hill_operator(spec, steps).values('D', lams)


def eta_array(spec, lams, steps=RK_STEPS):
    return hill_operator(spec, steps).values('eta', lams)


def _window(op, lambda_min):
    return op.floor() if lambda_min is None else float(lambda_min)


def dirichlet_spectrum(spec, lambda_max, lambda_min=None, step=SCAN_STEP,
                       steps=RK_STEPS):
    """Zeros of s(1; lambda) on [lambda_min, lambda_max].

    Args:
        spec (PotentialSpec): The edge potential.
        lambda_max (float): The cutoff.
        lambda_min (float): Scan floor; defaults to min(-50, min q0 - 1).

    Returns:
        DirichletSpectrum
    """
    op = hill_operator(spec, steps)
    lo = _window(op, lambda_min)
    if lambda_max <= lo:
        raise PreconditionError(
            'lambda_max = {} must exceed the scan floor {}'.format(
                lambda_max, lo))

    roots, = op.level_roots('s1', [0.0], lo, float(lambda_max), step)
    return DirichletSpectrum(tuple(roots), float(lambda_max))


def solve_D_equals_many(spec, targets, lambda_max, lambda_min=None,
                        step=SCAN_STEP, steps=RK_STEPS):
    """Roots of D(lambda) = c for several c from one scan.

    Double contacts of D with +-2 happen only at Dirichlet points for even
    potentials, so those are added where |D - c| is within tolerance.
    """
    op = hill_operator(spec, steps)
    lo = _window(op, lambda_min)
    hi = float(lambda_max)
    found = op.level_roots('D', targets, lo, hi, step)

    if hi > lo and any(abs(abs(c) - 2.0) <= _TANGENT_TOL for c in targets):
        sigma_d = op.level_roots('s1', [0.0], lo, hi, step)[0]
        if sigma_d:
            d_vals = op.values('D', sigma_d)
            for i, c in enumerate(targets):
                hits = [x for x, d in zip(sigma_d, d_vals.tolist())
                        if abs(d - c) <= _TANGENT_TOL]
                if hits:
                    found[i] = _dedupe(sorted(found[i] + hits))
    return found


def solve_D_equals(spec, c, lambda_max, lambda_min=None, step=SCAN_STEP,
                   steps=RK_STEPS):
    """All roots of D(lambda) = c in the window, ascending."""
    return solve_D_equals_many(spec, [c], lambda_max, lambda_min, step,
                               steps)[0]


def hill_band_list(spec, lambda_max, lambda_min=None, step=SCAN_STEP,
                   steps=RK_STEPS):
    """Hill bands below lambda_max, indexed from the bottom of the spectrum.

    Band edges are roots of D = +-2 together with the Dirichlet points,
    which for even potentials also mark closed gaps. Touching bands stay
    separate.

    Returns:
        list of HillBand
    """
    op = hill_operator(spec, steps)
    lo = op.floor()
    hi = float(lambda_max)
    if hi <= lo:
        return []

    plus, minus = op.level_roots('D', [2.0, -2.0], lo, hi, step)
    sigma_d, = op.level_roots('s1', [0.0], lo, hi, step)
    roots = _dedupe(sorted(plus + minus + sigma_d))
    edges = _dedupe(sorted(set([lo] + [r for r in roots if lo < r < hi] +
                               [hi])))

    pieces = list(zip(edges, edges[1:]))
    if not pieces:
        return []
    mids = np.array([0.5 * (a + b) for a, b in pieces])
    inside = np.abs(op.values('D', mids)) <= 2.0

    window_lo = lo if lambda_min is None else float(lambda_min)
    bands = []
    index = 0
    for (a, b), ok in zip(pieces, inside.tolist()):
        if not ok:
            continue
        truncated = b == hi and not any(abs(r - hi) <= _DEDUP_TOL
                                        for r in roots)
        if b > window_lo:
            bands.append(HillBand(index, max(a, window_lo), b, truncated))
        index += 1

    logger.debug('{} Hill bands below {}'.format(len(bands), hi))
    return bands


def hill_bands(spec, lambda_max, lambda_min=None, step=SCAN_STEP,
               steps=RK_STEPS):
    """{lambda <= lambda_max : |D(lambda)| <= 2} as a normalized set."""
    bands = hill_band_list(spec, lambda_max, lambda_min, step, steps)
    return IntervalSet([(b.lo, b.hi) for b in bands])


def load_potential(path):
    """Read a sampled potential from a two-column (x,value) CSV file.

    The first row may be a header.

    Raises:
        PotentialError: unreadable file, malformed rows, or samples that
            break monotonicity or evenness.
    """
    rows = []
    seen = False
    try:
        with open(str(path), newline='', encoding='utf-8') as f:
            for lineno, row in enumerate(csv.reader(f), 1):
                if not ''.join(row).strip():
                    continue
                if len(row) != 2:
                    raise PotentialError(
                        '{}:{}: expected two columns (x,value)'.format(
                            path, lineno))
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    if seen:
                        raise PotentialError(
                            '{}:{}: not a number pair: {}'.format(
                                path, lineno, ','.join(row)))
                seen = True
    except OSError as e:
        raise PotentialError('Cannot read potential file {}: {}'.format(
            path, e))

    logger.info('Read {} potential samples from {}'.format(len(rows), path))
    return PotentialSpec.sampled(rows)
