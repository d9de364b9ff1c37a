"""
The graph oracle module.

Independent checks of the analytic description: a periodic graph whose
Bloch determinant is the dispersion cubic, a finite-difference Floquet
solver on it, and nullspace searches for compactly supported
eigenfunctions on the tube.
"""

# libraries
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy import linalg, sparse

from .config import thread_count, SCAN_STEP
from .dispersion import solve_F, cubic
from .exceptions import (AssemblyError, InvalidConfigError,
                         PreconditionError, ValidationError)
from .hill import (monodromy, dirichlet_spectrum, discriminant_array,
                   solve_D_equals)
from .quasimomentum import reduce, segments, unfold, contains
from .spectra import sigma_zero_targets
from .structures import PotentialSpec, Theta, TubeVector

# use logger
from logging import getLogger
logger = getLogger('tubespectra')

IDENTITY_TOL = 1e-12
HERMITIAN_TOL = 1e-12
VERTEX_RCOND = 1e-9
EDGE_RCOND = 1e-7
RESIDUAL_TOL = 1e-8

# the tube grid checked by the validate command
NULLSPACE_CASES = ((2, 0), (4, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 6),
                   (0, 8), (1, 1), (3, 0))
ETA_TARGETS = (-1.0 / 3, 0.0, 1.0 / 3)

NullspaceRow = namedtuple(
    'NullspaceRow', ['p', 'eta', 'lam', 'dimension', 'predicted', 'ok'])


# the module
@dataclass(frozen=True)
class GraphEdge:
    """An edge from u in cell (0,0) to v in cell shift, unit length."""
    u: str
    v: str
    shift: Tuple[int, int]


@dataclass(frozen=True)
class PeriodicGraphConfig:
    vertex_names: Tuple[str, ...]
    edges: Tuple[GraphEdge, ...]

    def index(self, name):
        return self.vertex_names.index(name)

    def degrees(self):
        deg = np.zeros(len(self.vertex_names))
        for e in self.edges:
            deg[self.index(e.u)] += 1
            deg[self.index(e.v)] += 1
        return deg

    def to_dict(self):
        return {
            'vertices': list(self.vertex_names),
            'edges': [{'u': e.u, 'v': e.v, 'shift': list(e.shift)}
                      for e in self.edges],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d['vertices']),
                   tuple(GraphEdge(e['u'], e['v'], tuple(e['shift']))
                         for e in d['edges']))


@dataclass(frozen=True)
class EdgePiece:
    """alpha c(x) + beta s(x) on the copy of an edge whose tail is in cell."""
    edge: int
    cell: Tuple[int, int]
    alpha: float
    beta: float


@dataclass(frozen=True)
class EdgeFunction:
    pieces: Tuple[EdgePiece, ...]
    continuity_residual: float
    kirchhoff_residual: float

    @property
    def support(self):
        return {(piece.edge, piece.cell) for piece in self.pieces}

    def to_dict(self):
        return {
            'pieces': [{'edge': x.edge, 'cell': list(x.cell),
                        'alpha': x.alpha, 'beta': x.beta}
                       for x in self.pieces],
            'continuity_residual': self.continuity_residual,
            'kirchhoff_residual': self.kirchhoff_residual,
        }


@dataclass(frozen=True)
class CompactStates:
    p: TubeVector
    lam: float
    eta_target: Optional[float]
    rings: int
    dimension: int
    basis: Tuple[EdgeFunction, ...]

    def to_dict(self):
        return {
            'p': self.p.to_list(),
            'lambda': self.lam,
            'eta_target': self.eta_target,
            'rings': self.rings,
            'dimension': self.dimension,
            'basis': [f.to_dict() for f in self.basis],
        }


@dataclass(frozen=True)
class DispersionCheck:
    p: TubeVector
    samples: int
    eigenvalues: int
    worst_residual: float
    failures: Tuple[Tuple[Theta, float, float], ...]

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {
            'p': self.p.to_list(),
            'samples': self.samples,
            'eigenvalues': self.eigenvalues,
            'worst_residual': self.worst_residual,
            'passed': self.passed,
            'failures': [{'theta': t.to_list(), 'lambda': lam,
                          'residual': r} for t, lam, r in self.failures],
        }


def bloch_adjacency(config, theta):
    """A(theta): Floquet-weighted adjacency of the cell vertices."""
    n = len(config.vertex_names)
    a = np.zeros((n, n), dtype=complex)
    for e in config.edges:
        i, j = config.index(e.u), config.index(e.v)
        phase = np.exp(1j * (e.shift[0] * theta.theta1 +
                             e.shift[1] * theta.theta2))
        a[i, j] += phase
        a[j, i] += np.conj(phase)
    return a


def char_poly(config, theta, x):
    """det(x Deg - A(theta)), real since A(theta) is Hermitian."""
    m = x * np.diag(config.degrees()) - bloch_adjacency(config, theta)
    if m.shape != (3, 3):
        return float(np.linalg.det(m).real)
    det = (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
           - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
           + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))
    return float(det.real)


def identity_residual(config, samples=100, seed=0):
    """Worst |det(x Deg - A) - 4 * cubic| over random (theta, x)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t1, t2 in rng.uniform(-math.pi, math.pi, size=(samples, 2)):
        theta = Theta(t1, t2)
        for x in rng.uniform(-1.0, 1.0, size=5):
            target = 4.0 * cubic(x, t1, t2)
            worst = max(worst, abs(char_poly(config, theta, x) - target))
    return worst


def validate_config(config):
    worst = identity_residual(config)
    if worst > IDENTITY_TOL:
        raise InvalidConfigError(
            'Bloch determinant misses 4 * dispersion cubic by {:.3g}'.format(
                worst))
    return config


@lru_cache(maxsize=1)
def graphyne_config():
    """Cell {A, B, C}; degrees (4, 3, 3)."""
    config = PeriodicGraphConfig(
        ('A', 'B', 'C'),
        (GraphEdge('A', 'B', (0, 0)),
         GraphEdge('A', 'B', (1, 0)),
         GraphEdge('A', 'C', (0, 0)),
         GraphEdge('A', 'C', (1, 0)),
         GraphEdge('B', 'C', (0, 1))))
    logger.info('Graphyne cell: {} vertices, {} edges'.format(
        len(config.vertex_names), len(config.edges)))
    return validate_config(config)


def fd_eigenvalues(config, theta, spec, points_per_edge, lambda_max):
    """Eigenvalues <= lambda_max of the discretized Bloch Hamiltonian.

    Each edge carries points_per_edge - 1 interior nodes; vertex values are
    shared by the incident edges. The quadratic form sum |f'|^2 + q |f|^2
    is assembled with the Floquet phase on the last segment of shifted
    edges and a lumped mass (h inside, deg * h / 2 at vertices), which
    folds the Kirchhoff condition into the vertex rows.
    """
    n = int(points_per_edge)
    if n < 50:
        raise PreconditionError(
            'points_per_edge must be at least 50, got {}'.format(n))

    h = 1.0 / n
    nv, m = len(config.vertex_names), n - 1
    size = nv + len(config.edges) * m

    q_inner = spec.evaluate_array(np.arange(1, n) * h)
    q_end = float(spec.evaluate_array(0.0))

    mass = np.full(size, h)
    mass[:nv] = config.degrees() * h / 2.0
    diag = np.zeros(size, dtype=complex)
    diag[:nv] += q_end * mass[:nv]

    rows, cols, vals = [], [], []
    for k, e in enumerate(config.edges):
        base = nv + k * m
        nodes = np.concatenate([[config.index(e.u)],
                                np.arange(base, base + m),
                                [config.index(e.v)]])
        phase = np.ones(n, dtype=complex)
        phase[-1] = np.exp(1j * (e.shift[0] * theta.theta1 +
                                 e.shift[1] * theta.theta2))
        tail, head = nodes[:-1], nodes[1:]
        np.add.at(diag, tail, 1.0 / h)
        np.add.at(diag, head, 1.0 / h)
        rows.extend([tail, head])
        cols.extend([head, tail])
        vals.extend([-phase / h, -np.conj(phase) / h])
        diag[base:base + m] += q_inner * h

    stiff = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size)).tocsr() + sparse.diags(diag)
    scale = sparse.diags(1.0 / np.sqrt(mass))
    ham = (scale @ stiff @ scale).toarray()

    skew = np.max(np.abs(ham - ham.conj().T))
    if skew > HERMITIAN_TOL * max(1.0, np.max(np.abs(ham))):
        raise AssemblyError(
            'Bloch Hamiltonian is not Hermitian (skew {:.3g})'.format(skew))

    lams = linalg.eigh(ham, eigvals_only=True,
                       subset_by_value=(-np.inf, lambda_max))
    logger.debug('theta = ({:.4f},{:.4f}): {} eigenvalues <= {}'.format(
        theta.theta1, theta.theta2, len(lams), lambda_max))
    return sorted(lams.tolist())


def fd_convergence_ratio(config, theta, exact, spec=None, coarse=100,
                         fine=200):
    """Error ratio of the eigenvalue nearest ``exact`` at two resolutions."""
    spec = spec or PotentialSpec.zero()
    errors = []
    for n in (coarse, fine):
        lams = fd_eigenvalues(config, theta, spec, n, exact + 1.0)
        errors.append(min(abs(x - exact) for x in lams))
    return errors[0] / errors[1]


def sample_tube(p, count):
    """count quasimomenta of B_p spread over the segments of V_q."""
    segs = [s for s in segments(reduce(p)) if not s.degenerate]
    per = int(math.ceil(count / len(segs)))
    out = []
    for i in range(count):
        seg = segs[i % len(segs)]
        t = (i // len(segs) + 0.5) / per
        out.append(unfold(p, seg.point(t)))
    return out


def dispersion_check(config, p, spec, theta_samples, points_per_edge, tol,
                     lambda_max=10.0, strict=True, step=SCAN_STEP):
    """Match finite-difference eigenvalues over B_p against D = 2 F_j.

    An eigenvalue passes when some sheet satisfies |D(lambda) - 2 F_j| <= tol
    or it lies within tol of a Dirichlet eigenvalue.

    Raises:
        ValidationError: with the unmatched (theta, lambda, residual) when
            strict.
    """
    p = p if isinstance(p, TubeVector) else TubeVector(*p)
    thetas = sample_tube(p, theta_samples)
    for theta in thetas:
        if not contains(p, theta):
            raise PreconditionError('Sample {} is not in B_p'.format(theta))

    sigma_d = np.array(dirichlet_spectrum(spec, lambda_max + 1.0,
                                          step=step).eigenvalues)

    def solve(theta):
        return fd_eigenvalues(config, theta, spec, points_per_edge,
                              lambda_max)

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        spectra = list(pool.map(solve, thetas))

    flat = np.array([lam for lams in spectra for lam in lams])
    d_vals = discriminant_array(spec, flat) if flat.size else np.zeros(0)

    worst, failures, cursor = 0.0, [], 0
    for theta, lams in zip(thetas, spectra):
        f = np.array(solve_F(theta).as_tuple())
        for lam in lams:
            r = float(np.min(np.abs(d_vals[cursor] - 2.0 * f)))
            if sigma_d.size:
                r = min(r, float(np.min(np.abs(sigma_d - lam))))
            worst = max(worst, r)
            if r > tol:
                failures.append((theta, lam, r))
            cursor += 1

    report = DispersionCheck(p, len(thetas), int(flat.size), worst,
                             tuple(failures))
    logger.info('Dispersion check p = ({},{}): {} eigenvalues, worst '
                'residual {:.3g}'.format(p.p1, p.p2, flat.size, worst))
    if failures and strict:
        raise ValidationError(
            '{} eigenvalues off the dispersion relation'.format(
                len(failures)), failures)
    return report


def _bezout(a, b):
    """(x, y) with a x + b y = gcd(|a|, |b|)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    r0, r1 = abs(a), abs(b)
    while r1:
        k = r0 // r1
        r0, r1 = r1, r0 - k * r1
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return (x0 if a >= 0 else -x0), (y0 if b >= 0 else -y0)


class TubeLattice:
    """Cells of T_p labelled (a, b): a in Z_g around the tube, b along it.

    With g = gcd(p), p' = p / g and p'1 r2 - p'2 r1 = 1, the cell n of the
    plane maps to a = n1 r2 - n2 r1 mod g and b = p'1 n2 - p'2 n1; the map
    is unimodular and sends p to (g, 0).
    """

    def __init__(self, p, config):
        self.p = p
        self.config = config
        self.g = math.gcd(abs(p.p1), abs(p.p2))
        self.pp = (p.p1 // self.g, p.p2 // self.g)
        x, y = _bezout(*self.pp)
        self.r = (-y, x)

    def cell(self, n1, n2):
        r1, r2 = self.r
        return ((n1 * r2 - n2 * r1) % self.g,
                self.pp[0] * n2 - self.pp[1] * n1)

    def plane(self, cell):
        a, b = cell
        r1, r2 = self.r
        return (self.pp[0] * a + r1 * b, self.pp[1] * a + r2 * b)

    def head_cell(self, edge, tail):
        n1, n2 = self.plane(tail)
        s = self.config.edges[edge].shift
        return self.cell(n1 + s[0], n2 + s[1])

    def tail_cell(self, edge, head):
        n1, n2 = self.plane(head)
        s = self.config.edges[edge].shift
        return self.cell(n1 - s[0], n2 - s[1])

    def ends(self, edge, tail):
        e = self.config.edges[edge]
        return (e.u, tail), (e.v, self.head_cell(edge, tail))

    def incident(self, vertex):
        """(edge, tail cell, end) for every edge copy touching vertex."""
        name, cell = vertex
        out = []
        for k, e in enumerate(self.config.edges):
            if e.u == name:
                out.append((k, cell, 'tail'))
            if e.v == name:
                out.append((k, self.tail_cell(k, cell), 'head'))
        return out

    def ring_cells(self, rings):
        return [(a, b) for b in range(rings + 1) for a in range(self.g)]


def _residuals(lattice, pieces, mono):
    """Worst continuity and Kirchhoff defects of edgewise solutions."""
    values, fluxes = {}, {}
    scale = max([1.0] + [abs(x) for pc in pieces for x in (pc.alpha,
                                                            pc.beta)])
    for pc in pieces:
        tail, head = lattice.ends(pc.edge, pc.cell)
        at_head = pc.alpha * mono.c1 + pc.beta * mono.s1
        out_head = -(pc.alpha * mono.c1p + pc.beta * mono.s1p)
        values.setdefault(tail, []).append(pc.alpha)
        values.setdefault(head, []).append(at_head)
        fluxes[tail] = fluxes.get(tail, 0.0) + pc.beta
        fluxes[head] = fluxes.get(head, 0.0) + out_head

    continuity = 0.0
    for vertex, vals in values.items():
        touched = len(vals)
        full = len(lattice.incident(vertex))
        spread = max(vals) - min(vals)
        if touched < full:
            spread = max(spread, max(abs(v) for v in vals))
        continuity = max(continuity, spread)
    kirchhoff = max([0.0] + [abs(v) for v in fluxes.values()])
    return continuity / scale, kirchhoff / scale


def build_compact_eigenfunction(p, eta_target, lam, rings, spec=None):
    """Compactly supported eigenfunctions at lambda with eta(lambda) = target.

    Off the Dirichlet spectrum an eigenfunction is fixed by its vertex
    values f, and Kirchhoff reads sum over neighbours of f = eta deg f.
    Unknowns are the vertices of the cells b = 0..rings whose neighbours all
    lie in those cells; equations are imposed on them and on every vertex
    next to them.

    Returns:
        CompactStates
    """
    spec = spec or PotentialSpec.zero()
    p = p if isinstance(p, TubeVector) else TubeVector(*p)
    if rings < 1:
        raise PreconditionError('rings must be positive, got {}'.format(
            rings))

    mono = monodromy(spec, lam)
    if abs(mono.eta - eta_target) > RESIDUAL_TOL:
        raise PreconditionError(
            'eta({}) = {:.12g} does not match the target {:.12g}'.format(
                lam, mono.eta, eta_target))
    if abs(mono.s1) <= RESIDUAL_TOL:
        raise PreconditionError(
            'lambda = {} is a Dirichlet eigenvalue; use loop_states'.format(
                lam))

    config = graphyne_config()
    lattice = TubeLattice(p, config)
    cells = set(lattice.ring_cells(rings))
    deg = dict(zip(config.vertex_names, config.degrees().tolist()))

    def neighbours(vertex):
        out = []
        for k, tail, end in lattice.incident(vertex):
            t, h = lattice.ends(k, tail)
            out.append(h if end == 'tail' else t)
        return out

    support = [(name, c) for c in sorted(cells)
               for name in config.vertex_names]
    unknown = [v for v in support
               if all(w[1] in cells for w in neighbours(v))]
    column = {v: i for i, v in enumerate(unknown)}
    rows = list(unknown)
    for v in unknown:
        for w in neighbours(v):
            if w not in column and w not in rows:
                rows.append(w)

    matrix = np.zeros((len(rows), len(unknown)))
    for i, v in enumerate(rows):
        if v in column:
            matrix[i, column[v]] -= eta_target * deg[v[0]]
        for w in neighbours(v):
            if w in column:
                matrix[i, column[w]] += 1.0

    dimension = 0
    if unknown:
        kernel = linalg.null_space(matrix, rcond=VERTEX_RCOND)
        dimension = kernel.shape[1]

    basis = []
    for col in range(dimension):
        f = dict(zip(unknown, kernel[:, col].tolist()))
        pieces = []
        seen = set()
        for v in unknown:
            for k, tail, _ in lattice.incident(v):
                if (k, tail) in seen:
                    continue
                seen.add((k, tail))
                t, h = lattice.ends(k, tail)
                ft, fh = f.get(t, 0.0), f.get(h, 0.0)
                pieces.append(EdgePiece(k, tail, ft,
                                        (fh - ft * mono.c1) / mono.s1))
        continuity, kirchhoff = _residuals(lattice, pieces, mono)
        basis.append(EdgeFunction(tuple(pieces), continuity, kirchhoff))

    logger.info('p = ({},{}), eta = {:.4f}, rings = {}: dimension {}'.format(
        p.p1, p.p2, eta_target, rings, dimension))
    return CompactStates(p, float(lam), float(eta_target), rings, dimension,
                         tuple(basis))


def loop_states(p, lam, rings, spec=None):
    """Edgewise nullspace search on the cells b = 0..rings.

    Every edge copy with both ends in the support carries alpha c + beta s;
    vertices touching an edge outside the support are pinned to zero. This
    works at Dirichlet eigenvalues, where loop states live.

    Returns:
        CompactStates with eta_target None.
    """
    spec = spec or PotentialSpec.zero()
    p = p if isinstance(p, TubeVector) else TubeVector(*p)
    mono = monodromy(spec, lam)
    if abs(mono.s1) > 1e-6:
        logger.warning('lambda = {} is not a Dirichlet eigenvalue '
                       '(s1 = {:.3g})'.format(lam, mono.s1))

    config = graphyne_config()
    lattice = TubeLattice(p, config)
    cells = set(lattice.ring_cells(rings))

    edges = []
    for c in sorted(cells):
        for k in range(len(config.edges)):
            if lattice.head_cell(k, c) in cells:
                edges.append((k, c))
    column = {e: i for i, e in enumerate(edges)}

    vertices = {}
    for k, c in edges:
        t, h = lattice.ends(k, c)
        vertices.setdefault(t, []).append(((k, c), 'tail'))
        vertices.setdefault(h, []).append(((k, c), 'head'))

    def value_row(key, end):
        row = np.zeros(2 * len(edges))
        i = 2 * column[key]
        if end == 'tail':
            row[i] = 1.0
        else:
            row[i], row[i + 1] = mono.c1, mono.s1
        return row

    def flux_row(key, end):
        row = np.zeros(2 * len(edges))
        i = 2 * column[key]
        if end == 'tail':
            row[i + 1] = 1.0
        else:
            row[i], row[i + 1] = -mono.c1p, -mono.s1p
        return row

    equations = []
    for vertex, ends in vertices.items():
        pinned = len(ends) < len(lattice.incident(vertex))
        first = value_row(*ends[0])
        if pinned:
            equations.append(first)
        for end in ends[1:]:
            row = value_row(*end)
            equations.append(row if pinned else row - first)
        equations.append(sum(flux_row(*end) for end in ends))

    dimension = 0
    if edges:
        kernel = linalg.null_space(np.array(equations), rcond=EDGE_RCOND)
        dimension = kernel.shape[1]

    basis = []
    for col in range(dimension):
        coeffs = kernel[:, col]
        pieces = tuple(EdgePiece(k, c, float(coeffs[2 * i]),
                                 float(coeffs[2 * i + 1]))
                       for i, (k, c) in enumerate(edges)
                       if abs(coeffs[2 * i]) + abs(coeffs[2 * i + 1]) > 1e-12)
        continuity, kirchhoff = _residuals(lattice, pieces, mono)
        basis.append(EdgeFunction(pieces, continuity, kirchhoff))

    logger.info('Loop states p = ({},{}) at lambda = {}: dimension {}'.format(
        p.p1, p.p2, lam, dimension))
    return CompactStates(p, float(lam), None, rings, dimension, tuple(basis))


def first_level_point(spec, eta_value, lambda_max=20.0, step=SCAN_STEP):
    """Smallest lambda with D(lambda) = 2 eta_value."""
    roots = solve_D_equals(spec, 2.0 * eta_value, lambda_max, step=step)
    if not roots:
        raise PreconditionError(
            'No lambda <= {} with eta = {:.6g}'.format(lambda_max, eta_value))
    return roots[0]


def nullspace_table(cases=NULLSPACE_CASES, targets=ETA_TARGETS, rings=2,
                    spec=None, step=SCAN_STEP):
    """Existence of compact eigenfunctions against the predicted families."""
    spec = spec or PotentialSpec.zero()
    lams = {eta: first_level_point(spec, eta, step=step) for eta in targets}
    table = []
    for pair in cases:
        p = TubeVector(*pair)
        predicted_etas = [c for c, _ in sigma_zero_targets(p)]
        for eta in targets:
            states = build_compact_eigenfunction(p, eta, lams[eta], rings,
                                                 spec)
            predicted = any(math.isclose(eta, c, abs_tol=1e-12)
                            for c in predicted_etas)
            ok = (states.dimension >= 1) == predicted
            table.append(NullspaceRow(p, eta, lams[eta], states.dimension,
                                      predicted, ok))
    return table
