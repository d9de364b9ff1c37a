"""
The command line front end.
"""

# libraries
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from docopt import docopt, DocoptExit

from .config import PKG_NAME, VERSION, SCAN_STEP, RK_STEPS
from .exceptions import (TubeSpectraError, InvalidTubeError, PotentialError,
                         UsageError, ValidationError)
from .cli_utils import (set_logger, parse_pair, parse_float, parse_int,
                        parse_potential, write_csv, write_json)
from .dispersion import surface
from .graph_oracle import (graphyne_config, dispersion_check, nullspace_table,
                           build_compact_eigenfunction, loop_states,
                           first_level_point)
from .hill import hill_operator, dirichlet_spectrum
from .quasimomentum import reduce, segments
from .ranges import range_union, oracle_comparison
from .spectra import (window_floor, band_decomposition, pure_point,
                      full_report)
from .structures import TubeVector, ReducedVector, PotentialSpec

# help text
HELP = """
Spectra of Schroedinger operators on graphyne nanotubes.

Usage:
    {p} <command> [options]
    {p} -h | --help
    {p} -V | --version

Commands:
    discriminant         Table of lambda, D(lambda), eta(lambda).
    dirichlet            The Dirichlet eigenvalues of the edge.
    dispersion-surface   F1, F2, F3 on a grid of the Brillouin zone.
    segments             The segments of V_q (needs --p or --q).
    range                F1, F2, F3 ranges over V_q (needs --p or --q).
    bands                Absolutely continuous bands of T_p (needs --p).
    gaps                 Gaps per Hill band of T_p (needs --p).
    pure-point           Dirichlet and extra eigenvalues of T_p (needs --p).
    report               The whole spectrum of T_p as JSON (needs --p).
    validate             Oracle checks for T_p (needs --p).
    eigenfunction        Compactly supported eigenfunctions on T_p
                         (needs --p; loop states unless --eta is given).

Options:
    --p=PAIR              Winding vector p1,p2 of the tube.
    --q=PAIR              Reduced vector q1,q2.
    --potential=SPEC      zero, cosine:A, well:DEPTH:WIDTH or file:PATH
                          [default: zero].
    --lambda-min=VALUE    Lower end of the lambda window
                          (default: min(0, min q0) - 1).
    --lambda-max=VALUE    Upper end of the lambda window [default: 10].
    --grid=N              Points per axis of the dispersion surface
                          [default: 50].
    --step=VALUE          Lambda spacing of the discriminant table and of
                          every root scan [default: 0.05].
    --steps=N             Runge-Kutta steps per edge [default: 2048].
    --points=N            Finite-difference points per edge [default: 200].
    --samples=N           Quasimomentum samples of validate [default: 20].
    --tol=VALUE           Residual tolerance of validate
                          (default: 2e-2, or 5e-2 for a nonzero potential).
    --rings=N             Cell layers spanned by eigenfunctions [default: 2].
    --eta=VALUE           Target eta of the eigenfunction search.
    --oracle              Add brute-force ranges to the range output.
    --out=FORMAT          Output format, csv or json.
    -o FILE, --output=FILE  Write the result to FILE.
    -h, --help            Show this screen and exit.
    -l FILE, --log=FILE   Output messages to FILE.
    -q, --quiet           Show less messages.
    -v, --verbose         Show more messages.
    -V, --version         Show version.

""".format(p=PKG_NAME)

COMMANDS = ('discriminant', 'dirichlet', 'dispersion-surface', 'segments',
            'range', 'bands', 'gaps', 'pure-point', 'report', 'validate',
            'eigenfunction')
NEEDS_P = ('bands', 'gaps', 'pure-point', 'report', 'validate',
           'eigenfunction')
NEEDS_Q = ('segments', 'range')
JSON_ONLY = ('report', 'validate', 'eigenfunction')
DEFAULT_JSON = ('segments', 'range') + JSON_ONLY

KNOWN_FLAGS = ('--p', '--q', '--potential', '--lambda-min', '--lambda-max',
               '--grid', '--step', '--steps', '--points', '--samples',
               '--tol', '--rings', '--eta', '--oracle', '--out', '-o',
               '--output', '-h', '--help', '-l', '--log', '-q', '--quiet',
               '-v', '--verbose', '-V', '--version')

# use logger
import logging as log
logger = log.getLogger('tubespectra')


# the application
@dataclass(frozen=True)
class RunConfig:
    """One validated command line."""
    command: str
    potential: PotentialSpec
    potential_source: str
    lambda_min: float
    lambda_max: float
    p: Optional[TubeVector] = None
    q: Optional[ReducedVector] = None
    grid: int = 50
    step: float = SCAN_STEP
    steps: int = RK_STEPS
    points: int = 200
    samples: int = 20
    tol: Optional[float] = None
    rings: int = 2
    eta: Optional[float] = None
    oracle: bool = False
    fmt: str = 'csv'
    output: Optional[str] = None
    log_level: int = 1
    log_file: Optional[str] = None

    @property
    def window(self):
        return (self.lambda_min, self.lambda_max)


def _offending_flag(argv):
    for token in argv:
        if token.startswith('-') and len(token) > 1:
            name = token.split('=', 1)[0]
            if name.startswith('--') or len(name) == 2:
                if name not in KNOWN_FLAGS:
                    return name
    return None


def parse_args(argv):
    """Validate a command line into a RunConfig.

    Raises:
        UsageError: naming the flag at fault.
    """
    argv = list(argv)
    try:
        args = docopt(HELP, argv=argv, version=VERSION)
    except DocoptExit:
        flag = _offending_flag(argv)
        if flag:
            raise UsageError('Unknown flag: {}'.format(flag))
        raise UsageError('Invalid command line: {}'.format(' '.join(argv)))

    command = args['<command>']
    if command not in COMMANDS:
        raise UsageError('Unknown command: {} (one of {})'.format(
            command, ', '.join(COMMANDS)))

    p = q = None
    if args['--p'] is not None:
        try:
            p = TubeVector(*parse_pair(args['--p'], '--p'))
        except InvalidTubeError as e:
            raise UsageError('--p: {}'.format(e))
    if args['--q'] is not None:
        try:
            q = ReducedVector(*parse_pair(args['--q'], '--q'))
        except InvalidTubeError as e:
            raise UsageError('--q: {}'.format(e))

    if command in NEEDS_P and p is None:
        raise UsageError('--p is required for {}'.format(command))
    if command in NEEDS_Q:
        if p is not None and q is not None:
            raise UsageError('--p and --q exclude each other')
        if p is None and q is None:
            raise UsageError('--p or --q is required for {}'.format(command))
        if q is None:
            q = reduce(p)

    fmt = args['--out']
    if fmt is None:
        fmt = 'json' if command in DEFAULT_JSON else 'csv'
    if fmt not in ('csv', 'json'):
        raise UsageError('--out: expected csv or json, got {!r}'.format(fmt))
    if fmt == 'csv' and command in JSON_ONLY:
        raise UsageError('--out: {} is written as json only'.format(command))

    try:
        spec = parse_potential(args['--potential'])
    except PotentialError as e:
        raise UsageError('--potential: {}'.format(e))
    lambda_max = parse_float(args['--lambda-max'], '--lambda-max')
    if args['--lambda-min'] is None:
        lambda_min = window_floor(spec)
    else:
        lambda_min = parse_float(args['--lambda-min'], '--lambda-min')
    if lambda_max <= lambda_min:
        raise UsageError('--lambda-max: {} is not above --lambda-min {}'.
                         format(lambda_max, lambda_min))

    step = parse_float(args['--step'], '--step')
    if step <= 0:
        raise UsageError('--step: must be positive, got {}'.format(step))
    tol = None
    if args['--tol'] is not None:
        tol = parse_float(args['--tol'], '--tol')
    eta = None
    if args['--eta'] is not None:
        eta = parse_float(args['--eta'], '--eta')

    log_level = 1  # info (default)
    if args['--quiet']:
        log_level = 0  # warn
    if args['--verbose']:
        log_level = 2  # debug

    return RunConfig(
        command=command,
        potential=spec,
        potential_source=args['--potential'],
        lambda_min=lambda_min,
        lambda_max=lambda_max,
        p=p,
        q=q,
        grid=parse_int(args['--grid'], '--grid', 2),
        step=step,
        steps=parse_int(args['--steps'], '--steps', 16),
        points=parse_int(args['--points'], '--points', 50),
        samples=parse_int(args['--samples'], '--samples', 1),
        tol=tol,
        rings=parse_int(args['--rings'], '--rings', 1),
        eta=eta,
        oracle=bool(args['--oracle']),
        fmt=fmt,
        output=args['--output'],
        log_level=log_level,
        log_file=args['--log'])


def _discriminant(config):
    lo, hi = config.window
    n = max(1, int(np.ceil((hi - lo) / config.step)))
    grid = np.linspace(lo, hi, n + 1)
    c1, _, _, s1p = hill_operator(config.potential,
                                  config.steps).propagate(grid)
    rows = list(zip(grid.tolist(), (c1 + s1p).tolist(), s1p.tolist()))
    header = ['lambda', 'D', 'eta']
    return header, rows, [dict(zip(header, r)) for r in rows]


def _dirichlet(config):
    spectrum = dirichlet_spectrum(config.potential, config.lambda_max,
                                  config.lambda_min, config.step,
                                  config.steps)
    rows = [(i, x) for i, x in enumerate(spectrum.eigenvalues, 1)]
    return ['index', 'lambda'], rows, spectrum.to_dict()


def _dispersion_surface(config):
    table = surface(config.grid)
    header = ['theta1', 'theta2', 'F1', 'F2', 'F3']
    rows = table.tolist()
    return header, rows, [dict(zip(header, r)) for r in rows]


def _segments(config):
    family = segments(config.q)
    rows = [(s.k, s.start.theta1, s.start.theta2, s.end.theta1,
             s.end.theta2, s.degenerate) for s in family]
    header = ['k', 'start_theta1', 'start_theta2', 'end_theta1',
              'end_theta2', 'degenerate']
    return header, rows, family.to_dict()


def _range(config):
    report = range_union(config.q)
    rows = []
    for name, ranges in (('F1', report.r1), ('F2', report.r2),
                         ('F3', report.r3), ('union', report.union)):
        rows.extend((name, lo, hi, report.case_label, report.gap_case)
                    for lo, hi in ranges)
    data = report.to_dict()
    if config.oracle:
        comparison = oracle_comparison(config.q)
        data['oracle'] = {str(j): v for j, v in comparison.items()}
        rows.extend(('oracle-F{}'.format(j), lo, hi, report.case_label,
                     report.gap_case)
                    for j, v in sorted(comparison.items())
                    for lo, hi in v['intervals'])
    header = ['range', 'lo', 'hi', 'case_label', 'gap_case']
    return header, rows, data


def _bands(config):
    pieces = band_decomposition(config.p, config.potential,
                                config.lambda_max, config.lambda_min,
                                config.step, config.steps)
    rows = [(lo, hi, b.hill_band_index, b.case)
            for b in pieces for lo, hi in b.ac]
    header = ['band_lo', 'band_hi', 'hill_band_index', 'case']
    return header, rows, [b.to_dict() for b in pieces]


def _gaps(config):
    pieces = band_decomposition(config.p, config.potential,
                                config.lambda_max, config.lambda_min,
                                config.step, config.steps)
    rows = [(lo, hi, b.hill_band_index, b.case)
            for b in pieces for lo, hi in b.gaps]
    header = ['gap_lo', 'gap_hi', 'hill_band_index', 'case']
    return header, rows, [b.to_dict() for b in pieces]


def _pure_point(config):
    pp = pure_point(config.p, config.potential, config.lambda_max,
                    config.lambda_min, config.step, config.steps)
    rows = [('dirichlet', x, '', '') for x in pp.sigma_D]
    rows.extend(('extra', s.lam, s.eta_value, s.family) for s in pp.sigma_0)
    rows.sort(key=lambda r: r[1])
    return ['kind', 'lambda', 'eta', 'family'], rows, pp.to_dict()


def _report(config):
    report = full_report(config.p, config.potential, config.window,
                         config.step, config.steps)
    return None, None, report.to_dict()


def _validate(config):
    spec = config.potential
    tol = config.tol
    if tol is None:
        tol = 2e-2 if spec.kind == 'zero' else 5e-2

    check = dispersion_check(graphyne_config(), config.p, spec,
                             config.samples, config.points, tol,
                             config.lambda_max, strict=False,
                             step=config.step)
    table = nullspace_table(cases=(config.p.to_list(),), rings=config.rings,
                            spec=spec, step=config.step)
    comparison = oracle_comparison(reduce(config.p))

    passed = (check.passed and all(row.ok for row in table)
              and all(v['hausdorff'] <= 2e-3 for v in comparison.values()))
    data = {
        'p': config.p.to_list(),
        'dispersion': check.to_dict(),
        'nullspace': [{'eta': row.eta, 'lambda': row.lam,
                       'dimension': row.dimension,
                       'predicted': row.predicted, 'ok': row.ok}
                      for row in table],
        'ranges': {str(j): v for j, v in comparison.items()},
        'passed': passed,
    }
    return None, None, data


def _eigenfunction(config):
    spec = config.potential
    if config.eta is None:
        sigma_d = dirichlet_spectrum(spec, config.lambda_max,
                                     step=config.step).eigenvalues
        if not sigma_d:
            raise UsageError('--lambda-max: no Dirichlet eigenvalue below {}'.
                             format(config.lambda_max))
        states = loop_states(config.p, sigma_d[0], config.rings, spec)
    else:
        lam = first_level_point(spec, config.eta, config.lambda_max,
                                config.step)
        states = build_compact_eigenfunction(config.p, config.eta, lam,
                                             config.rings, spec)
    return None, None, states.to_dict()


HANDLERS = {
    'discriminant': _discriminant,
    'dirichlet': _dirichlet,
    'dispersion-surface': _dispersion_surface,
    'segments': _segments,
    'range': _range,
    'bands': _bands,
    'gaps': _gaps,
    'pure-point': _pure_point,
    'report': _report,
    'validate': _validate,
    'eigenfunction': _eigenfunction,
}


def _emit(config, header, rows, data, f):
    if config.fmt == 'csv':
        write_csv(f, header, rows)
    else:
        write_json(f, data)


def run(config):
    """Execute one RunConfig.

    Returns:
        int: 0 on success, 1 when validate finds a mismatch, 2 on usage or
        input errors.
    """
    logger.debug('Selected command: {}'.format(config.command))
    try:
        header, rows, data = HANDLERS[config.command](config)
        if config.output:
            with open(config.output, 'w', newline='', encoding='utf-8') as f:
                _emit(config, header, rows, data, f)
            logger.info('Wrote {}'.format(config.output))
        else:
            _emit(config, header, rows, data, sys.stdout)

    except ValidationError as e:
        logger.error('{} ({} failures)'.format(e, len(e.failures)))
        return 1
    except TubeSpectraError as e:
        logger.error(str(e))
        return 2
    except OSError as e:
        logger.error('Cannot write {}: {}'.format(config.output, e))
        return 2

    if config.command == 'validate' and not data['passed']:
        logger.error('Validation failed for p = ({},{})'.format(
            config.p.p1, config.p.p2))
        return 1
    return 0


def main(argv=None):
    """The main function.

    1. parse command line options
    2. setup the logger
    3. run the command
    """
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
    except TubeSpectraError as e:
        set_logger(1, None)
        logger.error(str(e))
        return 2

    set_logger(config.log_level, config.log_file)
    return run(config)
