import csv
import io
import json
import logging
import os
import tempfile
from contextlib import redirect_stdout
from logging.handlers import RotatingFileHandler
from unittest import TestCase

from tubespectra.cli import parse_args, run, main
from tubespectra.cli_utils import (parse_pair, parse_potential, format_number,
                                   set_logger, write_json)
from tubespectra.exceptions import UsageError
from tubespectra.spectra import full_report
from tubespectra.structures import (PotentialSpec, ReducedVector,
                                    SpectrumReport, TubeVector)


class TestParseArgs(TestCase):

    def test_bands(self):
        config = parse_args(['bands', '--p', '1,0', '--potential', 'zero',
                             '--lambda-max', '10'])
        self.assertEqual(config.command, 'bands')
        self.assertEqual(config.p, TubeVector(1, 0))
        self.assertEqual(config.potential, PotentialSpec.zero())
        self.assertEqual(config.window, (-1.0, 10.0))
        self.assertEqual(config.fmt, 'csv')

    def test_range(self):
        config = parse_args(['range', '--q', '3,0', '--oracle', '--out',
                             'json'])
        self.assertEqual(config.q, ReducedVector(3, 0))
        self.assertTrue(config.oracle)
        self.assertEqual(config.fmt, 'json')

    def test_range_from_p(self):
        config = parse_args(['range', '--p=-3,2'])
        self.assertEqual(config.q, ReducedVector(3, 2))
        self.assertEqual(config.fmt, 'json')

    def test_zero_p(self):
        with self.assertRaises(UsageError) as cm:
            parse_args(['bands', '--p', '0,0'])
        self.assertIn('p must be nonzero', str(cm.exception))

    def test_unknown_flag(self):
        with self.assertRaises(UsageError) as cm:
            parse_args(['bands', '--p', '1,0', '--bogus'])
        self.assertIn('--bogus', str(cm.exception))

    def test_unknown_command(self):
        with self.assertRaises(UsageError):
            parse_args(['spectrum', '--p', '1,0'])

    def test_malformed_pair(self):
        with self.assertRaises(UsageError) as cm:
            parse_args(['bands', '--p', '1;0'])
        self.assertIn('--p', str(cm.exception))

    def test_missing_p(self):
        with self.assertRaises(UsageError) as cm:
            parse_args(['gaps'])
        self.assertIn('--p', str(cm.exception))

    def test_p_and_q(self):
        with self.assertRaises(UsageError):
            parse_args(['segments', '--p', '1,0', '--q', '1,0'])

    def test_unreadable_potential(self):
        with self.assertRaises(UsageError) as cm:
            parse_args(['bands', '--p', '1,0', '--potential',
                        'file:/nonexistent/q.csv'])
        self.assertIn('--potential', str(cm.exception))

    def test_json_only(self):
        with self.assertRaises(UsageError):
            parse_args(['report', '--p', '1,0', '--out', 'csv'])

    def test_bad_format(self):
        with self.assertRaises(UsageError):
            parse_args(['bands', '--p', '1,0', '--out', 'xml'])

    def test_window_order(self):
        with self.assertRaises(UsageError):
            parse_args(['bands', '--p', '1,0', '--lambda-min', '5',
                        '--lambda-max', '2'])


class TestGrammar(TestCase):

    def test_pairs(self):
        self.assertEqual(parse_pair('1,0', '--p'), (1, 0))
        self.assertEqual(parse_pair('(-2, 3)', '--p'), (-2, 3))
        with self.assertRaises(UsageError):
            parse_pair('1,2,3', '--p')

    def test_potentials(self):
        self.assertEqual(parse_potential('cosine:2.5'),
                         PotentialSpec.cosine(2.5))
        self.assertEqual(parse_potential('well:5:0.4'),
                         PotentialSpec.well(5, 0.4))
        self.assertEqual(parse_potential('cosine:-1e-1'),
                         PotentialSpec.cosine(-0.1))
        with self.assertRaises(UsageError):
            parse_potential('square')

    def test_format_number(self):
        self.assertEqual(format_number(0.1 + 0.2), '0.3')
        self.assertEqual(format_number(3), '3')
        self.assertEqual(format_number(True), 'true')


class TestRun(TestCase):

    def output(self, argv):
        fd, path = tempfile.mkstemp()
        os.close(fd)
        self.addCleanup(os.remove, path)
        code = main(argv + ['-q', '-o', path])
        with open(path, encoding='utf-8') as f:
            return code, f.read()

    def test_dispersion_surface(self):
        code, text = self.output(['dispersion-surface', '--grid', '50'])
        self.assertEqual(code, 0)
        rows = list(csv.reader(io.StringIO(text)))
        self.assertEqual(rows[0], ['theta1', 'theta2', 'F1', 'F2', 'F3'])
        self.assertEqual(len(rows), 2501)
        self.assertTrue(all(len(r) == 5 for r in rows))

    def test_report(self):
        code, text = self.output(['report', '--p', '1,0', '--lambda-min',
                                  '0', '--lambda-max', '10'])
        self.assertEqual(code, 0)
        data = json.loads(text)
        self.assertEqual(len(data['ac_bands']), 3)
        report = SpectrumReport.from_dict(data)
        self.assertEqual(report, full_report(TubeVector(1, 0),
                                             PotentialSpec.zero(), (0, 10)))

    def test_bands_csv(self):
        code, text = self.output(['bands', '--p', '1,0', '--lambda-min', '0',
                                  '--lambda-max', '10'])
        self.assertEqual(code, 0)
        rows = list(csv.reader(io.StringIO(text)))
        self.assertEqual(rows[0],
                         ['band_lo', 'band_hi', 'hill_band_index', 'case'])
        self.assertEqual(len(rows), 5)
        self.assertAlmostEqual(float(rows[3][1]), 9.86960, delta=1e-5)
        self.assertEqual(rows[4][2], '1')

    def test_deterministic(self):
        argv = ['gaps', '--p', '3,0', '--potential', 'cosine:1']
        self.assertEqual(self.output(argv), self.output(argv))

    def test_discriminant(self):
        code, text = self.output(['discriminant', '--lambda-min', '0',
                                  '--lambda-max', '1', '--step', '0.25'])
        self.assertEqual(code, 0)
        rows = list(csv.reader(io.StringIO(text)))
        self.assertEqual(rows[0], ['lambda', 'D', 'eta'])
        self.assertEqual([r[0] for r in rows[1:]],
                         ['0', '0.25', '0.5', '0.75', '1'])

    def test_dirichlet(self):
        code, text = self.output(['dirichlet', '--lambda-max', '50'])
        self.assertEqual(code, 0)
        self.assertEqual(len(text.splitlines()), 3)

    def test_segments(self):
        code, text = self.output(['segments', '--q', '0,3'])
        self.assertEqual(code, 0)
        self.assertEqual(len(json.loads(text)['segments']), 2)

    def test_pure_point(self):
        code, text = self.output(['pure-point', '--p', '2,0',
                                  '--lambda-min', '0', '--lambda-max', '6'])
        self.assertEqual(code, 0)
        rows = list(csv.reader(io.StringIO(text)))
        self.assertEqual([r[0] for r in rows[1:]], ['extra'] * 3)

    def test_eigenfunction(self):
        code, text = self.output(['eigenfunction', '--p', '0,4', '--eta',
                                  '0'])
        self.assertEqual(code, 0)
        self.assertGreaterEqual(json.loads(text)['dimension'], 1)

    def test_validate(self):
        code, text = self.output(['validate', '--p', '0,2', '--samples', '4'])
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(text)['passed'])

    def test_usage_exit_code(self):
        self.assertEqual(main(['bands', '--p', '0,0', '-q']), 2)

    def test_stdout(self):
        config = parse_args(['segments', '--q', '1,0'])
        buf = io.StringIO()
        with redirect_stdout(buf):
            self.assertEqual(run(config), 0)
        self.assertEqual(json.loads(buf.getvalue())['q'], [1, 0])

    def test_step_reaches_band_scan(self):
        argv = ['bands', '--p', '0,2', '--potential', 'cosine:1',
                '--lambda-max', '45']
        code, text = self.output(argv + ['--step', '0.002'])
        self.assertEqual(code, 0)
        rows = list(csv.reader(io.StringIO(text)))[1:]
        self.assertEqual([r[2] for r in rows], ['0', '1', '2'])
        self.assertLess(float(rows[1][1]), float(rows[2][0]))

    def test_step_reaches_report(self):
        config = parse_args(['report', '--p', '1,0', '--step', '0.01',
                             '--steps', '1024'])
        self.assertEqual((config.step, config.steps), (0.01, 1024))
        code, text = self.output(['report', '--p', '1,0', '--lambda-min', '0',
                                  '--step', '0.01'])
        self.assertEqual(code, 0)
        self.assertEqual(len(json.loads(text)['ac_bands']), 3)


class TestWriters(TestCase):

    def test_json_non_finite(self):
        f = io.StringIO()
        write_json(f, {'a': float('inf'), 'b': [float('nan'), 1.5],
                       'c': (-float('inf'),)})
        text = f.getvalue()
        self.assertNotIn('Infinity', text)
        self.assertNotIn('NaN', text)
        self.assertEqual(json.loads(text),
                         {'a': 'inf', 'b': [None, 1.5], 'c': ['-inf']})


class TestLogger(TestCase):

    def tearDown(self):
        set_logger(0, None)

    def test_console(self):
        set_logger(2, None)
        logger = logging.getLogger('tubespectra')
        self.assertEqual(logger.level, logging.DEBUG)
        self.assertEqual([h.get_name() for h in logger.handlers],
                         ['tubespectra.console'])
        self.assertFalse(logger.propagate)

    def test_file(self):
        fd, path = tempfile.mkstemp()
        os.close(fd)
        self.addCleanup(os.remove, path)
        set_logger(0, path)
        logger = logging.getLogger('tubespectra')
        self.assertEqual(logger.level, logging.WARN)
        handler, = logger.handlers
        self.assertIsInstance(handler, RotatingFileHandler)
        self.assertEqual(handler.get_name(), 'tubespectra.file')

        logger.warning('lambda window clipped')
        handler.flush()
        with open(path, encoding='utf-8') as f:
            line = f.read()
        self.assertIn('WARNING', line)
        self.assertIn('[MainThread] lambda window clipped', line)
