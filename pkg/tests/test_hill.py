import math
import os
import tempfile
from unittest import TestCase

import numpy as np
from hypothesis import given, settings
from hypothesis.strategies import floats, sampled_from
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from tubespectra.exceptions import (DomainError, PotentialError,
                                    PreconditionError)
from tubespectra.hill import (HillOperator, hill_operator, evaluate_potential,
                              monodromy, discriminant, eta,
                              discriminant_array, dirichlet_spectrum,
                              solve_D_equals, hill_band_list, hill_bands,
                              load_potential, _refine_roots,
                              SCAN_CACHE_SIZE)
from tubespectra.structures import PotentialSpec

ZERO = PotentialSpec.zero()
BATTERY = (ZERO, PotentialSpec.cosine(1), PotentialSpec.cosine(4),
           PotentialSpec.well(5, 0.4))
THETA0 = math.acos(-1.0 / 3.0)


def reference_monodromy(amplitude, lam):
    """Endpoint values from an adaptive integrator."""

    def rhs(x, y):
        g = amplitude * math.cos(2 * math.pi * x) - lam
        return [y[1], g * y[0], y[3], g * y[2]]

    sol = solve_ivp(rhs, (0.0, 1.0), [1.0, 0.0, 0.0, 1.0], method='DOP853',
                    rtol=1e-12, atol=1e-12)
    c1, c1p, s1, s1p = sol.y[:, -1]
    return c1, s1, c1p, s1p


class TestPotential(TestCase):

    def test_evaluate(self):
        self.assertEqual(evaluate_potential(ZERO, 0.37), 0.0)
        self.assertAlmostEqual(
            evaluate_potential(PotentialSpec.cosine(1), 0.25), 0.0)
        self.assertAlmostEqual(
            evaluate_potential(PotentialSpec.cosine(2), 0.5), -2.0)

    def test_evaluate_outside(self):
        with self.assertRaises(DomainError):
            evaluate_potential(ZERO, 1.5)
        with self.assertRaises(DomainError):
            evaluate_potential(ZERO, -0.1)

    def test_well_is_even(self):
        well = PotentialSpec.well(5, 0.4)
        xs = np.linspace(0, 1, 101)
        np.testing.assert_array_equal(well.evaluate_array(xs),
                                      well.evaluate_array(1 - xs))
        self.assertEqual(evaluate_potential(well, 0.5), -5.0)
        self.assertEqual(evaluate_potential(well, 0.1), 0.0)

    def test_bad_well(self):
        with self.assertRaises(PotentialError):
            PotentialSpec.well(1, 1.5)

    def test_sampled(self):
        spec = PotentialSpec.sampled([(0, 1), (0.5, 0), (1, 1)])
        self.assertAlmostEqual(evaluate_potential(spec, 0.25), 0.5)

    def test_sampled_uneven(self):
        with self.assertRaises(PotentialError):
            PotentialSpec.sampled([(0, 1), (0.5, 0), (1, 2)])

    def test_sampled_not_increasing(self):
        with self.assertRaises(PotentialError):
            PotentialSpec.sampled([(0, 1), (0.5, 0), (0.5, 0), (1, 1)])

    def test_sampled_bad_ends(self):
        with self.assertRaises(PotentialError):
            PotentialSpec.sampled([(0.1, 1), (0.9, 1)])


class TestLoadPotential(TestCase):

    def write(self, text):
        fd, path = tempfile.mkstemp(suffix='.csv')
        with os.fdopen(fd, 'w') as f:
            f.write(text)
        self.addCleanup(os.remove, path)
        return path

    def test_with_header(self):
        path = self.write('x,value\n0,2\n0.5,1\n1,2\n')
        spec = load_potential(path)
        self.assertEqual(spec.kind, 'sampled')
        self.assertEqual(len(spec.samples), 3)

    def test_malformed_row(self):
        path = self.write('0,2\n0.5,oops\n1,2\n')
        with self.assertRaises(PotentialError):
            load_potential(path)

    def test_missing_file(self):
        with self.assertRaises(PotentialError):
            load_potential('/nonexistent/potential.csv')


class TestMonodromy(TestCase):

    def test_free_at_pi_squared(self):
        m = monodromy(ZERO, math.pi**2)
        self.assertAlmostEqual(m.c1, -1.0, places=8)
        self.assertAlmostEqual(m.s1, 0.0, places=8)
        self.assertAlmostEqual(m.c1p, 0.0, places=8)
        self.assertAlmostEqual(m.s1p, -1.0, places=8)

    def test_free_below_zero(self):
        m = monodromy(ZERO, -1.0)
        self.assertAlmostEqual(m.c1, math.cosh(1), places=8)
        self.assertAlmostEqual(m.s1, math.sinh(1), places=8)
        self.assertAlmostEqual(m.c1p, math.sinh(1), places=8)
        self.assertAlmostEqual(m.s1p, math.cosh(1), places=8)

    def test_adaptive_reference(self):
        m = monodromy(PotentialSpec.cosine(1), 1.0)
        ref = reference_monodromy(1.0, 1.0)
        for got, want in zip((m.c1, m.s1, m.c1p, m.s1p), ref):
            self.assertAlmostEqual(got, want, delta=1e-8)

    def test_steps_precondition(self):
        with self.assertRaises(PreconditionError):
            HillOperator(ZERO, 8)

    def test_step_doubling(self):
        spec = PotentialSpec.cosine(1)
        coarse = hill_operator(spec, 2048)
        fine = hill_operator(spec, 4096)
        lams = [-20.0, 10.0, 100.0]
        for a, b in zip(coarse.propagate(lams), fine.propagate(lams)):
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)

    @settings(max_examples=20, deadline=None)
    @given(sampled_from(BATTERY), floats(-20, 100))
    def test_wronskian_and_evenness(self, spec, lam):
        m = monodromy(spec, lam)
        scale = max(1.0, abs(m.c1), abs(m.s1p))
        self.assertAlmostEqual(m.wronskian, 1.0, delta=1e-8 * scale**2)
        self.assertAlmostEqual(m.c1, m.s1p, delta=1e-7 * scale)


class TestDiscriminant(TestCase):

    def test_examples(self):
        self.assertAlmostEqual(discriminant(ZERO, math.pi**2), -2.0,
                               places=8)
        self.assertAlmostEqual(discriminant(ZERO, (math.pi / 2)**2), 0.0,
                               places=8)
        self.assertAlmostEqual(discriminant(ZERO, 0.0), 2.0, places=8)

    def test_eta(self):
        self.assertAlmostEqual(eta(ZERO, (math.pi / 2)**2), 0.0, places=8)
        self.assertAlmostEqual(eta(ZERO, THETA0**2), -1.0 / 3, places=8)
        spec = PotentialSpec.cosine(1)
        self.assertAlmostEqual(2 * eta(spec, 2.0), discriminant(spec, 2.0),
                               delta=1e-7)

    def test_free_closed_form(self):
        lams = np.linspace(0, 100, 501)
        np.testing.assert_allclose(discriminant_array(ZERO, lams),
                                   2 * np.cos(np.sqrt(lams)), atol=1e-8)
        lams = np.linspace(-20, 0, 101)
        np.testing.assert_allclose(discriminant_array(ZERO, lams),
                                   2 * np.cosh(np.sqrt(-lams)), atol=1e-8)


class TestDirichlet(TestCase):

    def test_free(self):
        spectrum = dirichlet_spectrum(ZERO, 100)
        self.assertEqual(len(spectrum), 3)
        for n, lam in enumerate(spectrum, 1):
            self.assertAlmostEqual(lam, (n * math.pi)**2, delta=1e-6)

    def test_free_below_first(self):
        self.assertEqual(dirichlet_spectrum(ZERO, 5).eigenvalues, ())

    def test_floor_precondition(self):
        with self.assertRaises(PreconditionError):
            dirichlet_spectrum(ZERO, -60)

    def test_shooting_oracle(self):
        spec = PotentialSpec.cosine(3)

        def s1(lam):
            return reference_monodromy(3.0, lam)[1]

        grid = np.arange(-5.0, 100.5, 1.0)
        values = [s1(x) for x in grid]
        expected = [brentq(s1, a, b, xtol=1e-12)
                    for a, b, fa, fb in zip(grid, grid[1:], values,
                                            values[1:])
                    if fa * fb < 0]

        got = dirichlet_spectrum(spec, 100).eigenvalues
        self.assertEqual(len(got), len(expected))
        for a, b in zip(got, expected):
            self.assertAlmostEqual(a, b, delta=1e-6)

    def test_interlacing(self):
        spec = PotentialSpec.cosine(4)
        op = hill_operator(spec)
        sigma_d = dirichlet_spectrum(spec, 60).eigenvalues
        grid, table = op.scan(op.floor(), 60.0)
        for a, b in zip(sigma_d, sigma_d[1:]):
            inner = table['s1'][(grid > a + 1e-6) & (grid < b - 1e-6)]
            self.assertTrue(np.all(inner > 0) or np.all(inner < 0))


class TestRootRefinement(TestCase):

    def test_brackets_against_brentq(self):
        a = np.array([1.0, 4.0, 0.5, 2.0])
        b = np.array([2.0, 5.0, 3.0, 3.0])
        shift = np.array([0.0, 0.0, 0.3, -0.9])

        def func(x, sel):
            return np.cos(x) - shift[sel]

        roots = _refine_roots(func, a, b, func(a, np.arange(4)),
                              func(b, np.arange(4)))
        for r, lo, hi, c in zip(roots, a, b, shift):
            want = brentq(lambda x: math.cos(x) - c, lo, hi, xtol=1e-14)
            self.assertAlmostEqual(r, want, delta=1e-10)

    def test_level_roots_against_brentq(self):
        spec = PotentialSpec.cosine(4)
        level = 0.7

        def f(lam):
            return discriminant(spec, lam) - level

        grid = np.arange(-5.0, 40.0001, 0.05)
        values = discriminant_array(spec, grid) - level
        expected = [brentq(f, x, y, xtol=1e-13)
                    for x, y, fx, fy in zip(grid, grid[1:], values,
                                            values[1:])
                    if fx * fy < 0]

        got = solve_D_equals(spec, level, 40)
        self.assertEqual(len(got), len(expected))
        for x, y in zip(got, expected):
            self.assertAlmostEqual(x, y, delta=1e-9)


class TestScanCache(TestCase):

    def test_shared_and_read_only(self):
        op = hill_operator(PotentialSpec.cosine(2))
        grid, table = op.scan(0, 10, 0.5)
        again, _ = op.scan(0.0, 10.0, 0.5)
        self.assertIs(grid, again)
        with self.assertRaises(ValueError):
            table['D'][0] = 0.0

    def test_bounded(self):
        op = hill_operator(PotentialSpec.cosine(2))
        for i in range(SCAN_CACHE_SIZE + 8):
            op.scan(float(i), i + 1.0, 0.5)
        info = HillOperator._scan.cache_info()
        self.assertLessEqual(info.currsize, SCAN_CACHE_SIZE)


class TestLevelSets(TestCase):

    def test_two_thirds(self):
        a = math.acos(1.0 / 3)
        roots = solve_D_equals(ZERO, 2.0 / 3, 30)
        self.assertEqual(len(roots), 2)
        self.assertAlmostEqual(roots[0], a**2, delta=1e-8)
        self.assertAlmostEqual(roots[1], (2 * math.pi - a)**2, delta=1e-8)

    def test_tangent_minus_two(self):
        roots = solve_D_equals(ZERO, -2.0, 15)
        self.assertEqual(len(roots), 1)
        self.assertAlmostEqual(roots[0], math.pi**2, delta=1e-8)

    def test_zero_level(self):
        roots = solve_D_equals(ZERO, 0.0, 10)
        self.assertEqual(len(roots), 1)
        self.assertAlmostEqual(roots[0], (math.pi / 2)**2, delta=1e-8)

    def test_roots_hit_level(self):
        spec = PotentialSpec.cosine(1)
        for c in (-1.5, 0.3, 1.9):
            for lam in solve_D_equals(spec, c, 40):
                self.assertAlmostEqual(discriminant(spec, lam), c, delta=1e-7)


class TestHillBands(TestCase):

    def test_free_has_no_gaps(self):
        bands = hill_bands(ZERO, 50)
        self.assertEqual(len(bands), 1)
        lo, hi = bands[0]
        self.assertAlmostEqual(lo, 0.0, delta=1e-8)
        self.assertEqual(hi, 50.0)

    def test_free_band_list(self):
        bands = hill_band_list(ZERO, 50)
        self.assertEqual([b.index for b in bands], [0, 1, 2])
        self.assertAlmostEqual(bands[0].hi, math.pi**2, delta=1e-8)
        self.assertAlmostEqual(bands[1].hi, 4 * math.pi**2, delta=1e-8)
        self.assertTrue(bands[2].truncated)

    def test_cosine_gaps_open(self):
        spec = PotentialSpec.cosine(4)
        bands = hill_bands(spec, 50)
        gaps = bands.gaps()
        self.assertGreaterEqual(len(gaps), 1)
        mids = np.array([0.5 * (a + b) for a, b in gaps])
        self.assertTrue(np.all(np.abs(discriminant_array(spec, mids)) > 2))
        inside = np.array([0.5 * (a + b) for a, b in bands])
        self.assertTrue(
            np.all(np.abs(discriminant_array(spec, inside)) <= 2))

    def test_below_spectrum(self):
        self.assertFalse(hill_bands(ZERO, -1))
