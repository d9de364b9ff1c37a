import json
import math
from unittest import TestCase

from tubespectra.exceptions import PreconditionError
from tubespectra.dispersion import solve_F
from tubespectra.graph_oracle import sample_tube
from tubespectra.hill import eta, hill_band_list, solve_D_equals_many
from tubespectra.intervals import IntervalSet, hausdorff
from tubespectra.spectra import (NOTE_SC, window_floor, sigma_zero_targets,
                                 expected_gap_count, band_decomposition,
                                 ac_spectrum, gap_report, pure_point,
                                 full_report)
from tubespectra.structures import PotentialSpec, SpectrumReport, TubeVector

ZERO = PotentialSpec.zero()


def acos2(x):
    return math.acos(x)**2


class TestAcSpectrum(TestCase):

    def test_case_i_bands(self):
        ac = ac_spectrum((1, 0), ZERO, 10, 0)
        expected = [(0, 0.70740), (1.51526, 3.65052), (5.29241, 10)]
        self.assertEqual(len(ac), 3)
        for (a, b), (c, d) in zip(ac, expected):
            self.assertAlmostEqual(a, c, delta=1e-5)
            self.assertAlmostEqual(b, d, delta=1e-5)

    def test_case_i_first_hill_band(self):
        pieces = band_decomposition((1, 0), ZERO, 10, 0)
        self.assertEqual([b.hill_band_index for b in pieces], [0, 1])
        first = pieces[0]
        self.assertAlmostEqual(first.band[1], math.pi**2, delta=1e-8)
        self.assertAlmostEqual(first.ac.hi, 9.86960, delta=1e-5)
        self.assertEqual(len(first.gaps), 2)
        self.assertEqual(first.case, 'i')
        self.assertFalse(pieces[1].gaps)

    def test_case_iii_gaps(self):
        first = gap_report((0, 1), ZERO, 10, 0)[0]
        self.assertEqual(first.case, 'iii')
        expected = [(acos2(1.0 / 3), (math.pi / 2)**2),
                    (acos2(-2.0 / 3), math.pi**2)]
        self.assertEqual(len(first.gaps), 2)
        for (a, b), (c, d) in zip(first.gaps, expected):
            self.assertAlmostEqual(a, c, delta=1e-6)
            self.assertAlmostEqual(b, d, delta=1e-6)

    def test_case_ii_gaps(self):
        r = (1 + math.sqrt(7)) / 6
        first = gap_report((3, 0), ZERO, 10, 0)[0]
        self.assertEqual(first.case, 'ii')
        expected = [(acos2(2.0 / 3), acos2(r)), (acos2(-r), acos2(-2.0 / 3))]
        self.assertEqual(len(first.gaps), 2)
        for (a, b), (c, d) in zip(first.gaps, expected):
            self.assertAlmostEqual(a, c, delta=1e-6)
            self.assertAlmostEqual(b, d, delta=1e-6)
        self.assertAlmostEqual(first.gaps[0][1], 0.84104, delta=1e-5)
        self.assertAlmostEqual(first.gaps[1][0], 4.94844, delta=1e-5)

    def test_even_p2_has_no_gaps(self):
        for b in gap_report((1, 2), ZERO, 20):
            self.assertFalse(b.gaps)
            self.assertEqual(b.case, 'even-p2')

    def test_gap_counts(self):
        spec = PotentialSpec.cosine(4)
        battery = ((1, 0), (3, 0), (0, 1), (0, 3), (2, 3), (1, 1), (0, 2),
                   (2, 1), (-1, 3))
        for p in battery:
            pieces = gap_report(p, spec, 60)
            complete = [b for b in pieces if b.band[1] < 60]
            self.assertGreaterEqual(len(complete), 2, p)
            for b in complete:
                self.assertEqual(len(b.gaps), expected_gap_count(p), p)

    def test_case_iv_counts(self):
        self.assertEqual(expected_gap_count((2, 1)), 1)
        self.assertEqual(expected_gap_count((-1, 3)), 2)
        self.assertEqual(gap_report((2, 1), ZERO, 10)[0].case, 'iv')

    def test_even_p2_ac_is_hill_bands(self):
        report = full_report((0, 2), PotentialSpec.cosine(4), (0, 50))
        self.assertEqual(len(report.ac_bands), len(report.hill_bands))
        self.assertLessEqual(hausdorff(report.ac_bands, report.hill_bands),
                             1e-12)

    def test_direct_integral(self):
        for p, spec, top in (((1, 0), ZERO, 10),
                             ((2, 3), PotentialSpec.cosine(1), 30),
                             ((0, 3), PotentialSpec.well(5, 0.4), 30)):
            ac = ac_spectrum(p, spec, top)
            levels = [2.0 * x for theta in sample_tube(TubeVector(*p), 50)
                      for x in solve_F(theta).as_tuple()]
            roots = [lam for lams in solve_D_equals_many(spec, levels, top)
                     for lam in lams]
            self.assertTrue(roots)
            for lam in roots:
                self.assertTrue(ac.contains(lam, 1e-7), (p, lam))

    def test_fine_step_opens_narrow_gap(self):
        # second Mathieu gap of cosine(1) near 4 pi^2 is about 0.0127 wide
        spec = PotentialSpec.cosine(1)
        bands = hill_band_list(spec, 45, step=0.002)
        self.assertEqual([b.index for b in bands], [0, 1, 2])
        width = bands[2].lo - bands[1].hi
        self.assertGreater(width, 0.01)
        self.assertLess(width, 0.015)
        pieces = gap_report((0, 2), spec, 45, step=0.002)
        self.assertEqual([b.hill_band_index for b in pieces], [0, 1, 2])
        self.assertAlmostEqual(pieces[2].band[0], bands[2].lo, delta=1e-9)

    def test_cosine_bands_inside_hill_bands(self):
        spec = PotentialSpec.cosine(4)
        for b in band_decomposition((2, 3), spec, 30):
            self.assertTrue(b.ac.issubset(IntervalSet([b.band])))
            self.assertLessEqual((b.ac & b.gaps).measure(), 1e-12)
            self.assertAlmostEqual(b.ac.measure() + b.gaps.measure(),
                                   b.band[1] - b.band[0], delta=1e-8)

    def test_window(self):
        with self.assertRaises(PreconditionError):
            band_decomposition((1, 0), ZERO, -2)
        self.assertEqual(window_floor(ZERO), -1.0)
        self.assertEqual(window_floor(PotentialSpec.cosine(3)), -4.0)


class TestPurePoint(TestCase):

    def test_targets(self):
        self.assertEqual([c for c, _ in sigma_zero_targets((4, 0))],
                         [0.0, -1.0 / 3, 1.0 / 3])
        self.assertEqual(sigma_zero_targets((0, 3)), [(-1.0 / 3, 'flower')])
        self.assertEqual([f for _, f in sigma_zero_targets((0, 6))],
                         ['flower', 'mushroom'])
        self.assertEqual(len(sigma_zero_targets((0, 8))), 3)
        self.assertEqual(sigma_zero_targets((1, 1)), [])
        self.assertEqual(sigma_zero_targets((3, 0)), [])

    def test_bracelets(self):
        pp = pure_point((2, 0), ZERO, 6, 0)
        self.assertEqual(pp.sigma_D, ())
        lams = [s.lam for s in pp.sigma_0]
        for got, want in zip(lams, (1.51526, 2.46740, 3.65052)):
            self.assertAlmostEqual(got, want, delta=1e-5)
        self.assertEqual(len(lams), 3)
        for s in pp.sigma_0:
            self.assertAlmostEqual(eta(ZERO, s.lam), s.eta_value, delta=1e-7)

    def test_bracelets_on_gap_edges(self):
        ac = ac_spectrum((2, 0), ZERO, 6, 0)
        edges = ac.endpoints()
        for s in pure_point((2, 0), ZERO, 6, 0).sigma_0:
            if s.eta_value != 0.0:
                self.assertLess(min(abs(s.lam - e) for e in edges), 1e-7)

    def test_no_extra_eigenvalues(self):
        self.assertEqual(pure_point((1, 1), ZERO, 6, 0).sigma_0, ())

    def test_dirichlet_part(self):
        pp = pure_point((0, 2), ZERO, 50, 0)
        self.assertEqual(len(pp.sigma_D), 2)
        self.assertAlmostEqual(pp.sigma_D[0], math.pi**2, delta=1e-8)
        for s in pp.sigma_0:
            self.assertIn(s.family, ('flower', 'mushroom'))
            self.assertAlmostEqual(eta(ZERO, s.lam), s.eta_value, delta=1e-7)


class TestReport(TestCase):

    def test_report(self):
        report = full_report(TubeVector(1, 0), ZERO, (0, 10))
        self.assertEqual(report.case, 'i')
        self.assertEqual(len(report.ac_bands), 3)
        self.assertEqual(report.lambda_window, (0.0, 10.0))
        self.assertIn(NOTE_SC, report.notes)
        self.assertEqual(report.dirac_points, ())
        self.assertEqual(report.sigma_0, ())
        self.assertEqual(len(report.sigma_D), 1)
        self.assertAlmostEqual(report.sigma_D[0], math.pi**2, delta=1e-8)

    def test_scalar_window(self):
        report = full_report((0, 1), ZERO, 10)
        self.assertEqual(report.lambda_window, (-1.0, 10.0))
        self.assertEqual(len(report.dirac_points), 2)

    def test_json_round_trip(self):
        report = full_report(TubeVector(0, 2), PotentialSpec.cosine(1),
                             (None, 12))
        text = json.dumps(report.to_dict(), sort_keys=True)
        self.assertEqual(SpectrumReport.from_dict(json.loads(text)), report)
