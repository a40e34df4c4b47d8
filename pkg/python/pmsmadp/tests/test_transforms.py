import unittest, math

import numpy as np

from pmsmadp.motor.transforms import (
    AbcTriple, wrap_angle, electrical_angle, abc_to_dq0, dq_to_abc, rpm_to_rad_s, rad_s_to_rpm)

class Transforms(unittest.TestCase):

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            f_d, f_q = rng.uniform(-10.0, 10.0, size=2)
            theta = rng.uniform(0.0, 2.0 * math.pi)
            d, q, zero = abc_to_dq0(dq_to_abc(f_d, f_q, theta), theta)
            self.assertAlmostEqual(d, f_d, delta=1e-12 * max(1.0, abs(f_d)))
            self.assertAlmostEqual(q, f_q, delta=1e-12 * max(1.0, abs(f_q)))
            self.assertAlmostEqual(zero, 0.0, delta=1e-12)

    def test_balanced_phases(self):
        a, b, c = dq_to_abc(1.5, -2.0, 0.7)
        self.assertAlmostEqual(a + b + c, 0.0, places=12)

    def test_amplitude_invariance(self):
        # A balanced set of amplitude 1 aligned with θ maps to d = 1.
        theta = 0.3
        phases = [math.cos(theta), math.cos(theta - 2 * math.pi / 3), math.cos(theta + 2 * math.pi / 3)]
        d, q, _ = abc_to_dq0(phases, theta)
        self.assertAlmostEqual(d, 1.0, places=12)
        self.assertAlmostEqual(q, 0.0, places=12)

    def test_zero_sequence(self):
        _, _, zero = abc_to_dq0((1.0, 1.0, 1.0), 0.4)
        self.assertAlmostEqual(zero, 1.0, places=12)

    def test_abc_triple(self):
        t = AbcTriple(1, 2, 3)
        self.assertEqual(t.f_c, 3.0)
        with self.assertRaises(ValueError):
            AbcTriple(1.0, float('nan'), 0.0)


class Angles(unittest.TestCase):

    def test_wrap(self):
        self.assertEqual(wrap_angle(0.0), 0.0)
        self.assertAlmostEqual(wrap_angle(-0.5), 2.0 * math.pi - 0.5, places=12)
        self.assertAlmostEqual(wrap_angle(7.0), 7.0 - 2.0 * math.pi, places=12)
        for theta in (-1e-18, 2.0 * math.pi, -2.0 * math.pi, 1e6):
            w = wrap_angle(theta)
            self.assertGreaterEqual(w, 0.0)
            self.assertLess(w, 2.0 * math.pi)

    def test_electrical_angle(self):
        self.assertAlmostEqual(electrical_angle(0.5, 5), 2.5, places=12)
        self.assertLess(electrical_angle(2.0, 5), 2.0 * math.pi)
        with self.assertRaises(ValueError):
            electrical_angle(0.1, 0)

    def test_units(self):
        self.assertAlmostEqual(rpm_to_rad_s(3000.0), 100.0 * math.pi, places=10)
        self.assertAlmostEqual(rad_s_to_rpm(rpm_to_rad_s(1234.5)), 1234.5, places=10)

if __name__ == '__main__':
    unittest.main()
