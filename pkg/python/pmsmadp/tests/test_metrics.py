import unittest, math

import numpy as np
import pandas as pd

from pmsmadp.adp.cost import CostSpec, stage_cost
from pmsmadp.basis.normalizer import Normalizer
from pmsmadp.host import Profile, SimTrace, itae, realized_cost, settling_time, ripple, steady_state_error
from pmsmadp.host.metrics import tracking_error
from pmsmadp.motor.params import MotorParams

def make_trace(omega, ts=0.1, omega_ref=100.0, tau_em=0.0, tau_ref=0.0, i_q=0.0, v=(0.0, 0.0)):
    rows = []
    for k, w in enumerate(omega):
        rows.append((k * ts, 0.0, i_q, w, tau_em, tau_ref, v[0], v[1], False, False,
                     omega_ref, 0, 0.0, 0.0, 1.0))
    return SimTrace.from_rows(rows, ts)


class Itae(unittest.TestCase):

    def test_constant_error(self):
        n = 50
        ts = 1e-3
        trace = make_trace([0.0] * (n + 1), ts=ts, tau_em=0.3, tau_ref=0.5)
        self.assertAlmostEqual(itae(trace), 0.2 * ts * ts * n * (n + 1) / 2, delta=1e-15)

    def test_speed_signal(self):
        trace = make_trace([90.0, 90.0, 90.0], ts=1.0)
        self.assertAlmostEqual(itae(trace, signal='speed'), 10.0 * (0.0 + 1.0 + 2.0), places=12)
        self.assertEqual(itae(trace, Profile(90.0), signal='speed'), 0.0)

    def test_errors(self):
        with self.assertRaises(ValueError):
            itae(SimTrace.from_rows([], 0.1))
        with self.assertRaises(ValueError):
            tracking_error(make_trace([0.0]), 'flux')


class Cost(unittest.TestCase):

    def test_single_sample(self):
        p = MotorParams()
        c = CostSpec()
        trace = make_trace([0.0], tau_ref=0.4, i_q=2.0, v=(3.0, -4.0))
        self.assertAlmostEqual(realized_cost(trace, c, p),
                               stage_cost((0.0, 2.0), 0.4, (3.0, -4.0), c, p), places=9)

    def test_discounting(self):
        p = MotorParams()
        c = CostSpec(gamma=0.5)
        v = Normalizer.from_params(p).v_scale
        trace = make_trace([0.0, 0.0, 0.0], v=(v, 0.0))
        self.assertAlmostEqual(realized_cost(trace, c, p), 100.0 * (1.0 + 0.5 + 0.25), places=9)
        self.assertAlmostEqual(realized_cost(trace, c, p, start_time=0.1), 100.0 * 1.5, places=9)

    def test_back_emf_is_not_charged(self):
        p = MotorParams()
        c = CostSpec()
        omega = 200.0
        trace = make_trace([omega, omega], omega_ref=omega, v=(0.0, p.magnet_flux_wb * p.pole_pairs * omega))
        self.assertAlmostEqual(realized_cost(trace, c, p), 0.0, places=12)


class Settling(unittest.TestCase):

    def test_settles(self):
        trace = make_trace([100.0, 100.0, 100.0, 90.0, 90.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0])
        self.assertAlmostEqual(settling_time(trace, 0.2, 0.01), 0.3, places=12)

    def test_never_leaves(self):
        trace = make_trace([100.0] * 5)
        self.assertEqual(settling_time(trace, 0.1, 0.01), 0.0)

    def test_never_settles(self):
        trace = make_trace([100.0, 100.0, 95.0, 95.0])
        self.assertEqual(settling_time(trace, 0.1, 0.01), math.inf)

    def test_absolute_band(self):
        trace = make_trace([100.0, 98.0, 99.5, 100.0])
        self.assertAlmostEqual(settling_time(trace, 0.0, 1.0, relative=False), 0.2, places=12)

    def test_event_beyond_end(self):
        with self.assertRaises(ValueError):
            settling_time(make_trace([100.0] * 3), 5.0, 0.01)


class Windows(unittest.TestCase):

    def test_ripple(self):
        trace = make_trace([1.0, 2.0, 3.0, 5.0, 7.0])
        self.assertAlmostEqual(ripple(trace, 'omega_m', 0.3), 1.0, places=12)
        self.assertAlmostEqual(ripple(trace, 'omega_m'), float(np.std([1.0, 2.0, 3.0, 5.0, 7.0])), places=12)
        with self.assertRaises(ValueError):
            ripple(trace, 'omega_m', 1.0)

    def test_steady_state_error(self):
        trace = make_trace([90.0, 95.0, 101.0, 99.0])
        self.assertAlmostEqual(steady_state_error(trace, 0.2), 1.0, places=12)
        self.assertAlmostEqual(steady_state_error(trace, 0.0, 0.1), 7.5, places=12)

    def test_window_and_duration(self):
        trace = make_trace([0.0] * 4)
        np.testing.assert_array_equal(trace.window(0.1, 0.2), [False, True, True, False])
        self.assertAlmostEqual(trace.duration, 0.3, places=12)
        self.assertIsInstance(trace.to_frame(), pd.DataFrame)

if __name__ == '__main__':
    unittest.main()
