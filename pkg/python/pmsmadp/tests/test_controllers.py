import unittest, math, os, tempfile

import numpy as np

from pmsmadp.basis.normalizer import Normalizer
from pmsmadp.basis.poly import PolyBasis
from pmsmadp.basis.weights import WeightSet
from pmsmadp.control import (
    Controller, controller, make_controller, PIController, SpeedLoopPI, saturate, svm_apply,
    CurrentSensor, SpeedFilter, AdpController, adp_control, FocGains, FocController, foc_control,
    DtcSvmGains, DtcSvmController, dtc_svm_control, speed_pi_step)
from pmsmadp.control.adp import ActorEvaluator
from pmsmadp.control.base import REGISTRY
from pmsmadp.control.dtc_svm import estimate_flux, estimate_torque, flux_reference
from pmsmadp.control.svm import ControlCommand
from pmsmadp.motor.dynamics import DriveState, electromagnetic_torque, plant_step
from pmsmadp.motor.params import MotorParams, load_preset
from pmsmadp.tests.oracles import svm_duties

def random_weights(seed=0):
    rng = np.random.default_rng(seed)
    critic = PolyBasis(4, 3)
    actor = PolyBasis(4, 2)
    return WeightSet(critic, actor, Normalizer.from_params(MotorParams()),
                     rng.normal(size=critic.size), rng.normal(size=(actor.size, 2)))

def closed_loop(ctrl, tau_ref, steps, plant=None, omega_m=None, trajectory=None):
    """Runs `ctrl` on the plant for `steps` periods. With `omega_m` set the
    speed is held there, as if by a stiff load machine."""
    p = plant or MotorParams()
    s = DriveState(omega_m=omega_m or 0.0)
    for _ in range(steps):
        cmd = ctrl.control(s, tau_ref, p.sampling_time_s)
        s = plant_step(s, cmd.v_d_sat, cmd.v_q_sat, 0.0, p, p.sampling_time_s)
        if omega_m is not None:
            s = s._replace(omega_m=omega_m)
        if trajectory is not None:
            trajectory.append((s, cmd))
    return s


class PI(unittest.TestCase):

    def test_linear_range(self):
        pi = PIController(2.0, 10.0, limit=100.0)
        self.assertAlmostEqual(pi.step(1.0, 0.1), 2.0 + 10.0 * 0.1, places=12)
        self.assertAlmostEqual(pi.integral, 0.1, places=12)
        self.assertFalse(pi.saturated)
        self.assertAlmostEqual(pi.output(0.0), 1.0, places=12)

    def test_conditional_anti_windup(self):
        pi = PIController(1.0, 10.0, limit=1.0)
        for _ in range(10):
            self.assertEqual(pi.step(5.0, 0.1), 1.0)
            self.assertTrue(pi.saturated)
        self.assertEqual(pi.integral, 0.0)
        # An error pulling back out of the limit still integrates.
        pi.reset(0.5)
        self.assertEqual(pi.step(-0.5, 0.1), 1.0)
        self.assertAlmostEqual(pi.integral, 0.45, places=12)

    def test_back_calculation(self):
        pi = PIController(1.0, 10.0, limit=1.0, anti_windup='back_calculation')
        self.assertEqual(pi.step(5.0, 0.1), 1.0)
        self.assertAlmostEqual(pi.integral, 0.5 - 9.0 * 0.1 / (10.0 * 0.1), places=12)

    def test_validation(self):
        with self.assertRaises(ValueError):
            PIController(-1.0, 0.0)
        with self.assertRaises(ValueError):
            PIController(1.0, 1.0, limit=0.0)
        with self.assertRaises(ValueError):
            PIController(1.0, 1.0, anti_windup='clamp')
        with self.assertRaises(ValueError):
            PIController(1.0, 1.0).step(1.0, 0.0)

    def test_speed_loop(self):
        pi = SpeedLoopPI()
        self.assertEqual((pi.kp, pi.ki, pi.torque_limit), (0.0108, 0.675, 1.91))
        self.assertEqual(pi.step(1000.0, 0.0, 40e-6), 1.91)
        self.assertEqual(pi.integral, 0.0)
        tau = SpeedLoopPI().step(10.0, 0.0, 40e-6)
        self.assertAlmostEqual(tau, 0.0108 * 10.0 + 0.675 * 10.0 * 40e-6, places=12)
        self.assertEqual(SpeedLoopPI.from_document(pi.to_document()).to_document(), pi.to_document())
        with self.assertRaises(TypeError):
            SpeedLoopPI(kd=1.0)

    def test_speed_pi_step(self):
        a = SpeedLoopPI()
        b = SpeedLoopPI()
        for omega_m in (0.0, 20.0, 80.0, 120.0):
            self.assertEqual(speed_pi_step(100.0, omega_m, a, 40e-6), b.step(100.0, omega_m, 40e-6))
        self.assertEqual(a.integral, b.integral)


class Modulation(unittest.TestCase):

    def test_saturate(self):
        cmd = saturate(3.0, 4.0, 10.0)
        self.assertEqual(cmd, ControlCommand(3.0, 4.0, 3.0, 4.0, False))
        cmd = saturate(30.0, 40.0, 10.0)
        self.assertTrue(cmd.saturated)
        self.assertAlmostEqual(cmd.v_d_sat, 6.0, places=12)
        self.assertAlmostEqual(cmd.v_q_sat, 8.0, places=12)
        self.assertEqual((cmd.v_d, cmd.v_q), (30.0, 40.0))

    def test_duties_match_volt_second_balance(self):
        rng = np.random.default_rng(5)
        v_dc = 100.0
        v_max = v_dc / math.sqrt(3.0)
        for _ in range(200):
            radius = rng.uniform(0.01, 0.999) * v_max
            angle = rng.uniform(0.0, 2.0 * math.pi)
            theta_e = rng.uniform(0.0, 2.0 * math.pi)
            v_d, v_q = radius * math.cos(angle), radius * math.sin(angle)
            out = svm_apply(saturate(v_d, v_q, v_max), theta_e, v_dc)
            v_alpha = v_d * math.cos(theta_e) - v_q * math.sin(theta_e)
            v_beta = v_d * math.sin(theta_e) + v_q * math.cos(theta_e)
            sector, t1, t2, t0 = svm_duties(v_alpha, v_beta, v_dc)
            self.assertEqual(out.sector, sector)
            self.assertAlmostEqual(out.duty_1, t1, delta=1e-9)
            self.assertAlmostEqual(out.duty_2, t2, delta=1e-9)
            self.assertAlmostEqual(out.duty_0, t0, delta=1e-9)
            self.assertEqual((out.v_d, out.v_q), (v_d, v_q))

    def test_disk_limit(self):
        cmd = ControlCommand(200.0, 0.0, 200.0, 0.0, False)
        out = svm_apply(cmd, 0.3, 100.0)
        self.assertAlmostEqual(math.hypot(out.v_d, out.v_q), 100.0 / math.sqrt(3.0), places=9)
        self.assertAlmostEqual(out.duty_1 + out.duty_2 + out.duty_0, 1.0, places=9)
        self.assertGreaterEqual(out.duty_0, 0.0)

    def test_zero_vector(self):
        out = svm_apply(saturate(0.0, 0.0, 10.0), 1.0, 100.0)
        self.assertEqual(tuple(out), (0.0, 0.0, 0, 0.0, 0.0, 1.0))

    def test_bus_voltage(self):
        with self.assertRaises(ValueError):
            svm_apply(saturate(1.0, 0.0, 10.0), 0.0, 0.0)


class Sensing(unittest.TestCase):

    def test_noiseless(self):
        p = MotorParams()
        s = DriveState(1.5, -2.5, 100.0, 1.2, 0.01)
        m = CurrentSensor().measure(s, p)
        self.assertAlmostEqual(m.i_d, 1.5, places=12)
        self.assertAlmostEqual(m.i_q, -2.5, places=12)
        self.assertEqual((m.omega_m, m.theta_m, m.t), (s.omega_m, s.theta_m, s.t))

    def test_noise_is_seeded(self):
        p = MotorParams()
        s = DriveState(1.0, 1.0, 0.0, 0.4)
        a = CurrentSensor(0.1, seed=3).measure(s, p)
        b = CurrentSensor(0.1, seed=3).measure(s, p)
        c = CurrentSensor(0.1, seed=4).measure(s, p)
        self.assertEqual(a, b)
        self.assertNotEqual(a, c)
        with self.assertRaises(ValueError):
            CurrentSensor(-1.0)

    def test_speed_filter(self):
        self.assertEqual(SpeedFilter().filter(5.0, 1e-3), 5.0)
        f = SpeedFilter(1e-3)
        self.assertEqual(f.filter(0.0, 1e-3), 0.0)
        self.assertAlmostEqual(f.filter(10.0, 1e-3), 5.0, places=12)
        f.reset()
        self.assertEqual(f.filter(10.0, 1e-3), 10.0)


class Foc(unittest.TestCase):

    def test_gains(self):
        g = FocGains.from_bandwidth(MotorParams(), 1000.0)
        self.assertAlmostEqual(g.kp_d, 0.003 * 2000.0 * math.pi, places=9)
        self.assertAlmostEqual(g.ki_q, 1.2 * 2000.0 * math.pi, places=9)
        self.assertEqual(FocGains.from_document(g.to_document()).to_document(), g.to_document())
        with self.assertRaises(ValueError):
            FocGains.from_document({'bandwidth_hz': 100.0})

    def test_zero(self):
        cmd = FocController().control(DriveState(), 0.0, 40e-6)
        self.assertEqual((cmd.v_d_sat, cmd.v_q_sat), (0.0, 0.0))

    def test_back_emf_feed_forward(self):
        cmd = FocController().control(DriveState(omega_m=100.0), 0.0, 40e-6)
        self.assertAlmostEqual(cmd.v_d, 0.0, places=12)
        self.assertAlmostEqual(cmd.v_q, 0.015 * 5 * 100.0, places=12)

    def test_first_step(self):
        p = MotorParams()
        g = FocGains.from_bandwidth(p)
        cmd = foc_control(DriveState(), 0.1 * p.torque_constant, g, p, 40e-6)
        self.assertAlmostEqual(cmd.v_q, 0.1 * (g.kp_q + g.ki_q * 40e-6), places=9)
        self.assertFalse(cmd.saturated)

    def test_tracks_torque(self):
        p = MotorParams()
        s = closed_loop(FocController(p), p.torque_constant, 500)
        self.assertAlmostEqual(s.i_q, 1.0, delta=1e-3)
        self.assertAlmostEqual(s.i_d, 0.0, delta=1e-3)

    def test_decoupling_at_speed(self):
        # A q-current step at speed barely disturbs the d-axis.
        p = MotorParams()
        steps = []
        s = closed_loop(FocController(p), 2.0 * p.torque_constant, 250, omega_m=300.0, trajectory=steps)
        self.assertAlmostEqual(s.i_q, 2.0, delta=0.01 * 2.0)
        self.assertLess(abs(s.i_d), 0.01 * 2.0)
        self.assertLess(max(abs(x.i_d) for x, _ in steps), 0.05 * 2.0)


class DtcSvm(unittest.TestCase):

    def test_estimates(self):
        p = MotorParams()
        self.assertEqual(estimate_flux(0.0, 0.0, p), (0.015, 0.0))
        salient = MotorParams(inductance_d_h=0.002)
        for i_d, i_q in ((0.0, 1.0), (-1.0, 2.0), (0.5, -3.0)):
            self.assertAlmostEqual(estimate_torque(i_d, i_q, salient),
                                   electromagnetic_torque(i_d, i_q, salient), places=12)

    def test_gains(self):
        p = MotorParams()
        g = DtcSvmGains.from_bandwidth(p)
        self.assertAlmostEqual(g.kp_flux, 2.0 * 2.0 * math.pi * 250.0, places=9)
        self.assertAlmostEqual(g.ki_flux, (2.0 * math.pi * 250.0) ** 2, places=6)
        self.assertAlmostEqual(g.kp_torque, 2.0 * math.pi * 1000.0 * 0.003 / 0.1125, places=9)
        other = DtcSvmGains.from_document({'torque_bandwidth_hz': 500.0}, p)
        self.assertAlmostEqual(other.kp_torque, 0.5 * g.kp_torque, places=9)

    def test_tracks_torque_and_flux(self):
        p = MotorParams()
        tau_ref = p.torque_constant
        s = closed_loop(DtcSvmController(p), tau_ref, 1250)
        self.assertAlmostEqual(estimate_torque(s.i_d, s.i_q, p), tau_ref, delta=1e-3)
        self.assertAlmostEqual(math.hypot(*estimate_flux(s.i_d, s.i_q, p)),
                               math.hypot(0.015, 0.003 * 1.0), delta=1e-5)
        self.assertAlmostEqual(s.i_d, 0.0, delta=1e-2)

    def test_flux_reference(self):
        p = MotorParams()
        self.assertEqual(flux_reference(0.0, p), 0.015)
        # 0.6 N·m needs i_q = 5.33 A, so Lq·i_q exceeds λm.
        self.assertAlmostEqual(flux_reference(0.6, p), math.hypot(0.015, 0.003 * 0.6 / 0.1125), places=12)
        self.assertGreater(0.003 * 0.6 / 0.1125, 0.015)
        self.assertEqual(flux_reference(-0.6, p), flux_reference(0.6, p))
        self.assertAlmostEqual(flux_reference(0.0, p, 0.02), 0.02, places=15)

    def test_holds_load_torque_at_speed(self):
        # Rated speed and a 0.6 N·m demand: the flux follows the load and
        # the voltage stays inside the inverter limit.
        p = MotorParams()
        steps = []
        s = closed_loop(DtcSvmController(p), 0.6, 2500, omega_m=314.16, trajectory=steps)
        self.assertAlmostEqual(electromagnetic_torque(s.i_d, s.i_q, p), 0.6, delta=0.006)
        self.assertAlmostEqual(s.i_d, 0.0, delta=0.05)
        self.assertFalse(any(cmd.saturated for _, cmd in steps[-250:]))

    def test_torque_is_current_limited(self):
        p = MotorParams()
        limit = p.torque_constant * p.max_current_a
        s = closed_loop(DtcSvmController(p), 1.91, 2500, omega_m=100.0)
        self.assertAlmostEqual(electromagnetic_torque(s.i_d, s.i_q, p), limit, delta=0.01 * limit)

    def test_torque_bias_under_model_error(self):
        # The controller reaches its own torque estimate, which scales with
        # the model's magnet flux rather than the plant's.
        plant = load_preset('nominal')
        model = load_preset('perturbed_sim')
        s = closed_loop(DtcSvmController(model), 0.3, 5000, plant=plant, omega_m=100.0)
        self.assertAlmostEqual(estimate_torque(s.i_d, s.i_q, model), 0.3, delta=1e-3)
        ratio = estimate_torque(s.i_d, s.i_q, model) / electromagnetic_torque(s.i_d, s.i_q, plant)
        self.assertAlmostEqual(ratio, 0.012 / 0.015, delta=5e-3)

    def test_functional_form(self):
        p = MotorParams()
        g = DtcSvmGains.from_bandwidth(p)
        cmd = dtc_svm_control(DriveState(), 0.0, 0.015, g, p, 40e-6)
        self.assertEqual((cmd.v_d_sat, cmd.v_q_sat, cmd.saturated), (0.0, 0.0, False))
        s = DriveState(0.5, 1.0, 30.0, 0.2)
        self.assertEqual(dtc_svm_control(s, 0.1, 0.015, g, p, 40e-6),
                         DtcSvmController(p, g).control(s, 0.1, 40e-6))
        with self.assertRaises(ValueError):
            dtc_svm_control(s, 0.1, 0.015, g, p, 0.0)

    def test_flux_ref(self):
        self.assertEqual(DtcSvmController().flux_ref, 0.015)
        with self.assertRaises(ValueError):
            DtcSvmController(flux_ref=0.0)


class Adp(unittest.TestCase):

    def test_evaluator_matches_weights(self):
        w = random_weights()
        ev = ActorEvaluator(w)
        n = w.normalizer
        s = DriveState(1.0, -2.0, 150.0)
        tau = 0.4
        eta = ev.normalize(s.i_d, s.i_q, tau, s.omega_m)
        np.testing.assert_allclose(eta, n.normalize(s.i_d, s.i_q, tau, s.omega_m), rtol=1e-15)
        np.testing.assert_allclose(ev.evaluate(eta), w.actor_output(np.array(eta)), rtol=1e-12, atol=1e-12)

    def test_operation_count(self):
        ev = ActorEvaluator(random_weights())
        self.assertEqual(ev.operation_count(), 4 + 14 + 2 * 15)
        for eta in ([0.0, 0.0, 0.0, 0.0], [1.0, -0.5, 0.2, 3.0]):
            ev.evaluate(eta)
            self.assertEqual(ev.last_operation_count, ev.operation_count())

    def test_out_of_region(self):
        w = random_weights()
        self.assertFalse(adp_control(DriveState(1.0, 1.0), 0.1, w).out_of_region)
        cmd = adp_control(DriveState(20.0, 1.0), 0.1, w, max_voltage=10.0)
        self.assertTrue(cmd.out_of_region)
        self.assertLessEqual(math.hypot(cmd.v_d_sat, cmd.v_q_sat), 10.0 + 1e-12)

    def test_from_file(self):
        w = random_weights()
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'weights.json')
            w.save(path)
            ctrl = make_controller('adp', MotorParams(), weights=path)
        self.assertIsInstance(ctrl, AdpController)
        self.assertEqual(ctrl.to_document()['weights'], path)
        s = DriveState(1.0, -2.0, 150.0)
        self.assertEqual(ctrl.control(s, 0.4, 40e-6), AdpController(weights=w).control(s, 0.4, 40e-6))

    def test_arguments(self):
        with self.assertRaises(TypeError):
            AdpController(weights=None)
        with self.assertRaises(ValueError):
            make_controller('adp', MotorParams())


class Registry(unittest.TestCase):

    def test_registered(self):
        for kind in ('adp', 'foc', 'dtc_svm'):
            self.assertIn(kind, REGISTRY)
        self.assertEqual(FocController().get_name(), 'foc')
        self.assertEqual(DtcSvmController().get_version(), '0.1.0')

    def test_make_controller(self):
        p = MotorParams()
        ctrl = make_controller('foc', p, gains={'bandwidth_hz': 1000.0}, name='loop')
        self.assertIsInstance(ctrl, FocController)
        self.assertAlmostEqual(ctrl.gains.kp_d, 0.003 * 2000.0 * math.pi, places=9)
        self.assertEqual(ctrl.logger.name, 'pmsmadp.control.loop')
        self.assertIsInstance(make_controller('dtc_svm', p, flux_ref=0.02), DtcSvmController)
        with self.assertRaisesRegex(ValueError, "unknown controller kind"):
            make_controller('mpc', p)
        with self.assertRaisesRegex(TypeError, "unexpected keyword argument 'flux_ref'"):
            make_controller('foc', p, flux_ref=0.02)

    def test_decorator(self):
        class NotAController(object):
            pass
        with self.assertRaises(TypeError):
            controller('x', 'a', '1')(NotAController)
        class Duplicate(Controller):
            pass
        with self.assertRaisesRegex(ValueError, "duplicate"):
            controller('foc', 'a', '1')(Duplicate)

    def test_base(self):
        with self.assertRaises(TypeError):
            Controller(params={})
        with self.assertRaises(NotImplementedError):
            Controller().control(DriveState(), 0.0, 40e-6)

if __name__ == '__main__':
    unittest.main()
