import unittest, math, os, tempfile

import numpy as np

from pmsmadp.adp.config import TrainingConfig
from pmsmadp.adp.cost import CostSpec
from pmsmadp.adp.trainer import value_iteration
from pmsmadp.basis.normalizer import Normalizer
from pmsmadp.basis.poly import PolyBasis
from pmsmadp.basis.weights import WeightSet
from pmsmadp.host import Profile, Scenario, SimTrace, Simulator, run_scenario, itae, settling_time
from pmsmadp.host.trace import COLUMNS
from pmsmadp.motor.dynamics import DriveState
from pmsmadp.motor.params import MotorParams, load_preset
from pmsmadp.motor.transforms import rpm_to_rad_s

def short_scenario(**kwargs):
    args = dict(name='short', duration=0.01)
    args.update(kwargs)
    return Scenario(**args)


class Profiles(unittest.TestCase):

    def test_value_at(self):
        p = Profile([(0.0, 1.0), (0.5, 2.0), (1.0, 3.0)])
        self.assertEqual(p.value_at(0.0), 1.0)
        self.assertEqual(p.value_at(0.49), 1.0)
        self.assertEqual(p.value_at(0.5), 2.0)
        self.assertEqual(p.value_at(5.0), 3.0)
        self.assertEqual(p.breakpoints, [0.5, 1.0])

    def test_constructors(self):
        self.assertEqual(Profile(2.0), Profile.constant(2.0))
        self.assertEqual(Profile.step(0.0, 0.6, 1.0).to_list(), [[0.0, 0.0], [1.0, 0.6]])
        self.assertEqual(Profile.step(1.0, 2.0, 0.0), Profile(2.0))
        self.assertEqual(Profile(2.0).scaled(3.0), Profile(6.0))

    def test_validation(self):
        with self.assertRaises(ValueError):
            Profile([])
        with self.assertRaises(ValueError):
            Profile([(0.1, 1.0)])
        with self.assertRaises(ValueError):
            Profile([(0.0, 1.0), (0.0, 2.0)])
        with self.assertRaises(ValueError):
            Profile([(0.0, float('nan'))])


class Scenarios(unittest.TestCase):

    def test_defaults(self):
        sc = Scenario()
        self.assertEqual(sc.controller, 'foc')
        self.assertEqual(sc.steps, 25000)
        self.assertEqual(sc.sampling_time, 40e-6)
        self.assertIs(sc.controller_params, sc.plant_params)

    def test_validation(self):
        with self.assertRaisesRegex(TypeError, "unexpected keyword argument 'speed_rpm'"):
            Scenario(speed_rpm=1000.0)
        with self.assertRaises(ValueError):
            Scenario(duration=0.0)
        with self.assertRaises(ValueError):
            Scenario(integrator='midpoint')
        with self.assertRaises(TypeError):
            Scenario(plant_params={'preset': 'nominal'})

    def test_document_round_trip(self):
        sc = short_scenario(
            plant_params=load_preset('perturbed_sim'), controller='dtc_svm',
            controller_config={'flux_ref': 0.02}, speed=Profile([(0.0, 10.0), (0.005, 20.0)]),
            load=0.1, sensor_noise=0.01, speed_filter=1e-3, substeps=2,
            initial_state=DriveState(0.1, 0.2, 3.0, 0.4))
        again = Scenario.from_document(sc.to_document())
        self.assertEqual(again.to_document(), sc.to_document())
        self.assertEqual(again.plant_params, load_preset('perturbed_sim'))
        self.assertEqual(again.controller_config, {'flux_ref': 0.02})

    def test_rpm_and_weight_paths(self):
        sc = Scenario.from_document({
            'speed_rpm': 3000.0, 'controller': {'kind': 'adp', 'weights': 'w.json'}}, base_dir='/data')
        self.assertAlmostEqual(sc.speed.value_at(0.0), 100.0 * math.pi, places=10)
        self.assertEqual(sc.controller_config['weights'], os.path.join('/data', 'w.json'))
        with self.assertRaises(TypeError):
            Scenario.from_document({'speed_rpm': 1.0, 'speed_rad_s': 1.0})

    def test_load(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'scenario.json')
            short_scenario(speed=5.0).to_document().dump(path)
            sc = Scenario.load(path)
        self.assertEqual(sc.name, 'short')
        self.assertEqual(sc.speed, Profile(5.0))

    def test_replace(self):
        sc = short_scenario()
        other = sc.replace(controller='dtc_svm')
        self.assertEqual(other.controller, 'dtc_svm')
        self.assertEqual(sc.controller, 'foc')
        self.assertEqual(other.duration, sc.duration)


class Lifecycle(unittest.TestCase):

    def test_not_running(self):
        sim = Simulator(short_scenario())
        with self.assertRaisesRegex(RuntimeError, "No simulation is currently running"):
            sim.step()
        with self.assertRaises(RuntimeError):
            sim.stop()

    def test_multiple(self):
        sim = Simulator(short_scenario())
        sim.simulate()
        with self.assertRaisesRegex(RuntimeError, "Cannot run multiple simulations at once"):
            sim.simulate()
        sim.stop()
        self.assertFalse(sim.running)

    def test_context_manager(self):
        with Simulator(short_scenario()) as sim:
            for _ in range(3):
                self.assertIsNotNone(sim.step())
        self.assertEqual(len(sim.result), 3)
        self.assertFalse(sim.result.complete)
        self.assertIn("stopped after 3 of 251 samples", sim.result.diagnostic)

    def test_step_until_finished(self):
        sim = Simulator(short_scenario())
        sim.simulate()
        count = 0
        while sim.step() is not None:
            count += 1
        self.assertTrue(sim.finished)
        self.assertEqual(count, 251)
        self.assertTrue(sim.stop().complete)

    def test_arguments(self):
        with self.assertRaises(TypeError):
            Simulator({'name': 'x'})


class Runs(unittest.TestCase):

    def test_zero_scenario(self):
        trace = run_scenario(short_scenario())
        self.assertTrue(trace.complete)
        self.assertEqual(len(trace), 251)
        np.testing.assert_array_equal(trace['t'], np.arange(251) * 40e-6)
        for column in ('i_d', 'i_q', 'omega_m', 'tau_em', 'tau_ref', 'v_d', 'v_q'):
            np.testing.assert_array_equal(trace[column], np.zeros(251))
        np.testing.assert_array_equal(trace['sector'], np.zeros(251, dtype=int))
        np.testing.assert_array_equal(trace['duty_0'], np.ones(251))
        self.assertFalse(trace['saturated'].any())
        self.assertEqual(trace.name, 'short')
        self.assertEqual(trace.controller, 'foc')

    def test_zero_actor(self):
        p = MotorParams()
        w = WeightSet.zeros(PolyBasis(4, 3), PolyBasis(4, 2), Normalizer.from_params(p))
        trace = Simulator(short_scenario(controller='adp'), weights=w).run()
        np.testing.assert_array_equal(trace['v_d'], np.zeros(251))
        np.testing.assert_array_equal(trace['i_q'], np.zeros(251))

    def test_speed_tracking(self):
        for kind in ('foc', 'dtc_svm'):
            sc = Scenario(name='track', controller=kind, speed=100.0, duration=0.2)
            trace = run_scenario(sc)
            self.assertTrue(trace.complete)
            self.assertAlmostEqual(trace['omega_m'][-1], 100.0, delta=1.0)
            self.assertTrue((np.abs(trace['tau_ref']) <= 1.91).all())
            np.testing.assert_array_equal(trace['omega_ref'], np.full(len(trace), 100.0))

    def test_deterministic(self):
        sc = short_scenario(speed=50.0, sensor_noise=0.05)
        a = run_scenario(sc, seed=1)
        b = run_scenario(sc, seed=1)
        c = run_scenario(sc, seed=2)
        self.assertTrue(a.frame.equals(b.frame))
        self.assertFalse(a.frame.equals(c.frame))

    def test_applied_voltage_within_disk(self):
        sc = short_scenario(speed=1000.0, load=0.5)
        trace = run_scenario(sc)
        v_max = sc.plant_params.max_voltage
        self.assertTrue((np.hypot(trace['v_d'], trace['v_q']) <= v_max * (1.0 + 1e-12)).all())

    def test_sensing_uses_plant_pole_pairs(self):
        # The phase currents are transformed with the plant's electrical
        # angle even when the controller model counts poles differently.
        plant = MotorParams()
        model = plant.with_model_error(pole_pairs=4)
        sc = Scenario(name='poles', controller='foc', speed=100.0, duration=0.2,
                      plant_params=plant, controller_params=model)
        trace = run_scenario(sc)
        self.assertTrue(trace.complete)
        self.assertAlmostEqual(trace['omega_m'][-1], 100.0, delta=1.0)
        tail = trace.window(0.15)
        self.assertLess(np.max(np.abs(trace['i_d'][tail])), 0.05)


class LoadStep(unittest.TestCase):
    """Rated speed with a 0.6 N·m load step, shortened from the reference
    comparison."""

    SPEED = rpm_to_rad_s(3000.0)

    @classmethod
    def setUpClass(cls):
        cfg = TrainingConfig(sample_count=300, validation_count=0)
        cls.weights = value_iteration(cfg, CostSpec(), MotorParams())

    def run_controller(self, kind):
        sc = Scenario(name='load_step', controller=kind, speed=self.SPEED,
                      load=Profile.step(0.0, 0.6, 0.2), duration=0.4)
        trace = Simulator(sc, weights=self.weights if kind == 'adp' else None).run()
        self.assertTrue(trace.complete)
        return trace

    def assert_tracks(self, trace):
        t = trace['t']
        error = np.abs(trace['omega_m'] - self.SPEED)
        before = (t >= 0.15) & (t < 0.2)
        self.assertLess(np.max(error[before]), 0.01 * self.SPEED)
        self.assertLess(np.max(error[t >= 0.35]), 0.01 * self.SPEED)
        self.assertLess(settling_time(trace, 0.2, 0.01), 0.15)
        self.assertTrue(np.all(np.isfinite(trace['i_q'])))

    def test_foc(self):
        self.assert_tracks(self.run_controller('foc'))

    def test_dtc_svm(self):
        trace = self.run_controller('dtc_svm')
        self.assert_tracks(trace)
        self.assertFalse(trace['saturated'][trace.window(0.35)].any())

    def test_adp(self):
        trace = self.run_controller('adp')
        self.assert_tracks(trace)
        tail = trace.window(0.35)
        self.assertAlmostEqual(np.mean(trace['tau_em'][tail]), 0.6, delta=0.01)
        self.assertFalse(trace['saturated'][tail].any())


class Traces(unittest.TestCase):

    def test_csv_round_trip(self):
        trace = run_scenario(short_scenario(speed=50.0, sensor_noise=0.05), seed=4)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'trace.csv')
            trace.to_csv(path)
            with open(path) as f:
                self.assertEqual(f.readline().strip(), ','.join(COLUMNS))
            loaded = SimTrace.from_csv(path)
        self.assertEqual(loaded.sampling_time, trace.sampling_time)
        for column in COLUMNS:
            np.testing.assert_array_equal(loaded[column], trace[column])
        self.assertEqual(itae(loaded), itae(trace))

    def test_invalid_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'bad.csv')
            with open(path, 'w') as f:
                f.write('a,b\n1,2\n3,4\n')
            with self.assertRaises(ValueError):
                SimTrace.from_csv(path)
            trace = run_scenario(short_scenario(duration=40e-6))
            self.assertEqual(len(trace), 2)
            SimTrace.from_rows([tuple(trace.frame.iloc[0])], 40e-6).to_csv(path)
            with self.assertRaises(ValueError):
                SimTrace.from_csv(path)

if __name__ == '__main__':
    unittest.main()
