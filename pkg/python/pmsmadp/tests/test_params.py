import unittest, math, os, pickle, tempfile

from pmsmadp.motor.params import MotorParams, load_preset, PRESETS

class Construction(unittest.TestCase):

    def test_defaults_are_nominal(self):
        self.assertEqual(MotorParams(), load_preset('nominal'))

    def test_nominal_values(self):
        p = load_preset('nominal')
        self.assertEqual(p.pole_pairs, 5)
        self.assertEqual(p.stator_resistance_ohm, 1.2)
        self.assertEqual(p.inductance_h, 0.003)
        self.assertEqual(p.magnet_flux_wb, 0.015)
        self.assertEqual(p.dc_bus_v, 100.0)
        self.assertEqual(p.sampling_time_s, 40e-6)
        self.assertAlmostEqual(p.rated_speed_rad_s, 100.0 * math.pi, places=10)
        self.assertAlmostEqual(p.torque_constant, 0.1125, places=12)
        self.assertAlmostEqual(p.max_voltage, 100.0 / math.sqrt(3.0), places=12)

    def test_shorthands(self):
        p = MotorParams(inductance_h=0.001, max_speed_rpm=6000.0)
        self.assertEqual(p.inductance_d_h, 0.001)
        self.assertEqual(p.inductance_q_h, 0.001)
        with self.assertRaises(TypeError):
            MotorParams(inductance_h=0.001, inductance_d_h=0.002)
        with self.assertRaises(TypeError):
            MotorParams(rated_speed_rpm=1.0, rated_speed_rad_s=1.0)

    def test_salient(self):
        p = MotorParams(inductance_d_h=0.002)
        with self.assertRaisesRegex(ValueError, "salient"):
            p.inductance_h

    def test_validation(self):
        with self.assertRaisesRegex(TypeError, "unexpected keyword argument 'x'"):
            MotorParams(x=1)
        with self.assertRaises(ValueError):
            MotorParams(stator_resistance_ohm=0.0)
        with self.assertRaises(ValueError):
            MotorParams(inertia_kgm2=float('inf'))
        with self.assertRaises(ValueError):
            MotorParams(pole_pairs=0)
        with self.assertRaises(TypeError):
            MotorParams(pole_pairs=2.5)
        with self.assertRaisesRegex(ValueError, "max_current_a"):
            MotorParams(max_current_a=1.0)
        MotorParams(viscous_friction_nms=0.0)

    def test_pickle(self):
        p = load_preset('perturbed_sim')
        self.assertEqual(pickle.loads(pickle.dumps(p)), p)


class Presets(unittest.TestCase):

    def test_all_presets_load(self):
        for name in PRESETS:
            self.assertIsInstance(load_preset(name), MotorParams)

    def test_perturbed(self):
        sim = load_preset('perturbed_sim')
        self.assertEqual(sim.stator_resistance_ohm, 5.7)
        self.assertEqual(sim.magnet_flux_wb, 0.012)
        self.assertEqual(sim.inductance_h, 0.001)
        self.assertEqual(sim.inertia_kgm2, 40e-6)
        self.assertEqual(sim.pole_pairs, 5)
        exp = load_preset('perturbed_exp')
        self.assertEqual(exp.stator_resistance_ohm, 3.6)
        self.assertEqual(exp.magnet_flux_wb, 0.005)
        self.assertEqual(exp.inductance_h, 0.001)
        self.assertEqual(exp.inertia_kgm2, 30e-6)

    def test_unknown(self):
        with self.assertRaises(ValueError):
            load_preset('nope')
        with self.assertRaises(TypeError):
            load_preset(3)

    def test_documents(self):
        p = MotorParams.from_document({'preset': 'nominal', 'stator_resistance_ohm': 2.0})
        self.assertEqual(p.stator_resistance_ohm, 2.0)
        self.assertEqual(p.inductance_h, 0.003)
        self.assertEqual(MotorParams.from_document(p.to_document()), p)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'motor.json')
            p.to_document().dump(path)
            self.assertEqual(MotorParams.load(path), p)

    def test_with_model_error(self):
        p = MotorParams().with_model_error(inductance_h=0.001, magnet_flux_wb=0.005)
        self.assertEqual(p.inductance_q_h, 0.001)
        self.assertEqual(p.magnet_flux_wb, 0.005)
        self.assertEqual(p.stator_resistance_ohm, 1.2)

if __name__ == '__main__':
    unittest.main()
