"""Contains the `Simulator` class that drives one closed-loop scenario."""

from pmsmadp.common.errors import NonFiniteState
from pmsmadp.common.log import Loggable
from pmsmadp.control import make_controller, SpeedLoopPI, CurrentSensor, SpeedFilter, svm_apply
from pmsmadp.host.scenario import Scenario
from pmsmadp.host.trace import SimTrace
from pmsmadp.motor.dynamics import electromagnetic_torque, plant_step
from pmsmadp.motor.transforms import electrical_angle

__all__ = ['Simulator', 'run_scenario']

class Simulator(Loggable):
    """Runs a `Scenario` on the sampling grid t_k = k·Ts, k = 0..N.

    Each control period the phase currents are measured, the speed loop
    turns the (optionally filtered) speed error into τ*, the controller
    computes a voltage command from the measurement and τ*, the inverter
    realizes it, the sample is recorded and the plant is advanced by one
    period with the applied voltage and the current load torque.

    The easiest way to use it is `run()`:

        trace = Simulator(scenario).run(seed=3)

    For finer control, `simulate()` builds a fresh controller and plant
    state, `step()` advances one period and `stop()` returns the trace
    recorded so far. A `Simulator` may also be used as a context manager,
    calling `simulate()` on entry and `stop()` on exit."""

    _component = 'host'

    def __init__(self, scenario, weights=None, name=None):
        """Constructs a simulator for `scenario`.

        `weights` optionally overrides the `weights` entry of the scenario's
        controller configuration (a `WeightSet` or weight file path)."""
        if not isinstance(scenario, Scenario):
            raise TypeError("scenario must be a Scenario")
        super().__init__(name or scenario.name)
        self.scenario = scenario
        self.weights = weights
        self._running = False
        self.result = None

    @property
    def running(self):
        return self._running

    def simulate(self, seed=0):
        """Prepares a new simulation. The seed drives the current sensor
        noise; everything else is deterministic."""
        if self._running:
            raise RuntimeError("Cannot run multiple simulations at once")
        sc = self.scenario
        config = dict(sc.controller_config)
        if self.weights is not None:
            config['weights'] = self.weights
        config.setdefault('name', sc.name)
        self._controller = make_controller(sc.controller, sc.controller_params, **config)
        self._speed_pi = SpeedLoopPI.from_document(sc.speed_pi)
        self._sensor = CurrentSensor(sc.sensor_noise, seed)
        self._filter = SpeedFilter(sc.speed_filter)
        self._state = sc.initial_state._replace(t=0.0)
        self._k = 0
        self._rows = []
        self._warned_saturation = False
        self._warned_region = False
        self._diagnostic = None
        self._running = True
        self.result = None
        self.info("simulating {} with {} controller for {} s ({} periods)",
                  sc.name, sc.controller, sc.duration, sc.steps)

    def _check_running(self):
        if not self._running:
            raise RuntimeError("No simulation is currently running")

    @property
    def finished(self):
        """Whether every sample of the scenario has been recorded, or the
        plant diverged."""
        self._check_running()
        return self._diagnostic is not None or self._k > self.scenario.steps

    def step(self):
        """Runs one control period and returns the recorded row, or `None`
        when the simulation is finished."""
        self._check_running()
        if self.finished:
            return None
        sc = self.scenario
        plant = sc.plant_params
        ts = sc.sampling_time
        k = self._k
        t = k * ts
        s = self._state

        measured = self._sensor.measure(s, plant)
        omega = self._filter.filter(measured.omega_m, ts)
        omega_ref = sc.speed.value_at(t)
        tau_ref = self._speed_pi.step(omega_ref, omega, ts)
        cmd = self._controller.control(measured._replace(omega_m=omega), tau_ref, ts)
        applied = svm_apply(cmd, electrical_angle(s.theta_m, plant.pole_pairs), plant.dc_bus_v)

        if cmd.saturated and not self._warned_saturation:
            self._warned_saturation = True
            self.warn("voltage command saturated at t = {:.6f} s", t)
        if cmd.out_of_region and not self._warned_region:
            self._warned_region = True
            self.warn("controller input left the training region at t = {:.6f} s", t)

        row = (
            t, s.i_d, s.i_q, s.omega_m, electromagnetic_torque(s.i_d, s.i_q, plant), tau_ref,
            applied.v_d, applied.v_q, cmd.saturated, cmd.out_of_region, omega_ref,
            applied.sector, applied.duty_1, applied.duty_2, applied.duty_0)
        self._rows.append(row)
        self._k += 1

        if k < sc.steps:
            try:
                nxt = plant_step(s, applied.v_d, applied.v_q, sc.load.value_at(t), plant, ts,
                                 sc.integrator, sc.substeps)
            except NonFiniteState as e:
                self._diagnostic = "plant state became non-finite after t = {!r} s: {}".format(t, e)
                self.error(self._diagnostic)
            else:
                self._state = nxt._replace(t=(k + 1) * ts)
        return row

    def stop(self):
        """Ends the simulation and returns the `SimTrace` recorded so far."""
        self._check_running()
        sc = self.scenario
        self.result = SimTrace.from_rows(
            self._rows, sc.sampling_time, name=sc.name,
            controller=sc.controller, diagnostic=self._diagnostic)
        if self._diagnostic is None and len(self._rows) != sc.steps + 1:
            self.result.diagnostic = "stopped after {} of {} samples".format(
                len(self._rows), sc.steps + 1)
        self._running = False
        self._rows = []
        self.info("simulation of {} finished with {} samples", sc.name, len(self.result))
        return self.result

    def run(self, seed=0):
        """Runs the complete scenario and returns its `SimTrace`.

        This is equivalent to:

            sim.simulate(seed)
            while sim.step() is not None:
                pass
            return sim.stop()

        If a simulation is already running, it is continued from where it is
        instead."""
        if not self._running:
            self.simulate(seed)
        while self.step() is not None:
            pass
        return self.stop()

    def __enter__(self):
        """Allows you to use a `Simulator` object with the `with` syntax.
        `simulate()` is called at the start of the `with` block; `stop()` is
        called at the end of it."""
        self.simulate()
        return self

    def __exit__(self, *_):
        if self._running:
            self.stop()


def run_scenario(sc, seed=0, weights=None):
    """Runs scenario `sc` and returns its `SimTrace`. A diverging plant
    yields a truncated trace with a diagnostic instead of an exception."""
    return Simulator(sc, weights).run(seed)
