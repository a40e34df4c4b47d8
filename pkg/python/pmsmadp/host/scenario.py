"""Contains `Scenario`, the declarative description of one closed-loop
experiment, and `Profile`, the piecewise-constant reference and load
signals it uses."""

import bisect
import math
import os

from pmsmadp.adp.cost import CostSpec
from pmsmadp.common.document import Document, pop_value, check_empty
from pmsmadp.motor.dynamics import INTEGRATORS, DriveState
from pmsmadp.control.pi import SpeedLoopPI
from pmsmadp.motor.params import MotorParams
from pmsmadp.motor.transforms import rpm_to_rad_s

__all__ = ['Profile', 'Scenario']

# Tolerance for profile breakpoints that fall on the sampling grid.
_EPS = 1e-9

class Profile(object):
    """A piecewise-constant signal given as `(time, value)` breakpoints. The
    first breakpoint must be at t = 0; each value holds until the next
    breakpoint."""

    def __init__(self, points):
        super().__init__()
        if isinstance(points, (int, float)) and not isinstance(points, bool):
            points = [(0.0, points)]
        points = [(float(t), float(v)) for t, v in points]
        if not points:
            raise ValueError("a profile needs at least one breakpoint")
        if points[0][0] != 0.0:
            raise ValueError("the first profile breakpoint must be at t = 0")
        for (t0, _), (t1, _) in zip(points, points[1:]):
            if not t1 > t0:
                raise ValueError("profile breakpoints must be strictly increasing in time")
        for t, v in points:
            if not (math.isfinite(t) and math.isfinite(v)):
                raise ValueError("profile breakpoints must be finite")
        self.points = points
        self._times = [t for t, _ in points]

    @classmethod
    def constant(cls, value):
        return cls([(0.0, value)])

    @classmethod
    def step(cls, initial, final, time):
        """A single step from `initial` to `final` at `time`."""
        if time == 0.0:
            return cls([(0.0, final)])
        return cls([(0.0, initial), (time, final)])

    def value_at(self, t):
        """Returns the value in effect at time `t`."""
        i = bisect.bisect_right(self._times, t + _EPS) - 1
        return self.points[max(i, 0)][1]

    def scaled(self, factor):
        """Returns a copy with all values multiplied by `factor`."""
        return Profile([(t, v * factor) for t, v in self.points])

    @property
    def breakpoints(self):
        """The breakpoint times after t = 0."""
        return self._times[1:]

    def to_list(self):
        return [[t, v] for t, v in self.points]

    def __eq__(self, other):
        return isinstance(other, Profile) and self.points == other.points

    def __repr__(self):
        return 'Profile({!r})'.format(self.points)


class Scenario(object):
    """One closed-loop experiment.

    The plant is simulated with `plant_params`; the controller and its
    gains are designed on `controller_params`, which may differ to model
    parameter uncertainty. The speed reference (rad/s) and the load torque
    (N·m) are `Profile`s."""

    def __init__(self, **kwargs):
        super().__init__()
        self.name = pop_value(kwargs, 'name', str, 'scenario')
        self.plant_params = kwargs.pop('plant_params', None) or MotorParams()
        self.controller_params = kwargs.pop('controller_params', None) or self.plant_params
        for what in ('plant_params', 'controller_params'):
            if not isinstance(getattr(self, what), MotorParams):
                raise TypeError("{} must be MotorParams".format(what))
        self.controller = pop_value(kwargs, 'controller', str, 'foc')
        self.controller_config = dict(kwargs.pop('controller_config', None) or {})
        speed = kwargs.pop('speed', 0.0)
        self.speed = speed if isinstance(speed, Profile) else Profile(speed)
        load = kwargs.pop('load', 0.0)
        self.load = load if isinstance(load, Profile) else Profile(load)
        self.duration = pop_value(
            kwargs, 'duration', float, 1.0, lambda x: math.isfinite(x) and x > 0.0,
            "duration must be positive")
        self.initial_state = kwargs.pop('initial_state', None) or DriveState()
        if not isinstance(self.initial_state, DriveState):
            raise TypeError("initial_state must be a DriveState")
        speed_pi = kwargs.pop('speed_pi', None)
        if speed_pi is None:
            speed_pi = SpeedLoopPI()
        if not isinstance(speed_pi, SpeedLoopPI):
            speed_pi = SpeedLoopPI.from_document(speed_pi)
        self.speed_pi = speed_pi.to_document()
        self.sensor_noise = pop_value(
            kwargs, 'sensor_noise', float, 0.0, lambda x: x >= 0.0, "sensor_noise must be non-negative")
        if kwargs.get('speed_filter', 0.0) is None:
            del kwargs['speed_filter']
        self.speed_filter = pop_value(
            kwargs, 'speed_filter', float, None, lambda x: x >= 0.0, "speed_filter must be non-negative")
        self.integrator = pop_value(
            kwargs, 'integrator', str, 'rk4', lambda x: x in INTEGRATORS,
            "integrator must be one of {}".format(', '.join(INTEGRATORS)))
        self.substeps = pop_value(kwargs, 'substeps', int, 1, lambda x: x >= 1, "substeps must be positive")
        cost = kwargs.pop('cost', None)
        if cost is None:
            cost = CostSpec()
        if not isinstance(cost, CostSpec):
            cost = CostSpec.from_document(cost)
        self.cost = cost
        check_empty(kwargs)

    @property
    def sampling_time(self):
        """Control period, equal to the plant's sampling time."""
        return self.plant_params.sampling_time_s

    @property
    def steps(self):
        """Number of control periods; the trace has `steps + 1` samples."""
        return int(round(self.duration / self.sampling_time))

    def replace(self, **kwargs):
        """Returns a copy with the given constructor arguments changed."""
        args = dict(
            name=self.name, plant_params=self.plant_params,
            controller_params=self.controller_params, controller=self.controller,
            controller_config=dict(self.controller_config), speed=self.speed, load=self.load,
            duration=self.duration, initial_state=self.initial_state,
            speed_pi=self.speed_pi, sensor_noise=self.sensor_noise,
            speed_filter=self.speed_filter, integrator=self.integrator,
            substeps=self.substeps, cost=self.cost)
        args.update(kwargs)
        return Scenario(**args)

    def to_document(self):
        config = dict(self.controller_config)
        config['kind'] = self.controller
        if 'weights' in config and not isinstance(config['weights'], str):
            del config['weights']
        return Document(
            name=self.name,
            plant=self.plant_params.to_document().to_dict(),
            controller_model=self.controller_params.to_document().to_dict(),
            controller=config,
            speed_rad_s=self.speed.to_list(),
            load_nm=self.load.to_list(),
            duration_s=self.duration,
            initial_state=self.initial_state._asdict(),
            speed_pi=self.speed_pi.to_dict(),
            sensor_noise_a=self.sensor_noise,
            speed_filter_s=self.speed_filter,
            integrator=self.integrator,
            substeps=self.substeps,
            cost=self.cost.to_document().to_dict())

    @classmethod
    def from_document(cls, doc, base_dir=None):
        """Builds a scenario from a document.

        Speeds may be given in rad/s (`speed_rad_s`) or rpm (`speed_rpm`),
        each either a constant or a list of `[time, value]` breakpoints.
        A relative `weights` path in the controller entry is resolved
        against `base_dir`."""
        data = dict(Document(doc).items())
        args = {}
        if 'name' in data:
            args['name'] = data.pop('name')
        if 'plant' in data:
            args['plant_params'] = MotorParams.from_document(data.pop('plant'))
        if 'controller_model' in data:
            args['controller_params'] = MotorParams.from_document(data.pop('controller_model'))
        controller = dict(data.pop('controller', {'kind': 'foc'}))
        args['controller'] = controller.pop('kind', 'foc')
        weights = controller.get('weights')
        if isinstance(weights, str) and base_dir is not None and not os.path.isabs(weights):
            controller['weights'] = os.path.join(base_dir, weights)
        args['controller_config'] = controller
        if 'speed_rad_s' in data and 'speed_rpm' in data:
            raise TypeError("speed_rad_s cannot be combined with speed_rpm")
        if 'speed_rad_s' in data:
            args['speed'] = Profile(data.pop('speed_rad_s'))
        elif 'speed_rpm' in data:
            args['speed'] = Profile(data.pop('speed_rpm')).scaled(rpm_to_rad_s(1.0))
        if 'load_nm' in data:
            args['load'] = Profile(data.pop('load_nm'))
        for key, arg in (('duration_s', 'duration'), ('sensor_noise_a', 'sensor_noise'),
                         ('speed_filter_s', 'speed_filter'), ('integrator', 'integrator'),
                         ('substeps', 'substeps'), ('speed_pi', 'speed_pi'), ('cost', 'cost')):
            value = data.pop(key, None)
            if value is not None:
                args[arg] = value
        if 'initial_state' in data:
            args['initial_state'] = DriveState(**data.pop('initial_state'))
        check_empty(data)
        return cls(**args)

    @classmethod
    def load(cls, path):
        """Loads a scenario document; relative weight paths are resolved
        against the document's directory."""
        return cls.from_document(Document.load(path), os.path.dirname(os.path.abspath(path)))

    def __repr__(self):
        return 'Scenario(name={!r}, controller={!r}, duration={!r})'.format(
            self.name, self.controller, self.duration)
