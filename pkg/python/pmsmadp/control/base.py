"""Contains the `Controller` base class and the `@controller` decorator."""

from pmsmadp.common.log import Loggable
from pmsmadp.motor.params import MotorParams

__all__ = ['Controller', 'controller', 'REGISTRY']

REGISTRY = {}

class controller(object):
    """Decorator for `Controller` implementations. It generates the metadata
    getters and registers the class under `name` for `make_controller()`."""

    def __init__(self, name, author, version):
        super().__init__()
        self._name = name
        self._author = author
        self._version = version

    def __call__(self, cls):
        if not issubclass(cls, Controller):
            raise TypeError("@controller can only decorate Controller subclasses")
        if self._name in REGISTRY:
            raise ValueError("duplicate controller name {!r}".format(self._name))
        setattr(cls, "get_name", lambda _: self._name)
        setattr(cls, "get_author", lambda _: self._author)
        setattr(cls, "get_version", lambda _: self._version)
        REGISTRY[self._name] = cls
        return cls


class Controller(Loggable):
    """Represents an inner-loop torque controller. Must be subclassed.

    Every controller receives the same inputs each control period: the
    measured `DriveState` (dq currents from the phase current path, speed
    and angle), the torque reference τ* from the shared speed loop, and the
    control period. It returns a `ControlCommand`. Controllers own their
    internal state (integrators); create one instance per simulation.

    `params` are the controller's model of the motor, which may differ from
    the simulated plant."""

    _component = 'control'

    def __init__(self, params=None, name=None):
        super().__init__(name)
        if params is None:
            params = MotorParams()
        if not isinstance(params, MotorParams):
            raise TypeError("params must be MotorParams")
        self.params = params

    def get_name(self):
        """Returns the registered name of this controller."""
        raise NotImplementedError()

    def get_author(self):
        raise NotImplementedError()

    def get_version(self):
        raise NotImplementedError()

    def reset(self):
        """Resets the internal controller state. The default implementation
        does nothing."""

    def control(self, s, tau_ref, dt):
        """Computes the voltage command for measured state `s`, torque
        reference `tau_ref` [N·m] and control period `dt` [s]."""
        raise NotImplementedError()

    def to_document(self):
        """Returns the controller configuration as a document."""
        raise NotImplementedError()
