"""Discrete PI regulators with output clamping and anti-windup."""

import math

from pmsmadp.common.document import Document, pop_value, check_empty

__all__ = ['PIController', 'SpeedLoopPI', 'speed_pi_step', 'ANTI_WINDUP_MODES']

ANTI_WINDUP_MODES = ('conditional', 'back_calculation')

def _clamp(x, limit):
    if limit is None:
        return x
    return max(-limit, min(limit, x))

class PIController(object):
    """Parallel-form PI regulator `kp·e + ki·∫e dt` with a symmetric output
    limit.

    The integral is accumulated with forward Euler. With the default
    `conditional` anti-windup mode, the integral is frozen whenever the
    output is clamped and the error would drive it further into the limit.
    The `back_calculation` mode instead bleeds the clamped-off part of the
    output back into the integral with tracking time constant
    `tracking_time` (default kp/ki)."""

    def __init__(self, kp, ki, limit=None, anti_windup='conditional', tracking_time=None):
        super().__init__()
        kwargs = dict(kp=kp, ki=ki)
        nonneg = lambda x: math.isfinite(x) and x >= 0.0
        self.kp = pop_value(kwargs, 'kp', float, None, nonneg, "kp must be non-negative")
        self.ki = pop_value(kwargs, 'ki', float, None, nonneg, "ki must be non-negative")
        if limit is not None:
            limit = float(limit)
            if not limit > 0.0:
                raise ValueError("limit must be positive")
        self.limit = limit
        if anti_windup not in ANTI_WINDUP_MODES:
            raise ValueError("anti_windup must be one of {}".format(', '.join(ANTI_WINDUP_MODES)))
        self.anti_windup = anti_windup
        if tracking_time is None and self.ki > 0.0:
            tracking_time = self.kp / self.ki if self.kp > 0.0 else 1.0 / self.ki
        self.tracking_time = tracking_time
        self.integral = 0.0
        self.saturated = False

    def reset(self, integral=0.0):
        """Resets the integrator state."""
        self.integral = float(integral)
        self.saturated = False

    def output(self, error):
        """Returns the output for `error` without updating the state."""
        return _clamp(self.kp * error + self.ki * self.integral, self.limit)

    def step(self, error, dt):
        """Advances the regulator by `dt` and returns the clamped output."""
        if not dt > 0.0:
            raise ValueError("dt must be positive")
        candidate = self.integral + error * dt
        raw = self.kp * error + self.ki * candidate
        out = _clamp(raw, self.limit)
        self.saturated = out != raw
        if not self.saturated:
            self.integral = candidate
        elif self.anti_windup == 'conditional':
            if error * raw < 0.0:
                self.integral = candidate
            out = _clamp(self.kp * error + self.ki * self.integral, self.limit)
        elif self.ki > 0.0:
            self.integral = candidate + (out - raw) * dt / (self.ki * self.tracking_time)
        return out

    def __repr__(self):
        return 'PIController(kp={!r}, ki={!r}, limit={!r}, anti_windup={!r})'.format(
            self.kp, self.ki, self.limit, self.anti_windup)


class SpeedLoopPI(object):
    """The outer speed regulator shared by all controllers: turns the speed
    error into the torque reference τ*, clamped to ±`torque_limit`."""

    def __init__(self, **kwargs):
        super().__init__()
        nonneg = lambda x: math.isfinite(x) and x >= 0.0
        kp = pop_value(kwargs, 'kp', float, 0.0108, nonneg, "kp must be non-negative")
        ki = pop_value(kwargs, 'ki', float, 0.675, nonneg, "ki must be non-negative")
        limit = pop_value(
            kwargs, 'torque_limit', float, 1.91, lambda x: math.isfinite(x) and x > 0.0,
            "torque_limit must be positive")
        anti_windup = pop_value(
            kwargs, 'anti_windup', str, 'conditional', lambda x: x in ANTI_WINDUP_MODES,
            "anti_windup must be one of {}".format(', '.join(ANTI_WINDUP_MODES)))
        check_empty(kwargs)
        self.pi = PIController(kp, ki, limit, anti_windup)

    @property
    def kp(self):
        return self.pi.kp

    @property
    def ki(self):
        return self.pi.ki

    @property
    def torque_limit(self):
        return self.pi.limit

    @property
    def integral(self):
        """Integrated speed error [rad]."""
        return self.pi.integral

    def reset(self, integral=0.0):
        self.pi.reset(integral)

    def step(self, omega_ref, omega_m, dt):
        """Returns τ* for the given speed reference and measured speed."""
        return self.pi.step(omega_ref - omega_m, dt)

    def to_document(self):
        return Document(kp=self.kp, ki=self.ki, torque_limit=self.torque_limit,
                        anti_windup=self.pi.anti_windup)

    @classmethod
    def from_document(cls, doc):
        return cls(**dict(Document(doc).items()))

    def __repr__(self):
        return 'SpeedLoopPI(kp={!r}, ki={!r}, torque_limit={!r})'.format(
            self.kp, self.ki, self.torque_limit)


def speed_pi_step(omega_ref, omega_m, pi, dt):
    """Functional form of `SpeedLoopPI.step()`."""
    return pi.step(omega_ref, omega_m, dt)
