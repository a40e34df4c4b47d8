"""Measurement path shared by all controllers."""

import math
import numpy as np

from pmsmadp.motor.dynamics import DriveState
from pmsmadp.motor.transforms import abc_to_dq0, dq_to_abc, electrical_angle

__all__ = ['CurrentSensor', 'SpeedFilter']

class CurrentSensor(object):
    """Measures phase currents a and b, reconstructs c = −a − b for a
    star-connected machine and transforms the result to the dq frame.

    Optional zero-mean Gaussian noise with standard deviation `noise_std`
    amperes is added to the two measured phases, drawn from a generator
    seeded with `seed`."""

    def __init__(self, noise_std=0.0, seed=0):
        super().__init__()
        noise_std = float(noise_std)
        if not (math.isfinite(noise_std) and noise_std >= 0.0):
            raise ValueError("noise_std must be non-negative")
        self.noise_std = noise_std
        self._rng = np.random.default_rng(seed)

    def measure(self, s, p):
        """Returns the measured `DriveState`: dq currents through the phase
        current path, speed and angle as simulated."""
        theta_e = electrical_angle(s.theta_m, p.pole_pairs)
        i_a, i_b, _ = dq_to_abc(s.i_d, s.i_q, theta_e)
        if self.noise_std > 0.0:
            n_a, n_b = self._rng.normal(0.0, self.noise_std, size=2)
            i_a += n_a
            i_b += n_b
        i_d, i_q, _ = abc_to_dq0((i_a, i_b, -i_a - i_b), theta_e)
        return DriveState(i_d, i_q, s.omega_m, s.theta_m, s.t)


class SpeedFilter(object):
    """First-order low-pass filter on the measured speed. A `time_constant`
    of `None` or zero passes the speed through unchanged."""

    def __init__(self, time_constant=None):
        super().__init__()
        if time_constant is not None:
            time_constant = float(time_constant)
            if not (math.isfinite(time_constant) and time_constant >= 0.0):
                raise ValueError("time_constant must be non-negative")
        self.time_constant = time_constant or None
        self.value = None

    def reset(self):
        self.value = None

    def filter(self, omega, dt):
        """Returns the filtered speed after feeding in `omega`."""
        if self.time_constant is None:
            return omega
        if self.value is None:
            self.value = omega
        else:
            alpha = dt / (self.time_constant + dt)
            self.value += alpha * (omega - self.value)
        return self.value
