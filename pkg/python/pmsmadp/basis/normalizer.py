"""Scaling of network inputs and of the stage cost to dimensionless
coordinates."""

import math
import numpy as np

from pmsmadp.common.document import Document, pop_value, check_empty

__all__ = ['Normalizer', 'normalize', 'voltage_scale']

def voltage_scale(p, tau_scale=None, i_scale=None):
    """Returns the voltage that, applied above the holding voltage for one
    sampling period, moves the torque of motor `p` by `tau_scale`.

    Falls back to moving the q-axis current by `i_scale` for a machine
    without magnet flux."""
    tau_scale = p.max_torque_nm if tau_scale is None else tau_scale
    i_scale = p.max_current_a if i_scale is None else i_scale
    kt = p.torque_constant
    if kt > 0.0:
        return p.inductance_q_h * tau_scale / (kt * p.sampling_time_s)
    return p.inductance_q_h * i_scale / p.sampling_time_s

# voltage_scale() of the nominal preset.
_NOMINAL_V_SCALE = 0.003 * 1.91 / (1.5 * 5 * 0.015 * 40e-6)

class Normalizer(object):
    """Scales currents, reference torque and speed by their maxima.

    The normalized input vector is ordered `[i_d, i_q, τ*, ω_m]`. The
    voltage scale `v_scale` normalizes the control term of the stage
    cost; it does not enter the network inputs."""

    def __init__(self, i_scale=7.0, tau_scale=1.91, omega_scale=2.0 * math.pi * 100.0,
                 v_scale=_NOMINAL_V_SCALE):
        super().__init__()
        check = lambda x: math.isfinite(x) and x > 0.0
        kwargs = dict(i_scale=i_scale, tau_scale=tau_scale, omega_scale=omega_scale, v_scale=v_scale)
        self.i_scale = pop_value(kwargs, 'i_scale', float, None, check, "i_scale must be positive")
        self.tau_scale = pop_value(kwargs, 'tau_scale', float, None, check, "tau_scale must be positive")
        self.omega_scale = pop_value(kwargs, 'omega_scale', float, None, check, "omega_scale must be positive")
        self.v_scale = pop_value(kwargs, 'v_scale', float, None, check, "v_scale must be positive")

    @classmethod
    def from_params(cls, p):
        """Uses the maximum current, torque and speed of a `MotorParams`,
        and its `voltage_scale()`."""
        return cls(p.max_current_a, p.max_torque_nm, p.max_speed_rad_s, voltage_scale(p))

    @property
    def scales(self):
        """The scale of each normalized coordinate as a numpy vector."""
        return np.array([self.i_scale, self.i_scale, self.tau_scale, self.omega_scale])

    def normalize(self, i_d, i_q, tau_ref, omega_m):
        """Returns η = [i_d/i_scale, i_q/i_scale, τ*/τ_scale, ω/ω_scale].
        Arguments may be scalars or equally shaped arrays; for arrays the
        result has the coordinates along the last axis."""
        return np.stack([
            np.asarray(i_d, dtype=float) / self.i_scale,
            np.asarray(i_q, dtype=float) / self.i_scale,
            np.asarray(tau_ref, dtype=float) / self.tau_scale,
            np.asarray(omega_m, dtype=float) / self.omega_scale], axis=-1)

    def denormalize(self, eta):
        """Inverse of `normalize()`; returns `(i_d, i_q, τ*, ω_m)`."""
        eta = np.asarray(eta, dtype=float)
        x = eta * self.scales[:eta.shape[-1]]
        return tuple(x[..., k] for k in range(x.shape[-1]))

    def to_document(self):
        return Document(i_scale=self.i_scale, tau_scale=self.tau_scale,
                        omega_scale=self.omega_scale, v_scale=self.v_scale)

    @classmethod
    def from_document(cls, doc):
        data = dict(Document(doc).items())
        args = {}
        for key in ('i_scale', 'tau_scale', 'omega_scale'):
            if key not in data:
                raise ValueError("normalizer document lacks {!r}".format(key))
            args[key] = data.pop(key)
        if 'v_scale' in data:
            args['v_scale'] = data.pop('v_scale')
        check_empty(data)
        return cls(**args)

    def __eq__(self, other):
        if not isinstance(other, Normalizer):
            return False
        return (self.i_scale, self.tau_scale, self.omega_scale, self.v_scale) == (
            other.i_scale, other.tau_scale, other.omega_scale, other.v_scale)

    def __repr__(self):
        return 'Normalizer(i_scale={!r}, tau_scale={!r}, omega_scale={!r}, v_scale={!r})'.format(
            self.i_scale, self.tau_scale, self.omega_scale, self.v_scale)


def normalize(i_d, i_q, tau_ref, omega_m, n):
    """Functional form of `Normalizer.normalize()`."""
    return n.normalize(i_d, i_q, tau_ref, omega_m)
