"""Reference-frame transforms between phase (abc) quantities and the
rotor-fixed dq0 frame, plus unit helpers."""

import math
from collections import namedtuple

__all__ = [
    'AbcTriple',
    'electrical_angle',
    'abc_to_dq0',
    'dq_to_abc',
    'rpm_to_rad_s',
    'rad_s_to_rpm',
]

_TWO_PI = 2.0 * math.pi
_PHASE = _TWO_PI / 3.0

class AbcTriple(namedtuple('AbcTriple', ['f_a', 'f_b', 'f_c'])):
    """Three phase quantities (voltages, currents or flux linkages)."""
    __slots__ = ()

    def __new__(cls, f_a, f_b, f_c):
        values = [float(f_a), float(f_b), float(f_c)]
        for value in values:
            if not math.isfinite(value):
                raise ValueError("phase quantities must be finite")
        return super().__new__(cls, *values)


def wrap_angle(theta):
    """Wraps an angle to [0, 2π)."""
    theta = math.fmod(theta, _TWO_PI)
    if theta < 0.0:
        theta += _TWO_PI
    # fmod of a value just below a multiple of 2π can round up to 2π itself.
    if theta >= _TWO_PI:
        theta = 0.0
    return theta

def electrical_angle(theta_m, pole_pairs):
    """Returns the electrical angle P·θm wrapped to [0, 2π)."""
    if pole_pairs < 1:
        raise ValueError("pole_pairs must be at least 1")
    return wrap_angle(pole_pairs * theta_m)

def abc_to_dq0(f, theta_e):
    """Park-Clarke transform with amplitude-invariant (2/3) scaling.

    Returns `(f_d, f_q, f_0)`."""
    f_a, f_b, f_c = f
    ca = math.cos(theta_e)
    cb = math.cos(theta_e - _PHASE)
    cc = math.cos(theta_e + _PHASE)
    sa = math.sin(theta_e)
    sb = math.sin(theta_e - _PHASE)
    sc = math.sin(theta_e + _PHASE)
    f_d = (2.0 / 3.0) * (ca * f_a + cb * f_b + cc * f_c)
    f_q = (2.0 / 3.0) * (-sa * f_a - sb * f_b - sc * f_c)
    f_0 = (f_a + f_b + f_c) / 3.0
    return f_d, f_q, f_0

def dq_to_abc(f_d, f_q, theta_e):
    """Inverse of `abc_to_dq0()` for a zero zero-sequence component."""
    return AbcTriple(
        f_d * math.cos(theta_e) - f_q * math.sin(theta_e),
        f_d * math.cos(theta_e - _PHASE) - f_q * math.sin(theta_e - _PHASE),
        f_d * math.cos(theta_e + _PHASE) - f_q * math.sin(theta_e + _PHASE))

def rpm_to_rad_s(rpm):
    """Converts revolutions per minute to rad/s."""
    return rpm * _TWO_PI / 60.0

def rad_s_to_rpm(omega):
    """Converts rad/s to revolutions per minute."""
    return omega * 60.0 / _TWO_PI
