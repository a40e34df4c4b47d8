"""Continuous-time PMSM dynamics in the dq frame and their fixed-step
integration."""

import math
from collections import namedtuple

from pmsmadp.common.errors import NonFiniteState
from pmsmadp.motor.transforms import wrap_angle

__all__ = [
    'DriveState',
    'INTEGRATORS',
    'electromagnetic_torque',
    'current_derivatives',
    'holding_voltage',
    'mechanical_step',
    'plant_step',
]

INTEGRATORS = ('rk4', 'euler')

class DriveState(namedtuple('DriveState', ['i_d', 'i_q', 'omega_m', 'theta_m', 't'])):
    """Plant state: dq currents [A], mechanical speed [rad/s], mechanical
    angle [rad, wrapped to [0, 2π)] and time [s]."""
    __slots__ = ()

    def __new__(cls, i_d=0.0, i_q=0.0, omega_m=0.0, theta_m=0.0, t=0.0):
        return super().__new__(
            cls, float(i_d), float(i_q), float(omega_m), wrap_angle(float(theta_m)), float(t))

    def is_finite(self):
        """Returns whether all fields are finite."""
        return all(math.isfinite(x) for x in self)


def electromagnetic_torque(i_d, i_q, p):
    """Returns 1.5·P·((Ld − Lq)·i_d·i_q + λm·i_q) [N·m]."""
    return 1.5 * p.pole_pairs * (
        (p.inductance_d_h - p.inductance_q_h) * i_d * i_q + p.magnet_flux_wb * i_q)

def current_derivatives(s, v_d, v_q, p):
    """Returns `(di_d/dt, di_q/dt)` of the dq voltage equations, including
    the speed-dependent cross-coupling and back-EMF terms."""
    we = p.pole_pairs * s.omega_m
    did = (-p.stator_resistance_ohm * s.i_d + p.inductance_q_h * we * s.i_q + v_d) / p.inductance_d_h
    diq = (-p.stator_resistance_ohm * s.i_q - p.inductance_d_h * we * s.i_d
           - p.magnet_flux_wb * we + v_q) / p.inductance_q_h
    return did, diq

def holding_voltage(i_d, i_q, omega_m, p):
    """Returns the dq voltages `(v_d, v_q)` that keep the currents constant at
    speed `omega_m`, i.e. for which `current_derivatives()` vanishes.
    Broadcasts over arrays."""
    we = p.pole_pairs * omega_m
    v_d = p.stator_resistance_ohm * i_d - p.inductance_q_h * we * i_q
    v_q = p.stator_resistance_ohm * i_q + p.inductance_d_h * we * i_d + p.magnet_flux_wb * we
    return v_d, v_q

def mechanical_step(s, tau_em, tau_load, p, dt):
    """Advances the torque balance J·dω/dt = τem − b·ω − τL and dθ/dt = ω by
    one explicit Euler step; currents are left untouched."""
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    domega = (tau_em - p.viscous_friction_nms * s.omega_m - tau_load) / p.inertia_kgm2
    return DriveState(
        s.i_d, s.i_q,
        s.omega_m + dt * domega,
        s.theta_m + dt * s.omega_m,
        s.t + dt)

def _derivatives(x, v_d, v_q, tau_load, p):
    i_d, i_q, omega, _ = x
    we = p.pole_pairs * omega
    did = (-p.stator_resistance_ohm * i_d + p.inductance_q_h * we * i_q + v_d) / p.inductance_d_h
    diq = (-p.stator_resistance_ohm * i_q - p.inductance_d_h * we * i_d
           - p.magnet_flux_wb * we + v_q) / p.inductance_q_h
    tau = electromagnetic_torque(i_d, i_q, p)
    domega = (tau - p.viscous_friction_nms * omega - tau_load) / p.inertia_kgm2
    return (did, diq, domega, omega)

def _rk4(x, h, fn):
    k1 = fn(x)
    k2 = fn(tuple(a + 0.5 * h * b for a, b in zip(x, k1)))
    k3 = fn(tuple(a + 0.5 * h * b for a, b in zip(x, k2)))
    k4 = fn(tuple(a + h * b for a, b in zip(x, k3)))
    return tuple(
        a + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        for a, b1, b2, b3, b4 in zip(x, k1, k2, k3, k4))

def _euler(x, h, fn):
    return tuple(a + h * b for a, b in zip(x, fn(x)))

def plant_step(s, v_d, v_q, tau_load, p, dt, method='rk4', substeps=1):
    """Advances the coupled electrical and mechanical dynamics by `dt` with
    the voltages and load torque held constant.

    `method` is `'rk4'` (default) or `'euler'`; `dt` is split into
    `substeps` equal integrator steps. The angle is wrapped once at the end.
    Raises `NonFiniteState` if the result is not finite."""
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    if dt > p.sampling_time_s * (1.0 + 1e-9):
        raise ValueError("dt must not exceed the sampling time")
    if method == 'rk4':
        integrate = _rk4
    elif method == 'euler':
        integrate = _euler
    else:
        raise ValueError("unknown integrator {!r}".format(method))
    substeps = int(substeps)
    if substeps < 1:
        raise ValueError("substeps must be at least 1")

    def fn(x):
        return _derivatives(x, v_d, v_q, tau_load, p)

    h = dt / substeps
    x = (s.i_d, s.i_q, s.omega_m, s.theta_m)
    for _ in range(substeps):
        x = integrate(x, h, fn)
    if not all(math.isfinite(a) for a in x):
        raise NonFiniteState(x)
    return DriveState(x[0], x[1], x[2], x[3], s.t + dt)
