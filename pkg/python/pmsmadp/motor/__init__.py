"""PMSM plant model: parameters, reference-frame transforms, dq dynamics
and their numerical integration.

All functions in this package are pure functions over immutable value
types, so they can be used from any number of simulation workers."""

__all__ = [ #@
    'MotorParams',
    'load_preset',
    'DriveState',
    'AbcTriple',
    'electrical_angle',
    'abc_to_dq0',
    'dq_to_abc',
    'rpm_to_rad_s',
    'rad_s_to_rpm',
    'electromagnetic_torque',
    'current_derivatives',
    'holding_voltage',
    'mechanical_step',
    'plant_step',
]

__pdoc__ = { #@
    'MotorParams': "Re-export of `pmsmadp.motor.params.MotorParams`.",
    'DriveState': "Re-export of `pmsmadp.motor.dynamics.DriveState`.",
    'AbcTriple': "Re-export of `pmsmadp.motor.transforms.AbcTriple`.",
}

from pmsmadp.motor.transforms import (
    AbcTriple, electrical_angle, abc_to_dq0, dq_to_abc, rpm_to_rad_s, rad_s_to_rpm)
from pmsmadp.motor.params import MotorParams, load_preset
from pmsmadp.motor.dynamics import (
    DriveState, electromagnetic_torque, current_derivatives, holding_voltage, mechanical_step,
    plant_step)
