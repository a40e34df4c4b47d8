"""Contains `MotorParams`, the electrical and mechanical constants of a
PMSM and its drive, and the bundled parameter presets."""

import math
import os
from collections import namedtuple

from pmsmadp.common.document import Document, pop_value, check_empty
from pmsmadp.motor.transforms import rpm_to_rad_s

__all__ = ['MotorParams', 'PRESETS', 'load_preset']

_PRESET_DIR = os.path.join(os.path.dirname(__file__), 'presets')

PRESETS = ('nominal', 'perturbed_sim', 'perturbed_exp')

_FIELDS = [
    'pole_pairs',
    'magnet_flux_wb',
    'stator_resistance_ohm',
    'inductance_d_h',
    'inductance_q_h',
    'inertia_kgm2',
    'viscous_friction_nms',
    'dc_bus_v',
    'rated_current_a',
    'max_current_a',
    'rated_torque_nm',
    'max_torque_nm',
    'rated_speed_rad_s',
    'max_speed_rad_s',
    'sampling_time_s',
]

def _positive(x):
    return math.isfinite(x) and x > 0.0

def _nonnegative(x):
    return math.isfinite(x) and x >= 0.0


class MotorParams(namedtuple('MotorParams', _FIELDS)):
    """Immutable set of motor and drive constants.

    Defaults correspond to the `nominal` preset: a 5 pole-pair surface-mount
    machine with a 100 V DC bus controlled at 25 kHz. All quantities are in
    SI units; speeds are mechanical speeds in rad/s.

    Construct with keyword arguments; fields not specified take their
    nominal value. `inductance_h` may be used as a shorthand that sets both
    `inductance_d_h` and `inductance_q_h`, and `rated_speed_rpm` /
    `max_speed_rpm` may be given instead of the rad/s fields.
    """

    __slots__ = ()

    def __new__(cls, **kwargs):
        kwargs = dict(kwargs)
        if 'inductance_h' in kwargs:
            ls = kwargs.pop('inductance_h')
            for key in ('inductance_d_h', 'inductance_q_h'):
                if key in kwargs:
                    raise TypeError("inductance_h cannot be combined with {}".format(key))
                kwargs[key] = ls
        for name in ('rated_speed', 'max_speed'):
            rpm = kwargs.pop(name + '_rpm', None)
            if rpm is not None:
                if name + '_rad_s' in kwargs:
                    raise TypeError("{0}_rpm cannot be combined with {0}_rad_s".format(name))
                kwargs[name + '_rad_s'] = rpm_to_rad_s(float(rpm))

        pole_pairs = pop_value(
            kwargs, 'pole_pairs', int, 5, lambda x: x >= 1,
            "pole_pairs must be a positive integer")
        values = [pole_pairs]
        positive = {
            'stator_resistance_ohm', 'inductance_d_h', 'inductance_q_h',
            'inertia_kgm2', 'dc_bus_v', 'sampling_time_s', 'rated_current_a',
            'max_current_a', 'rated_torque_nm', 'max_torque_nm',
            'rated_speed_rad_s', 'max_speed_rad_s'}
        for field in _FIELDS[1:]:
            check = _positive if field in positive else _nonnegative
            bound = 'strictly positive' if field in positive else 'non-negative'
            values.append(pop_value(
                kwargs, field, float, _NOMINAL[field], check,
                "{} must be finite and {}".format(field, bound)))
        check_empty(kwargs)

        self = super().__new__(cls, *values)
        for what in ('current_a', 'torque_nm', 'speed_rad_s'):
            if getattr(self, 'max_' + what) < getattr(self, 'rated_' + what):
                raise ValueError("max_{0} must not be smaller than rated_{0}".format(what))
        return self

    def __getnewargs_ex__(self):
        return (), self._asdict()

    @property
    def inductance_h(self):
        """The d-axis inductance if it equals the q-axis inductance (surface
        magnets), otherwise `ValueError`."""
        if self.inductance_d_h != self.inductance_q_h:
            raise ValueError("machine is salient; Ld != Lq")
        return self.inductance_d_h

    @property
    def torque_constant(self):
        """Torque per ampere of q-current for a non-salient machine,
        1.5·P·λm [N·m/A]."""
        return 1.5 * self.pole_pairs * self.magnet_flux_wb

    @property
    def max_voltage(self):
        """Radius of the linear modulation range of the inverter, Vdc/√3."""
        return self.dc_bus_v / math.sqrt(3.0)

    def with_model_error(self, **fields):
        """Returns a copy with the given fields replaced. Accepts the same
        keywords (and shorthands) as the constructor."""
        data = self._asdict()
        if 'inductance_h' in fields:
            del data['inductance_d_h']
            del data['inductance_q_h']
        for name in ('rated_speed', 'max_speed'):
            if name + '_rpm' in fields:
                del data[name + '_rad_s']
        data.update(fields)
        return MotorParams(**data)

    def to_document(self):
        """Serializes to a `Document` with one entry per field."""
        return Document(self._asdict())

    @classmethod
    def from_document(cls, doc):
        """Builds `MotorParams` from a document (or dict).

        The optional `preset` entry names a bundled preset (or another
        preset-referencing document) whose values are used as the base; the
        remaining entries override individual fields."""
        data = dict(Document(doc).items())
        preset = data.pop('preset', None)
        if preset is None:
            return cls(**data)
        return load_preset(preset).with_model_error(**data)

    @classmethod
    def load(cls, path):
        """Loads parameters from a JSON or CBOR document file."""
        return cls.from_document(Document.load(path))

    def __str__(self):
        return 'MotorParams(P={}, λm={} Wb, Rs={} Ω, Ld={} H, Lq={} H, J={} kg·m², Vdc={} V, Ts={} s)'.format(
            self.pole_pairs, self.magnet_flux_wb, self.stator_resistance_ohm,
            self.inductance_d_h, self.inductance_q_h, self.inertia_kgm2,
            self.dc_bus_v, self.sampling_time_s)


_NOMINAL = {
    'magnet_flux_wb': 0.015,
    'stator_resistance_ohm': 1.2,
    'inductance_d_h': 0.003,
    'inductance_q_h': 0.003,
    'inertia_kgm2': 30e-6,
    'viscous_friction_nms': 0.0,
    'dc_bus_v': 100.0,
    'rated_current_a': 2.5,
    'max_current_a': 7.0,
    'rated_torque_nm': 0.64,
    'max_torque_nm': 1.91,
    'rated_speed_rad_s': rpm_to_rad_s(3000.0),
    'max_speed_rad_s': rpm_to_rad_s(6000.0),
    'sampling_time_s': 40e-6,
}


def load_preset(name):
    """Returns the `MotorParams` of a bundled preset: `nominal`,
    `perturbed_sim` or `perturbed_exp`."""
    if not isinstance(name, str):
        raise TypeError("preset name must be a string")
    if name not in PRESETS:
        raise ValueError("unknown motor preset {!r}; expected one of {}".format(
            name, ', '.join(PRESETS)))
    return MotorParams.from_document(Document.load(os.path.join(_PRESET_DIR, name + '.json')))
