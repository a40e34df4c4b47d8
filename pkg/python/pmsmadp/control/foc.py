"""Field-oriented control baseline: zero d-current, PI current loops and
decoupling of the speed-dependent terms."""

import math

from pmsmadp.common.document import Document, pop_value, check_empty
from pmsmadp.control.base import Controller, controller
from pmsmadp.control.pi import PIController
from pmsmadp.control.svm import saturate

__all__ = ['FocGains', 'FocState', 'FocController', 'foc_control']

class FocGains(object):
    """Gains of the two current loops.

    The defaults come from `from_bandwidth()`: pole-zero cancellation of the
    RL plant of each axis, which places the closed-loop current bandwidth
    at `bandwidth_hz` (2.5 kHz, a tenth of the switching frequency)."""

    def __init__(self, kp_d, ki_d, kp_q, ki_q):
        super().__init__()
        nonneg = lambda x: math.isfinite(x) and x >= 0.0
        kwargs = dict(kp_d=kp_d, ki_d=ki_d, kp_q=kp_q, ki_q=ki_q)
        for key in ('kp_d', 'ki_d', 'kp_q', 'ki_q'):
            setattr(self, key, pop_value(kwargs, key, float, None, nonneg,
                                         "{} must be non-negative".format(key)))

    @classmethod
    def from_bandwidth(cls, p, bandwidth_hz=2500.0):
        """kp = L·ωc and ki = Rs·ωc per axis, with ωc = 2π·`bandwidth_hz`."""
        wc = 2.0 * math.pi * bandwidth_hz
        return cls(p.inductance_d_h * wc, p.stator_resistance_ohm * wc,
                   p.inductance_q_h * wc, p.stator_resistance_ohm * wc)

    def to_document(self):
        return Document(kp_d=self.kp_d, ki_d=self.ki_d, kp_q=self.kp_q, ki_q=self.ki_q)

    @classmethod
    def from_document(cls, doc, p=None):
        """Builds gains from a document. A `bandwidth_hz` entry (requires
        `p`) selects `from_bandwidth()`."""
        data = dict(Document(doc).items())
        if 'bandwidth_hz' in data:
            bandwidth = pop_value(data, 'bandwidth_hz', float, None,
                                  lambda x: x > 0.0, "bandwidth_hz must be positive")
            check_empty(data)
            if p is None:
                raise ValueError("bandwidth-based gains need motor parameters")
            return cls.from_bandwidth(p, bandwidth)
        return cls(**data)

    def __repr__(self):
        return 'FocGains(kp_d={!r}, ki_d={!r}, kp_q={!r}, ki_q={!r})'.format(
            self.kp_d, self.ki_d, self.kp_q, self.ki_q)


class FocState(object):
    """Integrator state of the two current loops."""

    def __init__(self, gains, p):
        super().__init__()
        limit = p.max_voltage
        self.pi_d = PIController(gains.kp_d, gains.ki_d, limit)
        self.pi_q = PIController(gains.kp_q, gains.ki_q, limit)

    def reset(self):
        self.pi_d.reset()
        self.pi_q.reset()


def foc_control(s, tau_ref, gains, p, dt, state=None):
    """Computes one FOC voltage command from measured state `s`.

    i_d* = 0 and i_q* = τ*/(1.5·P·λm), clamped to ±`max_current_a`. Each
    axis has a PI current loop; the cross-coupling terms Lq·P·ω·i_q
    (d-axis) and Ld·P·ω·i_d + λm·P·ω (q-axis) of the motor model are
    cancelled by feed-forward. `state` carries the loop integrators between
    calls; a fresh one is used if omitted. All model quantities come from
    `p`, the controller's model of the motor."""
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    if state is None:
        state = FocState(gains, p)
    i_q_ref = tau_ref / p.torque_constant if p.torque_constant > 0.0 else 0.0
    i_q_ref = max(-p.max_current_a, min(p.max_current_a, i_q_ref))
    we = p.pole_pairs * s.omega_m
    v_d = state.pi_d.step(0.0 - s.i_d, dt) - p.inductance_q_h * we * s.i_q
    v_q = state.pi_q.step(i_q_ref - s.i_q, dt) + p.inductance_d_h * we * s.i_d \
        + p.magnet_flux_wb * we
    return saturate(v_d, v_q, p.max_voltage)


@controller('foc', 'pmsmadp developers', '0.1.0')
class FocController(Controller):
    """Field-oriented current control with decoupling feed-forward."""

    def __init__(self, params=None, gains=None, name=None):
        super().__init__(params, name)
        if gains is None:
            gains = FocGains.from_bandwidth(self.params)
        if not isinstance(gains, FocGains):
            raise TypeError("gains must be FocGains")
        self.gains = gains
        self.state = FocState(gains, self.params)

    def reset(self):
        self.state.reset()

    def control(self, s, tau_ref, dt):
        return foc_control(s, tau_ref, self.gains, self.params, dt, self.state)

    def to_document(self):
        return Document(kind='foc', gains=self.gains.to_document().to_dict())
