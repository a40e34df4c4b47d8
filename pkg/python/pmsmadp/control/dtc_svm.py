"""PI-based direct torque control with space vector modulation, in
stator-flux-oriented coordinates."""

import math

from pmsmadp.common.document import Document, pop_value, check_empty
from pmsmadp.control.base import Controller, controller
from pmsmadp.control.pi import PIController
from pmsmadp.control.svm import saturate

__all__ = ['DtcSvmGains', 'DtcSvmState', 'DtcSvmController', 'dtc_svm_control',
           'estimate_flux', 'estimate_torque', 'flux_reference']

class DtcSvmGains(object):
    """Gains of the torque and flux regulators.

    `from_bandwidth()` tunes the torque loop by pole-zero cancellation of
    the RL plant seen through the torque constant (bandwidth 1 kHz), and
    the flux loop, an integrator plant, for a critically damped pair of
    poles at 250 Hz."""

    def __init__(self, kp_torque, ki_torque, kp_flux, ki_flux):
        super().__init__()
        nonneg = lambda x: math.isfinite(x) and x >= 0.0
        kwargs = dict(kp_torque=kp_torque, ki_torque=ki_torque, kp_flux=kp_flux, ki_flux=ki_flux)
        for key in ('kp_torque', 'ki_torque', 'kp_flux', 'ki_flux'):
            setattr(self, key, pop_value(kwargs, key, float, None, nonneg,
                                         "{} must be non-negative".format(key)))

    @classmethod
    def from_bandwidth(cls, p, torque_bandwidth_hz=1000.0, flux_bandwidth_hz=250.0, damping=1.0):
        wt = 2.0 * math.pi * torque_bandwidth_hz
        wn = 2.0 * math.pi * flux_bandwidth_hz
        kt = p.torque_constant
        if not kt > 0.0:
            raise ValueError("torque loop tuning needs a nonzero magnet flux")
        inductance = 0.5 * (p.inductance_d_h + p.inductance_q_h)
        return cls(wt * inductance / kt, wt * p.stator_resistance_ohm / kt,
                   2.0 * damping * wn, wn * wn)

    def to_document(self):
        return Document(kp_torque=self.kp_torque, ki_torque=self.ki_torque,
                        kp_flux=self.kp_flux, ki_flux=self.ki_flux)

    @classmethod
    def from_document(cls, doc, p=None):
        """Builds gains from a document. `torque_bandwidth_hz` /
        `flux_bandwidth_hz` entries (require `p`) select
        `from_bandwidth()`."""
        data = dict(Document(doc).items())
        if 'torque_bandwidth_hz' in data or 'flux_bandwidth_hz' in data:
            args = {}
            for key in ('torque_bandwidth_hz', 'flux_bandwidth_hz', 'damping'):
                if key in data:
                    args[key] = pop_value(data, key, float, None, lambda x: x > 0.0,
                                          "{} must be positive".format(key))
            check_empty(data)
            if p is None:
                raise ValueError("bandwidth-based gains need motor parameters")
            return cls.from_bandwidth(p, **args)
        return cls(**data)

    def __repr__(self):
        return 'DtcSvmGains(kp_torque={!r}, ki_torque={!r}, kp_flux={!r}, ki_flux={!r})'.format(
            self.kp_torque, self.ki_torque, self.kp_flux, self.ki_flux)


class DtcSvmState(object):
    """Integrator state of the torque and flux regulators. The flux
    regulator output is limited to half the inverter voltage so that the
    torque regulator keeps the other half."""

    def __init__(self, gains, p):
        super().__init__()
        limit = p.max_voltage
        self.pi_torque = PIController(gains.kp_torque, gains.ki_torque, limit)
        self.pi_flux = PIController(gains.kp_flux, gains.ki_flux, 0.5 * limit)

    def reset(self):
        self.pi_torque.reset()
        self.pi_flux.reset()


def estimate_flux(i_d, i_q, p):
    """Stator flux linkage `(λd, λq)` = (Ld·i_d + λm, Lq·i_q) [Wb]."""
    return p.inductance_d_h * i_d + p.magnet_flux_wb, p.inductance_q_h * i_q

def estimate_torque(i_d, i_q, p):
    """Torque estimate 1.5·P·(λd·i_q − λq·i_d) from the flux estimate."""
    flux_d, flux_q = estimate_flux(i_d, i_q, p)
    return 1.5 * p.pole_pairs * (flux_d * i_q - flux_q * i_d)

def flux_reference(tau_ref, p, flux_ref=None):
    """Returns the stator flux magnitude √(λ0² + (Lq·τ*/kt)²) the machine
    carries while it produces τ* with zero d-current. The no-load flux λ0
    (`flux_ref`) defaults to λm; holding |λ| at λm alone is only feasible
    for Lq·|i_q| ≪ λm."""
    if flux_ref is None:
        flux_ref = p.magnet_flux_wb
    kt = p.torque_constant
    if not kt > 0.0:
        return flux_ref
    return math.hypot(flux_ref, p.inductance_q_h * tau_ref / kt)

def dtc_svm_control(s, tau_ref, flux_ref, gains, model_params, dt, state=None):
    """Computes one DTC-SVM voltage command from measured state `s`.

    τ* is clamped to the torque of `max_current_a` and the flux reference
    follows from it through `flux_reference()`, with `flux_ref` as the
    no-load flux. The stator flux and torque are estimated with
    `model_params`. In the frame aligned with the estimated stator flux
    (x along the flux, y in quadrature), the flux regulator sets v_x and
    the torque regulator sets v_y, each with resistive feed-forward; v_y
    also carries the rotational EMF +P·ω·|λ|. The result is rotated back to
    dq and saturated."""
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    p = model_params
    if state is None:
        state = DtcSvmState(gains, p)
    tau_limit = p.torque_constant * p.max_current_a
    if tau_limit > 0.0:
        tau_ref = max(-tau_limit, min(tau_limit, tau_ref))
    target = flux_reference(tau_ref, p, flux_ref)
    flux_d, flux_q = estimate_flux(s.i_d, s.i_q, p)
    flux = math.hypot(flux_d, flux_q)
    delta = math.atan2(flux_q, flux_d)
    c = math.cos(delta)
    sn = math.sin(delta)
    torque = 1.5 * p.pole_pairs * (flux_d * s.i_q - flux_q * s.i_d)

    i_x = s.i_d * c + s.i_q * sn
    i_y = -s.i_d * sn + s.i_q * c
    v_x = state.pi_flux.step(target - flux, dt) + p.stator_resistance_ohm * i_x
    v_y = state.pi_torque.step(tau_ref - torque, dt) + p.stator_resistance_ohm * i_y \
        + p.pole_pairs * s.omega_m * flux
    return saturate(v_x * c - v_y * sn, v_x * sn + v_y * c, p.max_voltage)


@controller('dtc_svm', 'pmsmadp developers', '0.1.0')
class DtcSvmController(Controller):
    """DTC-SVM with PI torque and flux regulators. The no-load flux
    reference `flux_ref` defaults to the model's magnet flux; under load the
    reference rises with τ* as `flux_reference()` describes."""

    def __init__(self, params=None, gains=None, flux_ref=None, name=None):
        super().__init__(params, name)
        if gains is None:
            gains = DtcSvmGains.from_bandwidth(self.params)
        if not isinstance(gains, DtcSvmGains):
            raise TypeError("gains must be DtcSvmGains")
        self.gains = gains
        self.flux_ref = self.params.magnet_flux_wb if flux_ref is None else float(flux_ref)
        if not self.flux_ref > 0.0:
            raise ValueError("flux_ref must be positive")
        self.state = DtcSvmState(gains, self.params)

    def reset(self):
        self.state.reset()

    def control(self, s, tau_ref, dt):
        return dtc_svm_control(s, tau_ref, self.flux_ref, self.gains, self.params, dt, self.state)

    def to_document(self):
        return Document(kind='dtc_svm', gains=self.gains.to_document().to_dict(),
                        flux_ref=self.flux_ref)
