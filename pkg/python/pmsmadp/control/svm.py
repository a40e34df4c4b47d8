"""Voltage-limit handling and the averaged space-vector-modulated
inverter."""

import math
from collections import namedtuple

__all__ = ['ControlCommand', 'SvmResult', 'saturate', 'svm_apply']

_SECTOR = math.pi / 3.0

class ControlCommand(namedtuple('ControlCommand', [
        'v_d', 'v_q', 'v_d_sat', 'v_q_sat', 'saturated', 'out_of_region'])):
    """A dq voltage command before and after saturation to the inverter's
    linear range. `out_of_region` is set by controllers that are only valid
    on a bounded input region."""
    __slots__ = ()

    def __new__(cls, v_d, v_q, v_d_sat, v_q_sat, saturated, out_of_region=False):
        return super().__new__(cls, v_d, v_q, v_d_sat, v_q_sat, bool(saturated), bool(out_of_region))


SvmResult = namedtuple('SvmResult', ['v_d', 'v_q', 'sector', 'duty_1', 'duty_2', 'duty_0'])
SvmResult.__doc__ = """Output of the averaged inverter: the applied dq
voltages, the sector (1-6, 0 for the zero vector) and the relative on-times
of the two adjacent active vectors and the zero vectors."""

def saturate(v_d, v_q, v_max, out_of_region=False):
    """Scales `(v_d, v_q)` radially onto the disk of radius `v_max` if it lies
    outside it; returns a `ControlCommand`."""
    v_d = float(v_d)
    v_q = float(v_q)
    magnitude = math.hypot(v_d, v_q)
    if magnitude <= v_max:
        return ControlCommand(v_d, v_q, v_d, v_q, False, out_of_region)
    scale = v_max / magnitude
    return ControlCommand(v_d, v_q, v_d * scale, v_q * scale, True, out_of_region)

def svm_apply(cmd, theta_e, v_dc):
    """Realizes the saturated command of `cmd` with an averaged
    two-level inverter on a bus of `v_dc` volts.

    Vectors inside the linear-modulation disk of radius Vdc/√3 are
    reproduced exactly; anything outside is scaled radially onto the disk.
    The duty ratios of the two active vectors adjacent to the voltage
    vector (at electrical angle `theta_e`) are computed from its magnitude
    and angle within the sector."""
    if not v_dc > 0.0:
        raise ValueError("v_dc must be positive")
    v_max = v_dc / math.sqrt(3.0)
    v_d, v_q = cmd.v_d_sat, cmd.v_q_sat
    magnitude = math.hypot(v_d, v_q)
    if magnitude > v_max:
        v_d *= v_max / magnitude
        v_q *= v_max / magnitude
        magnitude = v_max
    if magnitude == 0.0:
        return SvmResult(0.0, 0.0, 0, 0.0, 0.0, 1.0)

    c = math.cos(theta_e)
    s = math.sin(theta_e)
    v_alpha = v_d * c - v_q * s
    v_beta = v_d * s + v_q * c
    angle = math.atan2(v_beta, v_alpha)
    if angle < 0.0:
        angle += 2.0 * math.pi
    sector = min(int(angle // _SECTOR), 5)
    within = angle - sector * _SECTOR
    m = math.sqrt(3.0) * magnitude / v_dc
    duty_1 = m * math.sin(_SECTOR - within)
    duty_2 = m * math.sin(within)
    duty_0 = max(0.0, 1.0 - duty_1 - duty_2)
    return SvmResult(v_d, v_q, sector + 1, duty_1, duty_2, duty_0)
