"""Contains the online controllers and the pieces they share.

The inner-loop torque controllers all derive from `Controller` and consume
identical inputs each control period: the measured state (dq currents
reconstructed from two phase currents, speed and angle) and the torque
reference produced by the shared `SpeedLoopPI`. Their voltage commands are
realized by the averaged inverter model in `svm_apply()`.

A controller implementation looks something like this:

    from pmsmadp.control import Controller, controller, saturate

    @controller("zero", "Me!", "1.0")
    class ZeroVoltage(Controller):
        def control(self, s, tau_ref, dt):
            return saturate(0.0, 0.0, self.params.max_voltage)

The `@controller` decorator generates the metadata getters and registers
the class, so `make_controller("zero", params)` can build it from a
scenario document.
"""

__all__ = [ #@
    'Controller',
    'controller',
    'make_controller',
    'PIController',
    'SpeedLoopPI',
    'speed_pi_step',
    'ControlCommand',
    'SvmResult',
    'saturate',
    'svm_apply',
    'CurrentSensor',
    'SpeedFilter',
    'AdpController',
    'adp_control',
    'FocGains',
    'FocController',
    'foc_control',
    'DtcSvmGains',
    'DtcSvmController',
    'dtc_svm_control',
]

__pdoc__ = { #@
    'REGISTRY': False,
}

from pmsmadp.control.base import Controller, controller, REGISTRY
from pmsmadp.control.pi import PIController, SpeedLoopPI, speed_pi_step
from pmsmadp.control.svm import ControlCommand, SvmResult, saturate, svm_apply
from pmsmadp.control.sensing import CurrentSensor, SpeedFilter
from pmsmadp.control.adp import AdpController, adp_control
from pmsmadp.control.foc import FocGains, FocController, foc_control
from pmsmadp.control.dtc_svm import DtcSvmGains, DtcSvmController, dtc_svm_control

def make_controller(kind, params=None, **config):
    """Builds a registered controller from its configuration entries.

    `kind` is the registered name (`adp`, `foc` or `dtc_svm`) and `params`
    the controller's model of the motor. Recognized entries: `gains` (a
    mapping; for `foc` and `dtc_svm`), `flux_ref` (`dtc_svm`) and `weights`
    (a `WeightSet` or weight file path; `adp`)."""
    if kind not in REGISTRY:
        raise ValueError("unknown controller kind {!r}; expected one of {}".format(
            kind, ', '.join(sorted(REGISTRY))))
    cls = REGISTRY[kind]
    name = config.pop('name', None)
    if cls is FocController:
        gains = config.pop('gains', None)
        if gains is not None and not isinstance(gains, FocGains):
            gains = FocGains.from_document(gains, params)
        kwargs = dict(gains=gains)
    elif cls is DtcSvmController:
        gains = config.pop('gains', None)
        if gains is not None and not isinstance(gains, DtcSvmGains):
            gains = DtcSvmGains.from_document(gains, params)
        kwargs = dict(gains=gains, flux_ref=config.pop('flux_ref', None))
    elif cls is AdpController:
        if 'weights' not in config:
            raise ValueError("the adp controller needs a 'weights' entry")
        kwargs = dict(weights=config.pop('weights'))
    else:
        kwargs = {}
    if config:
        raise TypeError("unexpected keyword argument {!r}".format(next(iter(config.keys()))))
    return cls(params, name=name, **kwargs)
