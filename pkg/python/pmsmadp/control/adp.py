"""The ADP controller: one feed-forward evaluation of the trained actor per
control period."""

from pmsmadp.basis.weights import WeightSet
from pmsmadp.common.document import Document
from pmsmadp.control.base import Controller, controller
from pmsmadp.control.svm import saturate
from pmsmadp.motor.params import MotorParams

__all__ = ['AdpController', 'adp_control', 'ActorEvaluator']

class ActorEvaluator(object):
    """Evaluates the actor network of a `WeightSet` with plain scalar
    arithmetic, counting the multiplications and additions performed.

    The operation count depends only on the network size, never on the
    input."""

    def __init__(self, weights):
        super().__init__()
        if not isinstance(weights, WeightSet):
            raise TypeError("weights must be a WeightSet")
        basis = weights.actor_basis
        n = weights.normalizer
        self.input_dim = basis.input_dim
        self._inverse_scales = [1.0 / s for s in n.scales[:basis.input_dim]]
        self._parent, self._variable = basis.evaluation_tree()
        self._w_d = [float(w) for w in weights.actor_weights[:, 0]]
        self._w_q = [float(w) for w in weights.actor_weights[:, 1]]
        self.last_operation_count = 0

    def normalize(self, i_d, i_q, tau_ref, omega_m):
        values = (i_d, i_q, tau_ref, omega_m)[:self.input_dim]
        return [v * k for v, k in zip(values, self._inverse_scales)]

    def evaluate(self, eta):
        """Returns `(v_d, v_q)` = W_aᵀσ(η)."""
        ops = 0
        features = [1.0]
        for parent, variable in zip(self._parent[1:], self._variable[1:]):
            features.append(features[parent] * eta[variable])
            ops += 1
        v_d = 0.0
        v_q = 0.0
        for f, wd, wq in zip(features, self._w_d, self._w_q):
            v_d += wd * f
            v_q += wq * f
            ops += 2
        self.last_operation_count = ops + len(eta)
        return v_d, v_q

    def operation_count(self):
        """Multiply-adds per evaluation, including input normalization."""
        return self.input_dim + (len(self._parent) - 1) + 2 * len(self._w_d)


def _half_width(weights):
    training = weights.hyperparameters.get('training') or {}
    return float(training.get('half_width', 1.5))

def adp_control(s, tau_ref, weights, max_voltage=None, evaluator=None):
    """Computes the ADP voltage command for measured state `s`.

    The currents, τ* and speed are normalized, fed through the actor and
    the result is saturated to `max_voltage` (default: the inverter limit
    of the motor the weights were trained for). Inputs outside the training
    region are allowed; they set the command's `out_of_region` flag."""
    if evaluator is None:
        evaluator = ActorEvaluator(weights)
    if max_voltage is None:
        motor = weights.hyperparameters.get('motor')
        max_voltage = (MotorParams(**motor) if motor else MotorParams()).max_voltage
    eta = evaluator.normalize(s.i_d, s.i_q, tau_ref, s.omega_m)
    v_d, v_q = evaluator.evaluate(eta)
    out_of_region = max(abs(x) for x in eta) > _half_width(weights)
    return saturate(v_d, v_q, max_voltage, out_of_region)


@controller('adp', 'pmsmadp developers', '0.1.0')
class AdpController(Controller):
    """Applies a trained actor network. `weights` is a `WeightSet` or the
    path of a weight file."""

    def __init__(self, params=None, weights=None, name=None):
        super().__init__(params, name)
        self.weights_path = None
        if isinstance(weights, str):
            self.weights_path = weights
            weights = WeightSet.load(weights)
        if not isinstance(weights, WeightSet):
            raise TypeError("weights must be a WeightSet or a weight file path")
        self.weights = weights
        self.evaluator = ActorEvaluator(weights)

    def control(self, s, tau_ref, dt):
        if not dt > 0.0:
            raise ValueError("dt must be positive")
        return adp_control(s, tau_ref, self.weights, self.params.max_voltage, self.evaluator)

    def to_document(self):
        doc = Document(kind='adp')
        if self.weights_path is not None:
            doc['weights'] = self.weights_path
        return doc
