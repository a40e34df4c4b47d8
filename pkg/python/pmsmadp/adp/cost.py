"""The quadratic-in-control cost of the torque tracking problem."""

import math
import numpy as np

from pmsmadp.common.document import Document, pop_value, check_empty
from pmsmadp.motor.dynamics import electromagnetic_torque, holding_voltage
from pmsmadp.basis.normalizer import Normalizer

__all__ = ['CostSpec', 'stage_cost']

class CostSpec(object):
    """Weights of the stage cost

        K1·((τem − τ*)/τ_s)² + K2·(i_d/i_s)² + K3·|(u − u_h)/v_s|²

    and the discount factor γ applied to the successor value. The scales
    τ_s, i_s and v_s are those of a `Normalizer`; u_h is the voltage that
    holds the present currents (`holding_voltage()`), so only the part of u
    that changes the currents is penalized.

    γ may be 0, which turns the problem into a pure one-step minimization;
    value iteration additionally requires K3 > 0."""

    def __init__(self, **kwargs):
        super().__init__()
        nonneg = lambda x: math.isfinite(x) and x >= 0.0
        self.k1 = pop_value(kwargs, 'k1', float, 30.0, nonneg, "k1 must be non-negative")
        self.k2 = pop_value(kwargs, 'k2', float, 0.5, nonneg, "k2 must be non-negative")
        self.k3 = pop_value(kwargs, 'k3', float, 100.0, nonneg, "k3 must be non-negative")
        self.gamma = pop_value(
            kwargs, 'gamma', float, 0.5, lambda x: 0.0 <= x <= 1.0,
            "gamma must lie in [0, 1]")
        check_empty(kwargs)
        if self.k1 == 0.0 and self.k2 == 0.0 and self.k3 == 0.0:
            raise ValueError("at least one of k1, k2 and k3 must be nonzero")

    @property
    def R(self):
        """Control weight matrix K3·I₂ in normalized voltage."""
        return self.k3 * np.eye(2)

    def state_cost(self, i_d, i_q, tau_ref, p, n):
        """Q(x, τ*) = K1·((τem(x) − τ*)/τ_s)² + K2·(i_d/i_s)²; broadcasts
        over arrays."""
        err = (electromagnetic_torque(i_d, i_q, p) - tau_ref) / n.tau_scale
        i_d = i_d / n.i_scale
        return self.k1 * err * err + self.k2 * i_d * i_d

    def control_cost(self, dv_d, dv_q, n):
        """K3·|Δv/v_s|² for a voltage Δv above the holding voltage;
        broadcasts over arrays."""
        dv_d = dv_d / n.v_scale
        dv_q = dv_q / n.v_scale
        return self.k3 * (dv_d * dv_d + dv_q * dv_q)

    def to_document(self):
        return Document(k1=self.k1, k2=self.k2, k3=self.k3, gamma=self.gamma)

    @classmethod
    def from_document(cls, doc):
        return cls(**dict(Document(doc).items()))

    def __eq__(self, other):
        if not isinstance(other, CostSpec):
            return False
        return self.to_document() == other.to_document()

    def __repr__(self):
        return 'CostSpec(k1={!r}, k2={!r}, k3={!r}, gamma={!r})'.format(
            self.k1, self.k2, self.k3, self.gamma)


def stage_cost(x, tau_ref, u, c, p, omega_m=0.0, n=None):
    """Returns Q(x, τ*) + K3·|(u − u_h)/v_s|² for dq currents `x = (i_d, i_q)`
    and voltages `u = (v_d, v_q)` at mechanical speed `omega_m`. `n` defaults
    to `Normalizer.from_params(p)`. Array arguments broadcast, with the dq
    components along the last axis of `x` and `u`."""
    if n is None:
        n = Normalizer.from_params(p)
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    h_d, h_q = holding_voltage(x[..., 0], x[..., 1], np.asarray(omega_m, dtype=float), p)
    cost = c.state_cost(x[..., 0], x[..., 1], np.asarray(tau_ref, dtype=float), p, n) \
        + c.control_cost(u[..., 0] - h_d, u[..., 1] - h_q, n)
    if np.ndim(cost) == 0:
        return float(cost)
    return cost
