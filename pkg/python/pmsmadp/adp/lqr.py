"""Discounted linear-quadratic regulation of the dq currents.

At zero speed and zero torque reference the normalized current dynamics
are linear and the stage cost is quadratic, so the optimal value function
is `x̃ᵀPx̃` with P the solution of a discounted Riccati equation. This is
the reference the `regulation` training mode is validated against."""

from collections import namedtuple
import numpy as np
import scipy.linalg

from pmsmadp.basis.normalizer import Normalizer

__all__ = ['RegulationModel', 'regulation_model', 'discounted_lqr']

RegulationModel = namedtuple('RegulationModel', ['A', 'B', 'Q', 'R', 'gamma', 'H'])
RegulationModel.__doc__ = """Discrete-time model x̃⁺ = A·x̃ + B·w with stage cost
x̃ᵀQx̃ + wᵀRw and discount γ, in normalized currents x̃ = x/i_s and
normalized voltages above the holding voltage, w = u/v_s − H·x̃."""

def regulation_model(p, c, n=None):
    """Returns the normalized forward-Euler current model at ω = 0 and the
    quadratic form of the stage cost at τ* = 0 for motor `p` and cost `c`.
    `n` defaults to `Normalizer.from_params(p)`.

    A controller `w = −K·x̃` applies the physical voltage
    `u = v_s·(H − K)·x̃`. Only non-salient machines (Ld = Lq) give a
    quadratic state cost."""
    if p.inductance_d_h != p.inductance_q_h:
        raise ValueError("the regulation problem is only quadratic for Ld = Lq")
    if n is None:
        n = Normalizer.from_params(p)
    ts = p.sampling_time_s
    A = np.eye(2)
    B = np.diag([ts / p.inductance_d_h, ts / p.inductance_q_h]) * n.v_scale / n.i_scale
    c1 = p.torque_constant * n.i_scale / n.tau_scale
    Q = np.diag([c.k2, c.k1 * c1 * c1])
    H = p.stator_resistance_ohm * n.i_scale / n.v_scale * np.eye(2)
    return RegulationModel(A, B, Q, c.R, c.gamma, H)

def discounted_lqr(A, B, Q, R, gamma):
    """Solves the γ-discounted LQR problem.

    Returns `(K, P)` such that u = −K·x minimizes Σ γ^k (xᵀQx + uᵀRu) and
    xᵀPx is the optimal cost. The discount is folded into the dynamics,
    A → √γ·A and B → √γ·B, and the resulting standard Riccati equation is
    solved with `scipy.linalg.solve_discrete_are`."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    Q = np.asarray(Q, dtype=float)
    R = np.asarray(R, dtype=float)
    s = np.sqrt(gamma)
    P = scipy.linalg.solve_discrete_are(s * A, s * B, Q, R)
    K = np.linalg.solve(R + gamma * B.T @ P @ B, gamma * B.T @ P @ A)
    return K, P
