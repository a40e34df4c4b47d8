"""Offline value-iteration training of the critic and actor networks.

The controller-internal model is the forward-Euler discretization of the dq
current equations, `x⁺ = x + Ts·f(x, ω) + g·u` with constant
`g = Ts·diag(1/Ld, 1/Lq)`. The speed and the torque reference are
exogenous inputs: they are held constant across the one-step prediction,
so the trainer never integrates the mechanical dynamics.

The control penalty is charged on the normalized voltage above the holding
voltage u_h(x, ω), for which g·u_h = −Ts·f(x, ω). Starting from V⁰ = 0,
every outer iteration solves the policy equation

    u = u_h(x, ω) − (γ/2)·v_s²·R⁻¹·gᵀ·∇V^i(x + Ts·f(x, ω) + g·u)

per sample by fixed-point iteration, then fits V^{i+1} to the targets
Q + K3·|(u − u_h)/v_s|² + γ·V^i(x⁺) by least squares. When the values
settle, the actor is fitted to the final policy."""

from collections import namedtuple
import numpy as np
import pandas as pd

from pmsmadp.adp.config import TrainingConfig
from pmsmadp.adp.cost import CostSpec
from pmsmadp.basis.lstsq import fit_least_squares
from pmsmadp.basis.normalizer import Normalizer
from pmsmadp.basis.poly import PolyBasis
from pmsmadp.basis.weights import WeightSet
from pmsmadp.common.document import Document
from pmsmadp.common.errors import DimensionMismatch, InnerNoConvergence, OuterNoConvergence
from pmsmadp.common.log import Loggable
from pmsmadp.motor.dynamics import holding_voltage
from pmsmadp.motor.params import MotorParams

__all__ = [
    'sample_region',
    'predict_next_state',
    'inner_control_iteration',
    'value_iteration',
    'bellman_residual',
    'one_step_cost',
    'grid_search_control',
    'ValueIteration',
    'TrainingReport',
    'IterationRecord',
    'BellmanStats',
]

IterationRecord = namedtuple('IterationRecord', [
    'iteration', 'weight_change', 'value_change', 'inner_iterations',
    'fit_residual', 'max_fit_residual', 'condition'])

BellmanStats = namedtuple('BellmanStats', ['max', 'mean', 'mean_value'])
BellmanStats.__doc__ = """Absolute Bellman residual statistics over a sample set,
along with the mean critic value over the same samples for scale."""

def sample_region(cfg):
    """Draws `cfg.sample_count` normalized inputs uniformly from
    `[−half_width, half_width]^dim`, deterministically from `cfg.seed`."""
    rng = np.random.default_rng(cfg.seed)
    return rng.uniform(-cfg.half_width, cfg.half_width, size=(cfg.sample_count, cfg.input_dim))

def _fresh_samples(cfg, count):
    rng = np.random.default_rng([cfg.seed, 1])
    return rng.uniform(-cfg.half_width, cfg.half_width, size=(count, cfg.input_dim))

def _split(eta, n):
    """Returns the physical currents `(k, 2)`, torque references and speeds
    encoded by a batch of normalized inputs."""
    x = eta[:, :2] * n.i_scale
    if eta.shape[1] == 4:
        return x, eta[:, 2] * n.tau_scale, eta[:, 3] * n.omega_scale
    zeros = np.zeros(eta.shape[0])
    return x, zeros, zeros

def _with_currents(eta, x, n):
    out = eta.copy()
    out[:, :2] = x / n.i_scale
    return out

def _batch(eta, dim):
    eta = np.asarray(eta, dtype=float)
    single = eta.ndim == 1
    eta = np.atleast_2d(eta)
    if eta.shape[1] != dim:
        raise DimensionMismatch(dim, eta.shape[1], 'η')
    return eta, single

def _holding(x, omega, p):
    return np.stack(holding_voltage(x[..., 0], x[..., 1], omega, p), axis=-1)

def _input_gain(p):
    return p.sampling_time_s / np.array([p.inductance_d_h, p.inductance_q_h])

def predict_next_state(x, omega_m, u, p):
    """One forward-Euler step of the current dynamics at constant speed:
    returns x + Ts·f(x, ω) + g·u. `x` and `u` carry `(d, q)` along their
    last axis and broadcast against `omega_m`."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    i_d = x[..., 0]
    i_q = x[..., 1]
    we = p.pole_pairs * np.asarray(omega_m, dtype=float)
    did = (-p.stator_resistance_ohm * i_d + p.inductance_q_h * we * i_q) / p.inductance_d_h
    diq = (-p.stator_resistance_ohm * i_q - p.inductance_d_h * we * i_d
           - p.magnet_flux_wb * we) / p.inductance_q_h
    drift = x + p.sampling_time_s * np.stack([did, diq], axis=-1)
    return drift + _input_gain(p) * u

def _solve_controls(eta, weights, c, p, cfg, u0):
    """Fixed-point iteration of the policy equation for a batch of samples.
    Returns the controls and the number of iterations used."""
    if c.k3 <= 0.0:
        raise ValueError("k3 must be positive to solve for the controls")
    n = weights.normalizer
    x, _, omega = _split(eta, n)
    drift = predict_next_state(x, omega, np.zeros_like(x), p)
    g = _input_gain(p)
    hold = _holding(x, omega, p)
    gain = -0.5 * c.gamma / c.k3 * n.v_scale ** 2 * g / n.i_scale
    u = np.array(u0, dtype=float)
    change = float('inf')
    for j in range(1, cfg.max_inner_iterations + 1):
        eta_next = _with_currents(eta, drift + g * u, n)
        u_next = hold + gain * weights.critic_gradient(eta_next)[:, :2]
        change = float(np.max(np.abs(u_next - u))) if u.size else 0.0
        u = u_next
        if change < cfg.control_tolerance:
            return u, j
    raise InnerNoConvergence(cfg.max_inner_iterations, change)

def inner_control_iteration(eta, weights, c, p, cfg, u0=None):
    """Solves the policy equation for the critic of `weights` at one
    normalized input (or a batch of them).

    The initial guess defaults to uniform random voltages in [−1, 1] V
    drawn from `cfg.seed`. Raises `InnerNoConvergence` if successive
    iterates still differ by `cfg.control_tolerance` or more after
    `cfg.max_inner_iterations` iterations."""
    eta, single = _batch(eta, weights.input_dim)
    if u0 is None:
        u0 = np.random.default_rng([cfg.seed, 4]).uniform(-1.0, 1.0, size=(eta.shape[0], 2))
    u0 = np.broadcast_to(np.asarray(u0, dtype=float), (eta.shape[0], 2))
    u, _ = _solve_controls(eta, weights, c, p, cfg, u0)
    return u[0] if single else u

def _successor(eta, weights, u, p):
    n = weights.normalizer
    x, _, omega = _split(eta, n)
    return _with_currents(eta, predict_next_state(x, omega, u, p), n)

def _bellman_target(eta, weights, u, c, p):
    n = weights.normalizer
    x, tau, omega = _split(eta, n)
    dv = u - _holding(x, omega, p)
    q = c.state_cost(x[:, 0], x[:, 1], tau, p, n)
    return q + c.control_cost(dv[:, 0], dv[:, 1], n) \
        + c.gamma * weights.critic_value(_successor(eta, weights, u, p))

def bellman_residual(weights, samples, c, p):
    """Evaluates |V(η) − (Q + K3·|Δv/v_s|² + γ·V(η⁺))| with u taken from the actor,
    over a batch of normalized samples. Returns `BellmanStats`."""
    eta, _ = _batch(samples, weights.input_dim)
    u = weights.actor_output(eta)
    values = weights.critic_value(eta)
    r = np.abs(values - _bellman_target(eta, weights, u, c, p))
    return BellmanStats(float(np.max(r)), float(np.mean(r)), float(np.mean(values)))

def one_step_cost(eta, u, weights, c, p):
    """Returns the stage cost plus γ·V(η⁺) at a single normalized input for one
    control `(v_d, v_q)` or an array of controls with shape `(k, 2)`."""
    eta, _ = _batch(eta, weights.input_dim)
    if eta.shape[0] != 1:
        raise DimensionMismatch(1, eta.shape[0], 'number of inputs')
    u = np.asarray(u, dtype=float)
    single = u.ndim == 1
    u = np.atleast_2d(u)
    cost = _bellman_target(np.repeat(eta, u.shape[0], axis=0), weights, u, c, p)
    return float(cost[0]) if single else cost

def grid_search_control(eta, weights, c, p, pitch=0.25, radius=None):
    """Minimizes `one_step_cost()` over a square grid of the given pitch
    (volts, containing the origin) restricted to the voltage disk of
    `radius` (default: the inverter limit Vdc/√3). Returns `(u, cost)`."""
    if not pitch > 0.0:
        raise ValueError("pitch must be positive")
    if radius is None:
        radius = p.max_voltage
    k = int(np.floor(radius / pitch))
    axis = pitch * np.arange(-k, k + 1)
    vd, vq = np.meshgrid(axis, axis, indexing='ij')
    grid = np.stack([vd.ravel(), vq.ravel()], axis=-1)
    grid = grid[np.hypot(grid[:, 0], grid[:, 1]) <= radius]
    cost = one_step_cost(eta, grid, weights, c, p)
    best = int(np.argmin(cost))
    return grid[best], float(cost[best])


class TrainingReport(object):
    """Per-iteration convergence record of a training run, plus Bellman
    residual statistics on fresh samples."""

    COLUMNS = list(IterationRecord._fields) + ['bellman_max', 'bellman_mean']

    def __init__(self):
        super().__init__()
        self.records = []
        self.bellman = None

    @property
    def iterations(self):
        """Number of outer iterations run."""
        return len(self.records)

    @property
    def weight_changes(self):
        return [r.weight_change for r in self.records]

    def to_frame(self):
        """Returns the report as a `pandas.DataFrame`. The Bellman columns
        are only filled in on the final row."""
        frame = pd.DataFrame(self.records, columns=IterationRecord._fields)
        frame['bellman_max'] = np.nan
        frame['bellman_mean'] = np.nan
        if self.bellman is not None and len(frame):
            frame.loc[frame.index[-1], 'bellman_max'] = self.bellman.max
            frame.loc[frame.index[-1], 'bellman_mean'] = self.bellman.mean
        return frame[self.COLUMNS]

    def to_csv(self, path):
        """Writes the report as CSV with full float precision."""
        self.to_frame().to_csv(path, index=False, float_format='%.17g')


class ValueIteration(Loggable):
    """Runs offline value iteration for one motor, cost and configuration.

    After `run()`, `report` holds the `TrainingReport` and `weights` the
    trained `WeightSet`."""

    _component = 'adp'

    def __init__(self, cfg=None, cost=None, params=None, critic_basis=None,
                 actor_basis=None, normalizer=None, name=None):
        super().__init__(name)
        self.cfg = cfg if cfg is not None else TrainingConfig()
        self.cost = cost if cost is not None else CostSpec()
        self.params = params if params is not None else MotorParams()
        if not isinstance(self.cfg, TrainingConfig):
            raise TypeError("cfg must be a TrainingConfig")
        if not isinstance(self.cost, CostSpec):
            raise TypeError("cost must be a CostSpec")
        if not isinstance(self.params, MotorParams):
            raise TypeError("params must be MotorParams")
        if self.cost.k3 <= 0.0:
            raise ValueError("value iteration requires k3 > 0")
        dim = self.cfg.input_dim
        self.critic_basis = critic_basis or PolyBasis(dim, self.cfg.critic_degree)
        self.actor_basis = actor_basis or PolyBasis(dim, self.cfg.actor_degree)
        for b in (self.critic_basis, self.actor_basis):
            if b.input_dim != dim:
                raise DimensionMismatch(dim, b.input_dim, 'basis input dimension')
        if self.cfg.sample_count < self.critic_basis.size:
            raise ValueError("sample_count must be at least the number of critic terms")
        self.normalizer = normalizer or Normalizer.from_params(self.params)
        self.report = None
        self.weights = None

    def _weight_set(self, critic, actor=None, history=(), hyperparameters=None):
        if actor is None:
            actor = np.zeros((self.actor_basis.size, 2))
        return WeightSet(
            self.critic_basis, self.actor_basis, self.normalizer, critic, actor,
            history=history, hyperparameters=hyperparameters, mode=self.cfg.mode)

    def run(self):
        """Trains and returns the `WeightSet`.

        Raises `OuterNoConvergence` if the value change is still at least
        `value_tolerance` after `max_outer_iterations` iterations, and
        propagates `InnerNoConvergence` and `RankDeficient`."""
        cfg, c, p = self.cfg, self.cost, self.params
        report = TrainingReport()
        self.report = report

        eta = sample_region(cfg)
        phi = self.critic_basis.eval(eta)
        critic = np.zeros(self.critic_basis.size)
        values = np.zeros(eta.shape[0])
        history = [critic.copy()]
        self.info("training {} critic ({} terms) and actor ({} terms) on {} samples",
                  cfg.mode, self.critic_basis.size, self.actor_basis.size, eta.shape[0])

        converged = False
        value_change = float('inf')
        for i in range(1, cfg.max_outer_iterations + 1):
            current = self._weight_set(critic)
            u0 = np.random.default_rng([cfg.seed, 2, i]).uniform(-1.0, 1.0, size=(eta.shape[0], 2))
            u, inner = _solve_controls(eta, current, c, p, cfg, u0)
            targets = _bellman_target(eta, current, u, c, p)
            fit = fit_least_squares(phi, targets, cfg.condition_limit)
            new_values = phi @ fit.weights
            weight_change = float(np.max(np.abs(fit.weights - critic)))
            value_change = float(np.max(np.abs(new_values - values)))
            report.records.append(IterationRecord(
                i, weight_change, value_change, inner, fit.residual, fit.max_residual, fit.condition))
            self.note("iteration {}: weight change {:.3e}, value change {:.3e}, "
                      "{} inner iterations, fit residual {:.3e}",
                      i, weight_change, value_change, inner, fit.residual)
            critic = fit.weights
            values = new_values
            history.append(critic.copy())
            if value_change < cfg.value_tolerance:
                converged = True
                break
        if not converged:
            self.error("value iteration did not converge in {} iterations", cfg.max_outer_iterations)
            raise OuterNoConvergence(cfg.max_outer_iterations, value_change)

        final = self._weight_set(critic)
        u0 = np.random.default_rng([cfg.seed, 3]).uniform(-1.0, 1.0, size=(eta.shape[0], 2))
        u, _ = _solve_controls(eta, final, c, p, cfg, u0)
        actor_fit = fit_least_squares(self.actor_basis.eval(eta), u, cfg.condition_limit)

        hyperparameters = Document(
            cost=c.to_document().to_dict(),
            training=cfg.to_document().to_dict(),
            motor=p.to_document().to_dict(),
            iterations=report.iterations,
            critic_fit_residual=report.records[-1].fit_residual,
            actor_fit_residual=actor_fit.residual)
        weights = self._weight_set(critic, actor_fit.weights, history, hyperparameters)

        if cfg.validation_count > 0:
            report.bellman = bellman_residual(weights, _fresh_samples(cfg, cfg.validation_count), c, p)
            weights.hyperparameters['bellman_residual'] = report.bellman._asdict()
            self.info("Bellman residual on {} fresh samples: max {:.3e}, mean {:.3e} (mean value {:.3e})",
                      cfg.validation_count, *report.bellman)
        self.note("converged after {} iterations", report.iterations)
        self.weights = weights
        return weights


def value_iteration(cfg, c, p, bases=None):
    """Functional form of `ValueIteration`: returns the trained `WeightSet`.
    `bases` optionally gives the `(critic, actor)` `PolyBasis` pair."""
    critic_basis, actor_basis = bases if bases is not None else (None, None)
    return ValueIteration(cfg, c, p, critic_basis, actor_basis).run()
