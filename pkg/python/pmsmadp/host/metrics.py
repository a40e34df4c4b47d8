"""Performance metrics computed from `SimTrace`s. All metrics are pure
functions of the trace, so recomputing them from a trace file gives the same
values."""

import math
import numpy as np

from pmsmadp.adp.cost import stage_cost

__all__ = [
    'SIGNALS',
    'tracking_error',
    'itae',
    'realized_cost',
    'settling_time',
    'ripple',
    'steady_state_error',
]

SIGNALS = ('torque', 'speed')

def _signal(trace, signal):
    if signal == 'torque':
        return trace['tau_em'], trace['tau_ref']
    if signal == 'speed':
        return trace['omega_m'], trace['omega_ref']
    raise ValueError("signal must be one of {}".format(', '.join(SIGNALS)))

def tracking_error(trace, signal='torque', reference=None):
    """Returns the error samples of `signal` (`torque` or `speed`).

    The reference defaults to the τ* resp. ω* column of the trace;
    `reference` may instead be a `Profile` evaluated at the sample times."""
    actual, ref = _signal(trace, signal)
    if reference is not None:
        ref = np.array([reference.value_at(t) for t in trace['t']])
    return actual - ref

def itae(trace, reference=None, signal='torque'):
    """Integral of time-weighted absolute error, Σ t_k·|e_k|·Ts."""
    if not len(trace):
        raise ValueError("cannot compute metrics of an empty trace")
    e = tracking_error(trace, signal, reference)
    return float(np.sum(trace['t'] * np.abs(e)) * trace.sampling_time)

def realized_cost(trace, c, p, start_time=0.0, n=None):
    """Discounted cost Σ γ^k·ℓ(x_k, τ*_k, u_k, ω_k) of the applied voltages,
    with ℓ the `stage_cost()` in the scales of `n` (default:
    `Normalizer.from_params(p)`) and k counted from the first sample at or
    after `start_time`."""
    if not len(trace):
        raise ValueError("cannot compute metrics of an empty trace")
    mask = trace.window(start_time)
    x = np.stack([trace['i_d'][mask], trace['i_q'][mask]], axis=-1)
    u = np.stack([trace['v_d'][mask], trace['v_q'][mask]], axis=-1)
    stage = np.atleast_1d(stage_cost(x, trace['tau_ref'][mask], u, c, p, trace['omega_m'][mask], n))
    # Discount factors underflow to zero long before the end of a trace.
    discount = np.power(c.gamma, np.arange(len(stage), dtype=float))
    return float(np.sum(discount * stage))

def settling_time(trace, event_time, band, signal='speed', relative=True, reference=None):
    """Time from `event_time` until the error of `signal` enters and then
    stays within ±`band` for the rest of the trace.

    With `relative` set the band is a fraction of the reference magnitude
    at each sample. Returns 0 if the signal never leaves the band and
    `math.inf` if it is still outside at the end of the trace."""
    mask = trace.window(event_time)
    if not mask.any():
        raise ValueError("event_time lies beyond the end of the trace")
    e = np.abs(tracking_error(trace, signal, reference))[mask]
    limit = band
    if relative:
        _, ref = _signal(trace, signal)
        if reference is not None:
            ref = np.array([reference.value_at(t) for t in trace['t']])
        limit = band * np.abs(ref[mask])
    outside = np.nonzero(e > limit)[0]
    if not len(outside):
        return 0.0
    last = outside[-1]
    if last == len(e) - 1:
        return math.inf
    t = trace['t'][mask]
    return float(t[last + 1] - event_time)

def ripple(trace, column, start=None, end=None):
    """Standard deviation of `column` over the window [start, end]."""
    values = trace[column][trace.window(start, end)]
    if not len(values):
        raise ValueError("empty window")
    return float(np.std(values))

def steady_state_error(trace, start=None, end=None, signal='speed', reference=None):
    """Mean absolute error of `signal` over the window [start, end]."""
    e = tracking_error(trace, signal, reference)[trace.window(start, end)]
    if not len(e):
        raise ValueError("empty window")
    return float(np.mean(np.abs(e)))
