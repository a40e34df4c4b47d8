"""Contains `SimTrace`, the uniformly sampled record of a closed-loop run."""

import numpy as np
import pandas as pd

__all__ = ['SimTrace', 'COLUMNS']

COLUMNS = [
    't', 'i_d', 'i_q', 'omega_m', 'tau_em', 'tau_ref', 'v_d', 'v_q',
    'saturated', 'out_of_region', 'omega_ref', 'sector', 'duty_1', 'duty_2', 'duty_0',
]

_FLAGS = ('saturated', 'out_of_region')

class SimTrace(object):
    """One row per control period, sampled at t = k·Ts.

    The voltages are the ones the inverter applied; the currents, speed and
    electromagnetic torque are the plant's, not the measured ones. A trace
    cut short by a diverging plant has `complete` set to false and a
    `diagnostic` message."""

    def __init__(self, frame, sampling_time, name=None, controller=None, diagnostic=None):
        super().__init__()
        if list(frame.columns) != COLUMNS:
            raise ValueError("trace columns must be {}".format(', '.join(COLUMNS)))
        if not sampling_time > 0.0:
            raise ValueError("sampling_time must be positive")
        self.frame = frame
        self.sampling_time = float(sampling_time)
        self.name = name
        self.controller = controller
        self.diagnostic = diagnostic

    @classmethod
    def from_rows(cls, rows, sampling_time, **kwargs):
        """Builds a trace from a list of row tuples in `COLUMNS` order."""
        frame = pd.DataFrame.from_records(rows, columns=COLUMNS) if rows \
            else pd.DataFrame({c: pd.Series(dtype=float) for c in COLUMNS})
        for flag in _FLAGS:
            frame[flag] = frame[flag].astype(bool)
        frame['sector'] = frame['sector'].astype(int)
        return cls(frame, sampling_time, **kwargs)

    @property
    def complete(self):
        return self.diagnostic is None

    def __len__(self):
        return len(self.frame)

    def __getitem__(self, column):
        """Returns one column as a numpy array."""
        return self.frame[column].to_numpy()

    @property
    def duration(self):
        """Time of the last sample."""
        return float(self.frame['t'].iloc[-1]) if len(self) else 0.0

    def window(self, start=None, end=None):
        """Returns a boolean mask selecting samples with start ≤ t ≤ end."""
        t = self['t']
        mask = np.ones(len(t), dtype=bool)
        eps = 1e-9 * self.sampling_time
        if start is not None:
            mask &= t >= start - eps
        if end is not None:
            mask &= t <= end + eps
        return mask

    def to_frame(self):
        return self.frame.copy()

    def to_csv(self, path):
        """Writes the trace with a header row and full float precision.
        Flags are written as 0/1."""
        frame = self.frame.copy()
        for flag in _FLAGS:
            frame[flag] = frame[flag].astype(int)
        frame.to_csv(path, index=False, float_format='%.17g')

    @classmethod
    def from_csv(cls, path, name=None, controller=None):
        """Reads a trace written by `to_csv()`. The sampling time is taken
        from the first two samples."""
        frame = pd.read_csv(path, float_precision='round_trip')
        if list(frame.columns) != COLUMNS:
            raise ValueError("{!r} is not a trace file".format(path))
        if len(frame) < 2:
            raise ValueError("a trace file needs at least two samples")
        for flag in _FLAGS:
            frame[flag] = frame[flag].astype(bool)
        frame['sector'] = frame['sector'].astype(int)
        sampling_time = float(frame['t'].iloc[1] - frame['t'].iloc[0])
        return cls(frame, sampling_time, name=name, controller=controller)

    def __repr__(self):
        return 'SimTrace(name={!r}, controller={!r}, samples={}, complete={})'.format(
            self.name, self.controller, len(self), self.complete)
