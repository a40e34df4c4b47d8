"""Exception types raised by pmsmadp.

Misuse of the API follows the usual Python conventions instead: wrong
argument types raise `TypeError`, invalid values raise `ValueError`, and
calling an operation while an object is in the wrong state raises
`RuntimeError`."""

class NonFiniteState(RuntimeError):
    """Raised when the plant state becomes NaN or infinite, i.e. the
    simulation diverged. `state` holds the offending state."""

    def __init__(self, state, msg=None):
        super().__init__(msg or "plant state became non-finite: {!r}".format(state))
        self.state = state


class DimensionMismatch(ValueError):
    """Raised when a vector or matrix does not have the expected shape."""

    def __init__(self, expected, actual, what='input'):
        super().__init__("{} has dimension {!r}, expected {!r}".format(what, actual, expected))
        self.expected = expected
        self.actual = actual


class RankDeficient(RuntimeError):
    """Raised by the least-squares fit when the (column-scaled) feature
    matrix is too badly conditioned to be solved reliably."""

    def __init__(self, condition, limit):
        super().__init__(
            "feature matrix condition number {:.3e} exceeds {:.1e}; "
            "the sample set does not cover the region of interest".format(condition, limit))
        self.condition = condition
        self.limit = limit


class ConvergenceError(RuntimeError):
    """Base class for iteration budgets running out."""

    _loop = 'iteration'

    def __init__(self, iterations, change):
        super().__init__("{} did not converge after {} iterations (last change {:.3e})".format(
            self._loop, iterations, change))
        self.iterations = iterations
        self.change = change


class InnerNoConvergence(ConvergenceError):
    """Raised when the policy fixed-point iteration for a sample exceeds
    its iteration budget."""
    _loop = 'inner control iteration'


class OuterNoConvergence(ConvergenceError):
    """Raised when value iteration exceeds its iteration budget."""
    _loop = 'value iteration'
