"""Contains `TrainingConfig`, the settings of offline value iteration."""

import math

from pmsmadp.common.document import Document, pop_value, check_empty

__all__ = ['TrainingConfig', 'MODES']

MODES = ('tracking', 'regulation')

def _positive(x):
    return math.isfinite(x) and x > 0.0

class TrainingConfig(object):
    """Settings of the offline training.

    `mode` is `tracking` (networks take `[ĩ_d, ĩ_q, τ̃*, ω̃]`) or
    `regulation` (networks take `[ĩ_d, ĩ_q]`, with τ* = ω = 0). Samples
    are drawn uniformly from the cube `[−half_width, half_width]^dim`.

    `value_tolerance` (β_v) bounds the value change that ends the outer
    loop: max|V^{i+1} − V^i| over the training samples, in the normalized
    cost units of `CostSpec`. `control_tolerance` (β_u, volts) bounds the
    max-norm change of the inner policy iteration."""

    def __init__(self, **kwargs):
        super().__init__()
        self.mode = pop_value(
            kwargs, 'mode', str, 'tracking', lambda x: x in MODES,
            "mode must be one of {}".format(', '.join(MODES)))
        self.sample_count = pop_value(
            kwargs, 'sample_count', int, 10000, lambda x: x >= 1, "sample_count must be positive")
        self.half_width = pop_value(
            kwargs, 'half_width', float, 1.5, _positive, "half_width must be positive")
        self.value_tolerance = pop_value(
            kwargs, 'value_tolerance', float, 1e-4, _positive, "value_tolerance must be positive")
        self.control_tolerance = pop_value(
            kwargs, 'control_tolerance', float, 1e-6, _positive, "control_tolerance must be positive")
        self.max_outer_iterations = pop_value(
            kwargs, 'max_outer_iterations', int, 100, lambda x: x >= 1,
            "max_outer_iterations must be positive")
        self.max_inner_iterations = pop_value(
            kwargs, 'max_inner_iterations', int, 100, lambda x: x >= 1,
            "max_inner_iterations must be positive")
        self.seed = pop_value(kwargs, 'seed', int, 0, lambda x: x >= 0, "seed must be non-negative")
        self.critic_degree = pop_value(
            kwargs, 'critic_degree', int, 3, lambda x: x >= 1, "critic_degree must be positive")
        self.actor_degree = pop_value(
            kwargs, 'actor_degree', int, 2, lambda x: x >= 1, "actor_degree must be positive")
        self.condition_limit = pop_value(
            kwargs, 'condition_limit', float, 1e12, _positive, "condition_limit must be positive")
        self.validation_count = pop_value(
            kwargs, 'validation_count', int, 1000, lambda x: x >= 0,
            "validation_count must be non-negative")
        check_empty(kwargs)
        if self.sample_count < self.critic_terms:
            raise ValueError("sample_count ({}) must be at least the number of critic terms ({})".format(
                self.sample_count, self.critic_terms))

    @property
    def input_dim(self):
        """Dimension of the normalized network input."""
        return 4 if self.mode == 'tracking' else 2

    @property
    def critic_terms(self):
        """Number of critic neurons, C(dim + degree, degree)."""
        return math.comb(self.input_dim + self.critic_degree, self.critic_degree)

    def to_document(self):
        return Document(
            mode=self.mode,
            sample_count=self.sample_count,
            half_width=self.half_width,
            value_tolerance=self.value_tolerance,
            control_tolerance=self.control_tolerance,
            max_outer_iterations=self.max_outer_iterations,
            max_inner_iterations=self.max_inner_iterations,
            seed=self.seed,
            critic_degree=self.critic_degree,
            actor_degree=self.actor_degree,
            condition_limit=self.condition_limit,
            validation_count=self.validation_count)

    @classmethod
    def from_document(cls, doc):
        return cls(**dict(Document(doc).items()))

    def replace(self, **kwargs):
        """Returns a copy with the given settings changed."""
        data = self.to_document().to_dict()
        data.update(kwargs)
        return TrainingConfig(**data)

    def __repr__(self):
        return 'TrainingConfig({})'.format(', '.join(
            '{}={!r}'.format(k, v) for k, v in sorted(self.to_document().items())))
