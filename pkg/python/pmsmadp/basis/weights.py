"""Contains `WeightSet`, the trained critic and actor networks, and its
self-describing file format."""

import numpy as np

from pmsmadp.basis.normalizer import Normalizer
from pmsmadp.basis.poly import PolyBasis
from pmsmadp.common.document import Document
from pmsmadp.common.errors import DimensionMismatch

__all__ = ['WeightSet', 'FORMAT_VERSION']

FORMAT_VERSION = 1

MODES = ('tracking', 'regulation')

class WeightSet(object):
    """Critic weights `W_c` (one per critic term), actor weights `W_a` (one
    row per actor term, one column per control input) and the critic weight
    history of the value iteration that produced them.

    The networks take normalized inputs: `[ĩ_d, ĩ_q, τ̃*, ω̃]` in `tracking`
    mode, `[ĩ_d, ĩ_q]` in `regulation` mode."""

    def __init__(self, critic_basis, actor_basis, normalizer, critic_weights,
                 actor_weights, history=(), hyperparameters=None, mode='tracking'):
        super().__init__()
        if not isinstance(critic_basis, PolyBasis) or not isinstance(actor_basis, PolyBasis):
            raise TypeError("bases must be PolyBasis objects")
        if not isinstance(normalizer, Normalizer):
            raise TypeError("normalizer must be a Normalizer")
        if mode not in MODES:
            raise ValueError("mode must be one of {}".format(', '.join(MODES)))
        dim = 4 if mode == 'tracking' else 2
        for b in (critic_basis, actor_basis):
            if b.input_dim != dim:
                raise DimensionMismatch(dim, b.input_dim, 'basis input dimension')

        self.critic_basis = critic_basis
        self.actor_basis = actor_basis
        self.normalizer = normalizer
        self.mode = mode
        self.critic_weights = self._array(critic_weights, (critic_basis.size,), 'critic weights')
        self.actor_weights = self._array(actor_weights, (actor_basis.size, 2), 'actor weights')
        self.history = [self._array(w, (critic_basis.size,), 'critic weight history') for w in history]
        self.hyperparameters = Document(hyperparameters or {})

    @staticmethod
    def _array(value, shape, what):
        value = np.array(value, dtype=float)
        if value.shape != shape:
            raise DimensionMismatch(shape, value.shape, what)
        if not np.all(np.isfinite(value)):
            raise ValueError("{} must be finite".format(what))
        return value

    @classmethod
    def zeros(cls, critic_basis, actor_basis, normalizer, mode='tracking'):
        """Returns an all-zero weight set."""
        return cls(critic_basis, actor_basis, normalizer,
                   np.zeros(critic_basis.size), np.zeros((actor_basis.size, 2)), mode=mode)

    @property
    def input_dim(self):
        return self.critic_basis.input_dim

    @property
    def iterations(self):
        """Number of value-iteration updates recorded in the history."""
        return max(len(self.history) - 1, 0)

    def critic_value(self, eta):
        """V(η) = W_cᵀφ(η); `eta` may be a single input or a batch."""
        return self.critic_basis.eval(eta) @ self.critic_weights

    def critic_gradient(self, eta):
        """∂V/∂η, shape `(input_dim,)` or `(n, input_dim)`."""
        return np.einsum('...ti,t->...i', self.critic_basis.gradient(eta), self.critic_weights)

    def actor_output(self, eta):
        """u(η) = W_aᵀσ(η) as `(v_d, v_q)`; batches give shape `(n, 2)`."""
        return self.actor_basis.eval(eta) @ self.actor_weights

    def to_document(self):
        """Serializes to a self-describing `Document`."""
        return Document(
            format_version=FORMAT_VERSION,
            mode=self.mode,
            input_dim=self.input_dim,
            normalizer=self.normalizer.to_document().to_dict(),
            critic=dict(
                max_degree=self.critic_basis.max_degree,
                terms=[list(e) for e in self.critic_basis.term_exponents],
                fingerprint=self.critic_basis.fingerprint(),
                weights=self.critic_weights.tolist()),
            actor=dict(
                max_degree=self.actor_basis.max_degree,
                terms=[list(e) for e in self.actor_basis.term_exponents],
                fingerprint=self.actor_basis.fingerprint(),
                weights=self.actor_weights.tolist()),
            history=[w.tolist() for w in self.history],
            hyperparameters=self.hyperparameters.to_dict())

    @classmethod
    def from_document(cls, doc):
        """Inverse of `to_document()`. Raises `ValueError` if a stored term
        fingerprint does not match its term list."""
        doc = Document(doc)
        version = doc.get('format_version')
        if version != FORMAT_VERSION:
            raise ValueError("unsupported weight file format version {!r}".format(version))
        input_dim = int(doc['input_dim'])
        bases = []
        for key in ('critic', 'actor'):
            net = doc[key]
            basis = PolyBasis.from_exponents(input_dim, net['terms'])
            if basis.fingerprint() != net['fingerprint']:
                raise ValueError("{} term fingerprint mismatch; the weight file is corrupt "
                                 "or uses a different term ordering".format(key))
            bases.append(basis)
        return cls(
            bases[0], bases[1],
            Normalizer.from_document(doc['normalizer']),
            doc['critic']['weights'],
            doc['actor']['weights'],
            history=doc.get('history', []),
            hyperparameters=doc.get('hyperparameters', {}),
            mode=doc.get('mode', 'tracking'))

    def save(self, path):
        """Writes the weight set to a JSON (or `.cbor`) file."""
        self.to_document().dump(path)

    @classmethod
    def load(cls, path):
        """Reads a weight set written by `save()`."""
        return cls.from_document(Document.load(path))

    def __eq__(self, other):
        if not isinstance(other, WeightSet):
            return False
        return self.to_document() == other.to_document()

    def __repr__(self):
        return 'WeightSet(mode={!r}, critic={!r}, actor={!r}, iterations={})'.format(
            self.mode, self.critic_basis, self.actor_basis, self.iterations)
