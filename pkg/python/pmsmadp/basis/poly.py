"""Polynomial feature bases for linear-in-weight networks."""

import itertools
import numpy as np

from pmsmadp.common.document import fingerprint
from pmsmadp.common.errors import DimensionMismatch

__all__ = ['PolyBasis', 'eval_basis', 'eval_basis_gradient']

class PolyBasis(object):
    """All distinct monomials of `input_dim` variables up to `max_degree`.

    Each term (neuron) is identified by its exponent multi-index. Terms are
    in graded lexicographic order: the constant term first, then the
    first-degree terms, then the degree-2 products and so on, each degree in
    descending lexicographic order of the exponents. This order is part of
    the weight file format; `fingerprint()` identifies it."""

    def __init__(self, input_dim, max_degree):
        super().__init__()
        input_dim = int(input_dim)
        max_degree = int(max_degree)
        if input_dim < 1:
            raise ValueError("input_dim must be at least 1")
        if max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        exponents = []
        for degree in range(max_degree + 1):
            for combo in itertools.combinations_with_replacement(range(input_dim), degree):
                e = [0] * input_dim
                for k in combo:
                    e[k] += 1
                exponents.append(tuple(e))
        self._init(input_dim, max_degree, exponents)

    def _init(self, input_dim, max_degree, exponents):
        self.input_dim = input_dim
        self.max_degree = max_degree
        self.term_exponents = [tuple(int(x) for x in e) for e in exponents]
        self._exp = np.array(self.term_exponents, dtype=int).reshape(len(exponents), input_dim)

        # Every non-constant term is a lower-degree term times one variable;
        # evaluation walks this tree so each term costs one multiplication.
        index = {e: i for i, e in enumerate(self.term_exponents)}
        parent = [-1]
        variable = [-1]
        for e in self.term_exponents[1:]:
            k = next(k for k, x in enumerate(e) if x > 0)
            lower = list(e)
            lower[k] -= 1
            lower = tuple(lower)
            if lower not in index:
                raise ValueError("exponent set is not closed under lowering: {!r}".format(e))
            parent.append(index[lower])
            variable.append(k)
        self._parent = parent
        self._variable = variable

    @classmethod
    def from_exponents(cls, input_dim, exponents):
        """Builds a basis from an explicit exponent list, e.g. one loaded
        from a weight file. The list must start with the constant term and
        be closed under lowering any exponent by one."""
        input_dim = int(input_dim)
        exponents = [tuple(int(x) for x in e) for e in exponents]
        if not exponents or any(x != 0 for x in exponents[0]):
            raise ValueError("the first term must be the constant term")
        for e in exponents:
            if len(e) != input_dim:
                raise DimensionMismatch(input_dim, len(e), 'exponent multi-index')
            if any(x < 0 for x in e):
                raise ValueError("exponents must be non-negative")
        if len(set(exponents)) != len(exponents):
            raise ValueError("duplicate exponent multi-index")
        self = cls.__new__(cls)
        self._init(input_dim, max(sum(e) for e in exponents), exponents)
        return self

    def __len__(self):
        return len(self.term_exponents)

    @property
    def size(self):
        """Number of terms (neurons)."""
        return len(self.term_exponents)

    def fingerprint(self):
        """SHA-256 hex digest of the canonical CBOR encoding of the exponent
        list."""
        return fingerprint([list(e) for e in self.term_exponents])

    def _check(self, eta):
        eta = np.asarray(eta, dtype=float)
        if eta.ndim == 0 or eta.shape[-1] != self.input_dim:
            raise DimensionMismatch(self.input_dim, eta.shape[-1] if eta.ndim else 0, 'η')
        return eta

    def eval(self, eta):
        """Evaluates all terms at η.

        `eta` has shape `(input_dim,)` or `(n, input_dim)`; the result has
        shape `(size,)` or `(n, size)` respectively."""
        eta = self._check(eta)
        out = np.empty(eta.shape[:-1] + (self.size,))
        out[..., 0] = 1.0
        for i in range(1, self.size):
            out[..., i] = out[..., self._parent[i]] * eta[..., self._variable[i]]
        return out

    def gradient(self, eta):
        """Returns the Jacobian of the terms with respect to η, shape
        `(size, input_dim)`, or `(n, size, input_dim)` for a batch."""
        eta = self._check(eta)
        batch = eta.reshape(-1, self.input_dim)
        jac = np.zeros((batch.shape[0], self.size, self.input_dim))
        for k in range(self.input_dim):
            lowered = self._exp.copy()
            lowered[:, k] = np.maximum(lowered[:, k] - 1, 0)
            powers = np.prod(batch[:, None, :] ** lowered[None, :, :], axis=2)
            jac[:, :, k] = self._exp[:, k][None, :] * powers
        return jac.reshape(eta.shape[:-1] + (self.size, self.input_dim))

    def evaluation_tree(self):
        """Returns `(parent, variable)` lists: term i (i > 0) equals term
        `parent[i]` times input `variable[i]`."""
        return list(self._parent), list(self._variable)

    def multiplications(self):
        """Number of multiplications `eval()` performs for one input."""
        return self.size - 1

    def __eq__(self, other):
        if not isinstance(other, PolyBasis):
            return False
        return self.input_dim == other.input_dim and self.term_exponents == other.term_exponents

    def __repr__(self):
        return 'PolyBasis(input_dim={}, max_degree={}, size={})'.format(
            self.input_dim, self.max_degree, self.size)


def eval_basis(b, eta):
    """Evaluates basis `b` at η; see `PolyBasis.eval()`."""
    return b.eval(eta)

def eval_basis_gradient(b, eta, scales=None):
    """Returns the Jacobian of basis `b` at η; see `PolyBasis.gradient()`.

    If `scales` is given, η is understood as a physical quantity divided by
    `scales` and the Jacobian is taken with respect to the physical
    quantity, i.e. column k is divided by `scales[k]`."""
    jac = b.gradient(eta)
    if scales is not None:
        scales = np.asarray(scales, dtype=float)
        if scales.shape != (b.input_dim,):
            raise DimensionMismatch(b.input_dim, scales.shape, 'scales')
        jac = jac / scales
    return jac
