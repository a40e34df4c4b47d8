"""Input normalization, polynomial feature bases, least-squares fitting and
the trained weight file."""

__all__ = [ #@
    'Normalizer',
    'normalize',
    'PolyBasis',
    'eval_basis',
    'eval_basis_gradient',
    'fit_least_squares',
    'FitResult',
    'WeightSet',
]

__pdoc__ = { #@
    'Normalizer': "Re-export of `pmsmadp.basis.normalizer.Normalizer`.",
    'PolyBasis': "Re-export of `pmsmadp.basis.poly.PolyBasis`.",
    'WeightSet': "Re-export of `pmsmadp.basis.weights.WeightSet`.",
}

from pmsmadp.basis.normalizer import Normalizer, normalize
from pmsmadp.basis.poly import PolyBasis, eval_basis, eval_basis_gradient
from pmsmadp.basis.lstsq import FitResult, fit_least_squares
from pmsmadp.basis.weights import WeightSet
