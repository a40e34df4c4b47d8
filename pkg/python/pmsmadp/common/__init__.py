"""Contains the documents, logging and exception types shared by all pmsmadp
components."""

__all__ = [ #@
    'Document',
    'Loglevel',
    'Loggable',
    'configure_logging',
    'NonFiniteState',
    'DimensionMismatch',
    'RankDeficient',
    'ConvergenceError',
    'InnerNoConvergence',
    'OuterNoConvergence',
]

__pdoc__ = { #@
    # Override documentation for the re-exports.
    'Document': "Re-export of `pmsmadp.common.document.Document`.",
    'Loglevel': "Re-export of `pmsmadp.common.log.Loglevel`.",
    'Loggable': "Re-export of `pmsmadp.common.log.Loggable`.",
    'configure_logging': "Re-export of `pmsmadp.common.log.configure_logging`.",
}

from pmsmadp.common.document import Document
from pmsmadp.common.log import Loglevel, Loggable, configure_logging
from pmsmadp.common.errors import (
    NonFiniteState, DimensionMismatch, RankDeficient,
    ConvergenceError, InnerNoConvergence, OuterNoConvergence)
