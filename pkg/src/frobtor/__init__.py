"""Exact computations with Frobenius-twisted Tor over local F_p algebras."""

from .errors import (
    FrobtorError,
    RingSyntaxError,
    PresentationError,
    NotArtinian,
    CapTooSmall,
    CapUnstable,
    ContainmentViolation,
    PositiveDepth,
    NotRegular,
    NotApplicable,
)

__version__ = "0.1.0"

__all__ = [
    "FrobtorError",
    "RingSyntaxError",
    "PresentationError",
    "NotArtinian",
    "CapTooSmall",
    "CapUnstable",
    "ContainmentViolation",
    "PositiveDepth",
    "NotRegular",
    "NotApplicable",
    "__version__",
]
