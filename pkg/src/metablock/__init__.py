"""Split metacyclic p-groups, their controlled fusion systems, and exact
checks of the block-invariant formulas attached to them."""

from .core import Element, GroupParams
from .errors import (
    InternalInvariantError,
    InvalidInputError,
    MetablockError,
    ResourceLimitError,
    UnsupportedParametersError,
)

__all__ = [
    "Element",
    "GroupParams",
    "InternalInvariantError",
    "InvalidInputError",
    "MetablockError",
    "ResourceLimitError",
    "UnsupportedParametersError",
]
__version__ = "0.1.0"
