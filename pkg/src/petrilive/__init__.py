"""Liveness and structural liveness analysis for place/transition nets."""

__version__ = "0.1.0"

from .coverability import dead_set
from .errors import (BudgetError, CertificateError, FiringError, InputError, ParseError,
                     PetriliveError)
from .net import Net, enabled, fire, fire_sequence, reverse
from .netformat import NetDocument, parse_net, serialize_net

__all__ = [
    "BudgetError", "CertificateError", "FiringError", "InputError", "Net", "NetDocument",
    "ParseError", "PetriliveError", "dead_set", "enabled", "fire", "fire_sequence",
    "parse_net", "reverse", "serialize_net",
]
