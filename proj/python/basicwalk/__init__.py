"""Random basic walk simulation core (thin bindings over the C++ library)."""

import json

from ._core import (
    BasicWalkError,
    cli,
    occupancy_exact,
    tree_escape_factor,
    walk,
    z_process_exact,
    z_process_exact_rational,
)
from ._core import trap_probability as _trap_probability


def trap_probability(trap, **kwargs):
    return json.loads(_trap_probability(trap, **kwargs))


__all__ = [
    "BasicWalkError",
    "cli",
    "occupancy_exact",
    "trap_probability",
    "tree_escape_factor",
    "walk",
    "z_process_exact",
    "z_process_exact_rational",
]
