"""Hybrid F2-linear generator with Weyl or linear tempering, and tools to analyse it."""

from .engine import GeneratorState, jump, seed
from .params import GeneratorParams, list_params, lookup, parse_param_file, registry

__version__ = "0.1.0"

__all__ = [
    "GeneratorParams",
    "GeneratorState",
    "jump",
    "list_params",
    "lookup",
    "parse_param_file",
    "registry",
    "seed",
]
