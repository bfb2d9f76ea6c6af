"""Exact-arithmetic certifier for general-type decompositions on spaces of nodal curves."""

TOOL_VERSION = "nodalcert 0.1.0"

from .arith import binom, is_prime, format_rational, parse_rational  # noqa: F401
from .picard import SpaceParams, Generator, DivisorClass, CriticalVector  # noqa: F401
