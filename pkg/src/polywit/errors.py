"""Shared exception types.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific one that applies.
"""


class ParameterError(ValueError):
    """A parameter is out of its documented range or violates a size guard."""


class RingError(ValueError):
    """Operands live in incompatible rings (different moduli or var counts)."""


class ArityError(ValueError):
    """An evaluation point or assignment has the wrong length."""


class FormatError(ValueError):
    """An input file does not match its documented text format."""
