"""Locale-independent fixed-notation number formatting for output files."""

from __future__ import annotations

import math


def format_fixed(x: float, sig: int = 12) -> str:
    """Fixed (never scientific) notation with at least ``sig``
    significant digits, '.' decimal separator."""
    if x != x:  # NaN
        return "nan"
    if x == 0.0:
        return "0." + "0" * (sig - 1)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    magnitude = math.floor(math.log10(abs(x)))
    decimals = max(sig - 1 - magnitude, 0)
    return f"{x:.{decimals}f}"
