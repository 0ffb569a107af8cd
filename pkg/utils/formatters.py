"""
Data formatting utilities
"""

import math
from numbers import Number
from typing import List, Optional, Union


def format_number(value: Optional[float], decimals: int = 6) -> str:
    """
    Format a number with specified decimal places

    Args:
        value: Number to format
        decimals: Number of decimal places

    Returns:
        Formatted string, "inf" for infinity or "N/A" if value is None
    """
    if value is None:
        return "N/A"
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return f"{float(value):.{decimals}g}"


def format_extended_real(value: Optional[Number]) -> Union[float, str, None]:
    """
    JSON value of an extended real: a float, "inf" for +infinity, None when absent

    Exact values (int, Fraction) are rounded to the nearest double.
    """
    if value is None:
        return None
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return float(value)


def format_complex_pair(value: complex) -> List[float]:
    """[re, im] pair of a complex scalar"""
    value = complex(value)
    return [value.real, value.imag]


def format_flag(value: Optional[bool]) -> str:
    """yes / no / open for a possibly undecided verdict"""
    if value is None:
        return "open"
    return "yes" if value else "no"
