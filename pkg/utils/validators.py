"""
Input validation utilities
"""

from typing import Optional, Sequence, Tuple

from domain.exceptions import ValidationError


def validate_levels(levels: Sequence[int]) -> Tuple[int, ...]:
    """
    Validate truncation levels

    Args:
        levels: Truncation levels

    Returns:
        The levels as a tuple

    Raises:
        ValidationError: If the levels are empty, non-positive or not increasing
    """
    if not levels:
        raise ValidationError("At least one truncation level is required")
    levels = tuple(levels)
    if any(not isinstance(n, int) or isinstance(n, bool) or n < 1 for n in levels):
        raise ValidationError(f"Truncation levels must be positive integers, got {levels}")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValidationError(f"Truncation levels must be strictly increasing, got {levels}")
    return levels


def parse_levels(raw: str) -> Tuple[int, ...]:
    """Parse 'N[,N...]' into validated levels"""
    try:
        levels = tuple(int(part) for part in raw.split(',') if part.strip())
    except ValueError as e:
        raise ValidationError(f"Invalid truncation levels '{raw}'") from e
    return validate_levels(levels)


def validate_rank_tolerance(value: Optional[float]) -> None:
    """
    Validate a relative rank tolerance override

    Raises:
        ValidationError: If the value is outside (0, 1)
    """
    if value is None:
        return
    if not (0.0 < value < 1.0):
        raise ValidationError(f"Rank tolerance must lie in (0, 1), got {value}")
