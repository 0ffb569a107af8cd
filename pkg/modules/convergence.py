"""
Convergence heuristic behind numeric membership verdicts
Evidence only, never a proof; analytic rules always take precedence.
"""

import logging
import math
from typing import List, Sequence

import numpy as np

from config.constants import (
    DIVERGENCE_GROWTH, INCREMENT_FLOOR, MIN_NUMERIC_LEVELS, SHRINK_FACTOR, TAIL_THRESHOLD,
)
from domain.enums import MembershipStatus

logger = logging.getLogger(__name__)


def scalar_increments(values: Sequence[float]) -> List[float]:
    """|v_i - v_{i-1}| between consecutive levels"""
    return [abs(b - a) for a, b in zip(values, values[1:])]


def vector_increments(partials: Sequence[np.ndarray]) -> List[float]:
    """Squared norms of the differences of consecutive partial sums"""
    return [float(np.linalg.norm(b - a) ** 2) for a, b in zip(partials, partials[1:])]


def tail_estimate(increments: Sequence[float]) -> float:
    """Geometric tail delta_last * r / (1 - r) with r the largest observed shrink ratio"""
    last = increments[-1]
    if last == 0:
        return 0.0
    ratio = max(b / a for a, b in zip(increments, increments[1:]) if a > 0)
    if ratio >= 1:
        return float('inf')
    return last * ratio / (1.0 - ratio)


def judge(values: Sequence[float], increments: Sequence[float]) -> MembershipStatus:
    """
    Classify a sampled trace.

    Args:
        values: monitored quantity at each level (partial sum or squared norm)
        increments: change between consecutive levels (len(values) - 1 entries)

    Returns:
        CONVERGES when every increment shrinks by SHRINK_FACTOR and the tail is
        below TAIL_THRESHOLD; DIVERGES on monotone growth beyond
        DIVERGENCE_GROWTH times the first sample or increments bounded below by
        INCREMENT_FLOOR; INCONCLUSIVE otherwise.
    """
    if len(values) < MIN_NUMERIC_LEVELS:
        logger.debug("Only %d level(s) sampled, no numeric verdict", len(values))
        return MembershipStatus.INCONCLUSIVE

    shrinking = all(b <= a / SHRINK_FACTOR for a, b in zip(increments, increments[1:]))
    if shrinking:
        tail = tail_estimate(increments)
        logger.debug("Increments shrink, tail estimate %.3e", tail)
        if tail < TAIL_THRESHOLD:
            return MembershipStatus.CONVERGES

    monotone = all(b >= a for a, b in zip(values, values[1:]))
    if monotone and values[0] > 0 and values[-1] > DIVERGENCE_GROWTH * values[0]:
        logger.debug("Monotone growth by %.3e", values[-1] / values[0])
        return MembershipStatus.DIVERGES
    if all(delta >= INCREMENT_FLOOR for delta in increments):
        logger.debug("Increments bounded below by %.1e", INCREMENT_FLOOR)
        return MembershipStatus.DIVERGES

    return MembershipStatus.INCONCLUSIVE


def judge_log_maxima(log_maxima: Sequence[float]) -> MembershipStatus:
    """
    Verdict from the log of the largest term magnitude up to each level.

    Terms of a convergent series tend to zero, so strictly growing maxima
    that gain more than DIVERGENCE_GROWTH over the samples count as
    divergence; anything else is Inconclusive.
    """
    if len(log_maxima) < MIN_NUMERIC_LEVELS:
        return MembershipStatus.INCONCLUSIVE
    growing = all(b > a for a, b in zip(log_maxima, log_maxima[1:]))
    if growing and log_maxima[-1] - log_maxima[0] > math.log(DIVERGENCE_GROWTH):
        logger.debug("Largest term grew by e^%.1f", log_maxima[-1] - log_maxima[0])
        return MembershipStatus.DIVERGES
    return MembershipStatus.INCONCLUSIVE
