"""
Partial sums of the series attached to a structured sequence
All sums run in sequence order; no reordering is ever applied.
"""

import math
from collections import defaultdict
from fractions import Fraction
from numbers import Number
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from domain.enums import OperatorDomain
from domain.exceptions import InvalidInputError
from domain.models import CoefficientSequence, StructuredSequence

Snapshot = Tuple[int, np.ndarray]


def _complex(compute: Callable[[], Number], k: int) -> complex:
    # products are formed exactly (int, Fraction) and only then rounded
    try:
        return complex(compute())
    except OverflowError as e:
        raise InvalidInputError(f"Term {k} is too large for double precision") from e


def _check_levels(levels: Sequence[int]) -> Tuple[int, set]:
    if not levels:
        raise InvalidInputError("At least one truncation level is required")
    return max(levels), set(levels)


def analysis_square_sums(
    s: StructuredSequence, f: CoefficientSequence, levels: Sequence[int]
) -> List[Tuple[int, float]]:
    """Partial sums sum_{k<=N} |<f, psi_k>|^2 at each level N"""
    top, marks = _check_levels(levels)
    total = 0.0
    out = []
    for k, (sigma, w) in enumerate(s.terms(top), start=1):
        total += abs(_complex(lambda: w * f.value(sigma), k)) ** 2
        if k in marks:
            out.append((k, total))
    return out


def _vector_partial_sums(
    s: StructuredSequence,
    levels: Sequence[int],
    term: Callable[[int, int, Number], Number],
) -> List[Snapshot]:
    top, marks = _check_levels(levels)
    terms = s.terms(top)
    acc = np.zeros(max(sigma for sigma, _ in terms), dtype=np.complex128)
    out = []
    for k, (sigma, w) in enumerate(terms, start=1):
        acc[sigma - 1] += _complex(lambda: term(k, sigma, w), k)
        if k in marks:
            out.append((k, acc.copy()))
    return out


def synthesis_partial_sums(
    s: StructuredSequence, c: CoefficientSequence, levels: Sequence[int]
) -> List[Snapshot]:
    """Partial sums sum_{k<=N} c_k psi_k in C^{d(max level)}"""
    return _vector_partial_sums(s, levels, lambda k, sigma, w: c.value(k) * w)


def frame_partial_sums(
    s: StructuredSequence, f: CoefficientSequence, levels: Sequence[int]
) -> List[Snapshot]:
    """Partial sums sum_{k<=N} <f, psi_k> psi_k = sum w_k^2 f_{sigma(k)} e_{sigma(k)}"""
    return _vector_partial_sums(s, levels, lambda k, sigma, w: w * w * f.value(sigma))


def fiber_coefficient_sums(
    s: StructuredSequence, c: CoefficientSequence, n: int
) -> Dict[int, Number]:
    """F_m(N) = sum_{l<=N, sigma(l)=m} w_l c_l, kept exact"""
    fibers: Dict[int, Number] = defaultdict(int)
    for l, (sigma, w) in enumerate(s.terms(n), start=1):
        fibers[sigma] += w * c.value(l)
    return dict(fibers)


def gram_row_sums(
    s: StructuredSequence, c: CoefficientSequence, levels: Sequence[int]
) -> List[Snapshot]:
    """
    Row sums (G_N c)_k = sum_{l<=N} <psi_l, psi_k> c_l = w_k F_{sigma(k)}(N) for k <= N,
    padded with zeros to the largest level.
    """
    top, _ = _check_levels(levels)
    terms = s.terms(top)
    out = []
    for n in sorted(levels):
        fibers: Dict[int, Number] = defaultdict(int)
        for l, (sigma, w) in enumerate(terms[:n], start=1):
            fibers[sigma] += w * c.value(l)
        row = np.zeros(top, dtype=np.complex128)
        for k, (sigma, w) in enumerate(terms[:n], start=1):
            row[k - 1] = _complex(lambda: w * fibers[sigma], k)
        out.append((n, row))
    return out


def fiber_prefix_sums(s: StructuredSequence, n: int) -> Dict[int, Number]:
    """sum_{k<=N, sigma(k)=m} w_k^2 for every touched m, exact"""
    sums: Dict[int, Number] = defaultdict(int)
    for sigma, w in s.terms(n):
        sums[sigma] += w * w
    return dict(sums)


def _exact(x: Number) -> Tuple[Fraction, Fraction]:
    """Real and imaginary parts as exact fractions (floats convert without rounding)"""
    if isinstance(x, complex):
        return Fraction(x.real), Fraction(x.imag)
    return Fraction(x), Fraction(0)


def _log_abs(part: Tuple[Fraction, Fraction]) -> float:
    square = part[0] ** 2 + part[1] ** 2
    if square == 0:
        return -math.inf
    return (math.log(square.numerator) - math.log(square.denominator)) / 2.0


def _times(a: Tuple[Fraction, Fraction], b: Tuple[Fraction, Fraction]) -> Tuple[Fraction, Fraction]:
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def log_term_maxima(
    s: StructuredSequence, c: CoefficientSequence, levels: Sequence[int], domain: OperatorDomain
) -> List[Tuple[int, float]]:
    """
    Natural log of the largest term magnitude among k <= N at each level N,
    computed exactly so that no term overflows.

    The term is |w_k f_sigma(k)| for C, |w_k^2 f_sigma(k)| for S, |c_k w_k| for D
    and the row entry |w_k F_sigma(k)(k)| for G, the fiber summed up to k.
    """
    top, marks = _check_levels(levels)
    fibers: Dict[int, Tuple[Fraction, Fraction]] = defaultdict(lambda: (Fraction(0), Fraction(0)))
    best = -math.inf
    out = []
    for k, (sigma, w) in enumerate(s.terms(top), start=1):
        weight = _exact(w)
        if domain == OperatorDomain.C:
            term = _times(weight, _exact(c.value(sigma)))
        elif domain == OperatorDomain.S:
            term = _times(_times(weight, weight), _exact(c.value(sigma)))
        elif domain == OperatorDomain.D:
            term = _times(weight, _exact(c.value(k)))
        else:
            product = _times(weight, _exact(c.value(k)))
            fiber = fibers[sigma]
            fibers[sigma] = (fiber[0] + product[0], fiber[1] + product[1])
            term = _times(weight, fibers[sigma])
        best = max(best, _log_abs(term))
        if k in marks:
            out.append((k, best))
    return out
