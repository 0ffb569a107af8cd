"""
Sequence service: ingestion, the fixture gallery and truncation of structured sequences
"""

import logging
from fractions import Fraction
from typing import List, Sequence, Union

import numpy as np

from config.constants import PREFIX_CHECK_LEVELS
from domain.exceptions import FrameToolkitError, InvalidInputError, ParsingError
from domain.models import FiniteSequence, Fixture, Matrix, StructuredSequence, is_infinite
from modules import codec
from modules.gallery import build_fixtures
from modules.series import fiber_prefix_sums

logger = logging.getLogger(__name__)


class SequenceService:
    """Service for building and validating vector sequences"""

    @staticmethod
    def parse_finite(raw: Union[bytes, str]) -> FiniteSequence:
        """
        Parse a finite sequence document

        Args:
            raw: JSON document as bytes or text

        Returns:
            Validated FiniteSequence

        Raises:
            ParsingError: If the JSON is malformed
            SchemaError: If the document violates the schema
        """
        try:
            return codec.parse_finite(raw)
        except FrameToolkitError:
            raise
        except Exception as e:
            raise ParsingError(f"Failed to parse sequence: {str(e)}") from e

    @staticmethod
    def serialize_finite(seq: FiniteSequence) -> bytes:
        return codec.serialize_finite(seq)

    @staticmethod
    def gallery() -> List[Fixture]:
        """The seven structured counterexamples R1..R7 with their pinned facts"""
        return build_fixtures()

    @staticmethod
    def truncate(s: StructuredSequence, n: int) -> FiniteSequence:
        """
        First n vectors of a structured sequence, embedded in C^{d(n)} with
        d(n) = max_{k<=n} sigma(k)

        Raises:
            InvalidInputError: If n < 1 or a weight does not fit in double precision
        """
        if n < 1:
            raise InvalidInputError(f"Truncation level must be positive, got {n}")
        terms = s.terms(n)
        dim = max(sigma for sigma, _ in terms)
        data = np.zeros((dim, n), dtype=np.complex128)
        for k, (sigma, w) in enumerate(terms):
            try:
                data[sigma - 1, k] = complex(w)
            except OverflowError as e:
                raise InvalidInputError(
                    f"Weight of term {k + 1} of {s.label} is too large for double precision"
                ) from e
        logger.debug("Truncated %s at N=%d into C^%d", s.label, n, dim)
        return FiniteSequence.from_matrix(Matrix(data), label=f"{s.label}[:{n}]")

    @staticmethod
    def check_prefix_consistency(
        s: StructuredSequence, levels: Sequence[int] = PREFIX_CHECK_LEVELS
    ) -> List[str]:
        """
        Check the analytic annotations of s against exact prefix computations

        Returns:
            Human-readable violations; empty when every check passes
        """
        violations: List[str] = []
        previous = {}
        for n in sorted(levels):
            terms = s.terms(n)
            prefix = fiber_prefix_sums(s, n)

            for m, partial in prefix.items():
                annotated = s.fiber_sum(m)
                if partial > annotated:
                    violations.append(f"N={n}: prefix fiber sum of e_{m} exceeds s_{m}")
                if partial < previous.get(m, 0):
                    violations.append(f"N={n}: prefix fiber sum of e_{m} decreased")
            previous = prefix

            if s.sup_fiber_sum is not None and max(prefix.values()) > s.sup_fiber_sum:
                violations.append(f"N={n}: prefix fiber sums exceed sup_fiber_sum")

            dim = max(prefix)
            fibers = [s.fiber_sum(m) for m in range(1, dim + 1)]
            if s.inf_fiber_sum_all is not None and min(fibers) < s.inf_fiber_sum_all:
                violations.append(f"N={n}: some s_m lies below inf_fiber_sum_all")
            if s.inf_fiber_sum_range is not None:
                touched = [s.fiber_sum(m) for m in prefix]
                if min(touched) < s.inf_fiber_sum_range:
                    violations.append(f"N={n}: some s_m on ran(sigma) lies below inf_fiber_sum_range")

            if s.sigma_injective and len(prefix) < len(terms):
                violations.append(f"N={n}: sigma repeats an index but is annotated injective")
            if s.inf_weight_sq is not None and min(w * w for _, w in terms) < s.inf_weight_sq:
                violations.append(f"N={n}: some w_k^2 lies below inf_weight_sq")

            if s.fiber_ratio is not None:
                ratio = Fraction(s.fiber_ratio)
                for m in range(max(dim // 2, 2), dim):
                    low, high = fibers[m - 1], fibers[m]
                    if is_infinite(low) or is_infinite(high) or low == 0:
                        continue
                    if abs(Fraction(high) / Fraction(low) - ratio) > ratio * Fraction(1, 10 ** 12):
                        violations.append(f"N={n}: s_{m + 1}/s_{m} differs from fiber_ratio")
                        break

        for violation in violations:
            logger.warning("%s: %s", s.label, violation)
        return violations
