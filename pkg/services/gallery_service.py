"""
Gallery service: checks every pinned fact of the structured counterexamples
"""

import dataclasses
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from domain.enums import ClassLabel, OperatorDomain
from domain.models import FactOutcome, Fixture, MembershipVerdict, StructuredSequence, is_infinite
from modules.gallery import canonical_onb, probe_coefficients
from modules.series import fiber_prefix_sums, synthesis_partial_sums
from services.classification_service import ClassificationService
from services.membership_service import MembershipService
from services.operator_service import OperatorService
from services.sequence_service import SequenceService
from utils.validators import validate_levels

logger = logging.getLogger(__name__)

# Facts decided by a single domain probe: (fixture, fact) -> (operator, coefficients)
FACT_PROBES: Dict[Tuple[str, str], Tuple[OperatorDomain, str]] = {
    ("R1", "dom_c_trivial"): (OperatorDomain.C, "e1"),
    ("R2", "h_in_dom_c"): (OperatorDomain.C, "quarter-geometric"),
    ("R2", "h_not_in_dom_s"): (OperatorDomain.S, "quarter-geometric"),
    ("R3", "delta1_in_dom_d"): (OperatorDomain.D, "delta1"),
    ("R3", "delta1_not_in_dom_g"): (OperatorDomain.G, "delta1"),
    ("R4", "sign_flipped_diverges"): (OperatorDomain.D, "harmonic"),
}

# e1 as a vector and delta1 as coefficients share their coordinates
COEFF_ALIASES = {"e1": "delta1"}

# Prefix scanned when a fact quantifies over every n or k
SCAN = 64
HILBERT_SCHMIDT_LEVEL = 100
GRAM_COMPARISON_LEVEL = 64


def _probe(fixture: Fixture, fact_id: str, levels: Sequence[int]) -> str:
    domain, coeff = FACT_PROBES[(fixture.fixture_id, fact_id)]
    verdict = MembershipService.probe(fixture.sequence, probe_coefficients()[coeff], domain, levels)
    return verdict.status.value


def _alternating_limit(s: StructuredSequence, levels: Sequence[int]) -> float:
    top = levels[-1]
    partial = synthesis_partial_sums(s, probe_coefficients()["harmonic-alt"], [top])[0][1]
    return float(partial[0].real)


def _hilbert_schmidt(s: StructuredSequence) -> bool:
    n = HILBERT_SCHMIDT_LEVEL
    gram = OperatorService.build_suite(SequenceService.truncate(s, n)).gram.data
    frobenius_sq = float(np.sum(np.abs(gram) ** 2))
    partial = math.fsum(k ** -4.0 for k in range(1, n + 1))
    return abs(frobenius_sq - partial) <= 1e-12 and frobenius_sq <= math.pi ** 4 / 90


def _same_gram_as_onb(s: StructuredSequence) -> bool:
    n = GRAM_COMPARISON_LEVEL
    ours = OperatorService.build_suite(SequenceService.truncate(s, n)).gram.data
    onb = OperatorService.build_suite(SequenceService.truncate(canonical_onb(), n)).gram.data
    return bool(np.array_equal(ours, onb))


def _observe(fixture: Fixture, fact_id: str, levels: Sequence[int]) -> Any:
    s = fixture.sequence
    top = levels[-1]
    evaluators: Dict[str, Callable[[], Any]] = {
        "bessel": lambda: ClassificationService.classify_structured(s).holds(ClassLabel.BESSEL),
        "complete": lambda: ClassificationService.classify_structured(s).holds(ClassLabel.COMPLETE),
        "fiber_sums_infinite": lambda: all(is_infinite(s.fiber_sum(n)) for n in range(1, SCAN + 1)),
        "alternating_limit": lambda: _alternating_limit(s, levels),
        "gram_columns_finite": lambda: all(
            not is_infinite(OperatorService.gram_column_square_sums(s, k)) for k in range(1, SCAN + 1)
        ),
        "inf_fiber_sum_all": lambda: float(min(fiber_prefix_sums(s, top).values())),
        "sup_fiber_sum": lambda: float(max(fiber_prefix_sums(s, top).values())),
        "gram_hilbert_schmidt": lambda: _hilbert_schmidt(s),
        "same_gram_as_onb": lambda: _same_gram_as_onb(s),
    }
    if (fixture.fixture_id, fact_id) in FACT_PROBES:
        return _probe(fixture, fact_id, levels)
    return evaluators[fact_id]()


def _matches(fact_id: str, expected: Any, observed: Any, levels: Sequence[int]) -> bool:
    if fact_id == "alternating_limit":
        # alternating series: the error after N terms is below 1/(N+1)
        return abs(observed - expected) <= 1.0 / (levels[-1] + 1)
    if isinstance(expected, bool) or isinstance(expected, str):
        return observed == expected
    return abs(float(observed) - float(expected)) <= 1e-12 * max(1.0, abs(float(expected)))


class GalleryService:
    """Service for verifying the gallery of structured counterexamples"""

    @staticmethod
    def verify_fixture(fixture: Fixture, levels: Optional[Sequence[int]] = None) -> List[FactOutcome]:
        """
        Check every expected fact of a fixture

        Args:
            fixture: Gallery fixture
            levels: Truncation levels for numeric probes

        Returns:
            One FactOutcome per expected fact, in fixture order
        """
        levels = validate_levels(levels if levels is not None else settings.PROBE_LEVELS)
        outcomes = []
        for fact in fixture.expected:
            observed = _observe(fixture, fact.fact_id, levels)
            passed = _matches(fact.fact_id, fact.expected, observed, levels)
            if not passed:
                logger.warning("%s/%s: expected %r, observed %r",
                               fixture.fixture_id, fact.fact_id, fact.expected, observed)
            outcomes.append(FactOutcome(
                fixture_id=fixture.fixture_id,
                fact_id=fact.fact_id,
                expected=fact.expected,
                observed=observed,
                anchor=fact.anchor,
                passed=passed,
            ))
        return outcomes

    @staticmethod
    def verify_gallery(
        fixtures: Sequence[Fixture], levels: Optional[Sequence[int]] = None
    ) -> List[FactOutcome]:
        """Verify several fixtures; outcomes are ordered by fixture id"""
        outcomes: List[FactOutcome] = []
        for fixture in sorted(fixtures, key=lambda fx: fx.fixture_id):
            outcomes.extend(GalleryService.verify_fixture(fixture, levels))
        return outcomes

    @staticmethod
    def lnx2_trace(s: StructuredSequence, levels: Sequence[int]) -> List[Tuple[int, float, float]]:
        """
        Distance of sum_{k<=N} (-1)^{k+1}/k psi_k from (ln 2) e_1 at each level,
        next to the alternating-series bound 1/(N+1)
        """
        levels = validate_levels(levels)
        snapshots = synthesis_partial_sums(s, probe_coefficients()["harmonic-alt"], levels)
        trace = []
        for n, partial in snapshots:
            target = np.zeros_like(partial)
            target[0] = math.log(2)
            trace.append((n, float(np.linalg.norm(partial - target)), 1.0 / (n + 1)))
        return trace

    @staticmethod
    def attach_anchor(
        fixture_id: str, coeff: str, verdict: MembershipVerdict, fixtures: Sequence[Fixture]
    ) -> MembershipVerdict:
        """
        Replace the verdict's anchor by the pinned fact it confirms, if any
        """
        for fixture in fixtures:
            if fixture.fixture_id != fixture_id:
                continue
            for fact in fixture.expected:
                probe = FACT_PROBES.get((fixture_id, fact.fact_id))
                if probe is None:
                    continue
                same_coeff = COEFF_ALIASES.get(probe[1], probe[1]) == COEFF_ALIASES.get(coeff, coeff)
                if probe[0] == verdict.domain and same_coeff and fact.expected == verdict.status.value:
                    return dataclasses.replace(verdict, anchor=fact.anchor)
        return verdict
