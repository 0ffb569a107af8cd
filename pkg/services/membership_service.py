"""
Membership service: domains of C, D, S and G for structured sequences
Analytic rules decide whenever the annotations allow it; otherwise the
partial sums are sampled and judged by the convergence heuristic.
"""

import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config.constants import NONZERO_SCAN
from config.settings import settings
from domain.enums import CoefficientKind, MembershipStatus, OperatorDomain
from domain.exceptions import InvalidInputError
from domain.models import CoefficientSequence, MembershipVerdict, StructuredSequence, is_infinite
from modules import convergence, series
from utils.validators import validate_levels

logger = logging.getLogger(__name__)

ANCHOR_DOM_C = "dom(C) = { f ∈ H : (⟨f,ψ_k⟩) ∈ ℓ² }"
ANCHOR_DOM_S = "dom(S) ⊆ dom(C)"
ANCHOR_DOM_D = "D is densely defined"
ANCHOR_DOM_G = "Σ_l G_{k,l} c_l converges for every k and lies in ℓ²"
ANCHOR_BESSEL = "Ψ is a Bessel sequence"

NUMERIC_FAILURES = (OverflowError, InvalidInputError, FloatingPointError)


def _levels(levels: Optional[Sequence[int]]) -> Tuple[int, ...]:
    return validate_levels(levels if levels is not None else settings.PROBE_LEVELS)


def _finite(c: CoefficientSequence) -> bool:
    return c.kind == CoefficientKind.FINITELY_SUPPORTED


def _infinite_fiber_hit(s: StructuredSequence, f: CoefficientSequence) -> Optional[int]:
    """First n with f_n != 0 and s_n = inf, scanning the support or a fixed prefix"""
    bound = f.support if _finite(f) else NONZERO_SCAN
    for n in range(1, bound + 1):
        if f.value(n) != 0 and is_infinite(s.fiber_sum(n)):
            return n
    return None


def _numeric_vectors(
    domain: OperatorDomain, snapshots: List[Tuple[int, np.ndarray]]
) -> MembershipVerdict:
    partials = [vector for _, vector in snapshots]
    values = [float(np.linalg.norm(v) ** 2) for v in partials]
    if not np.all(np.isfinite(values)):
        raise OverflowError("partial sums left double precision")
    status = convergence.judge(values, convergence.vector_increments(partials))
    evidence = tuple((n, float(np.linalg.norm(v))) for n, v in snapshots)
    limit = partials[-1] if status == MembershipStatus.CONVERGES else None
    logger.info("dom(%s) numeric probe: %s over %d level(s)", domain.value, status.value, len(snapshots))
    return MembershipVerdict(domain=domain, status=status, evidence=evidence, limit=limit)


def _exact_limit(compute: Callable[[], np.ndarray]) -> Optional[np.ndarray]:
    """Limit vector, or None when a coordinate does not fit in double precision"""
    try:
        limit = compute()
    except NUMERIC_FAILURES:
        return None
    return limit if np.all(np.isfinite(limit)) else None


def _sampled(
    domain: OperatorDomain,
    s: StructuredSequence,
    c: CoefficientSequence,
    levels: Sequence[int],
    sample: Callable[[], MembershipVerdict],
) -> MembershipVerdict:
    """
    Numeric verdict from double-precision partial sums, or from the exact
    log-scale term maxima when a term does not fit in double precision
    """
    try:
        return sample()
    except NUMERIC_FAILURES as e:
        logger.info("dom(%s) partial sums of %s overflow (%s), using log-scale terms", domain.value, s.label, e)
    maxima = series.log_term_maxima(s, c, levels, domain)
    status = convergence.judge_log_maxima([value for _, value in maxima])
    return MembershipVerdict(domain=domain, status=status, evidence=tuple(maxima))


class MembershipService:
    """Service for domain-membership questions"""

    @staticmethod
    def dom_c_membership(
        s: StructuredSequence, f: CoefficientSequence, levels: Optional[Sequence[int]] = None
    ) -> MembershipVerdict:
        """
        Decide f in dom(C), i.e. sum_n s_n |<f, e_n>|^2 < inf

        Args:
            s: Structured sequence
            f: Coordinate sequence <f, e_n> of the probed vector
            levels: Truncation levels for numeric evidence

        Returns:
            MembershipVerdict
        """
        levels = _levels(levels)
        domain = OperatorDomain.C

        if f.is_zero():
            return MembershipVerdict(domain, MembershipStatus.IN_DOMAIN)

        hit = _infinite_fiber_hit(s, f)
        if hit is not None:
            logger.debug("f_%d != 0 on an infinite fiber of %s", hit, s.label)
            return MembershipVerdict(domain, MembershipStatus.NOT_IN_DOMAIN, anchor=ANCHOR_DOM_C)
        if _finite(f):
            return MembershipVerdict(domain, MembershipStatus.IN_DOMAIN, anchor=ANCHOR_DOM_C)

        if s.fiber_ratio is not None and f.ratio is not None:
            # sum s_n |f_n|^2 is eventually geometric with ratio g q^2
            growth = s.fiber_ratio * f.ratio ** 2
            if growth < 1:
                return MembershipVerdict(domain, MembershipStatus.IN_DOMAIN, anchor=ANCHOR_DOM_C)
            if growth > 1:
                return MembershipVerdict(domain, MembershipStatus.NOT_IN_DOMAIN, anchor=ANCHOR_DOM_C)
        if s.is_bessel and f.square_summable:
            return MembershipVerdict(domain, MembershipStatus.IN_DOMAIN, anchor=ANCHOR_BESSEL)

        def sample() -> MembershipVerdict:
            samples = series.analysis_square_sums(s, f, levels)
            values = [value for _, value in samples]
            if not np.all(np.isfinite(values)):
                raise OverflowError("square sums left double precision")
            status = convergence.judge(values, convergence.scalar_increments(values))
            logger.info("dom(C) numeric probe: %s over %d level(s)", status.value, len(samples))
            return MembershipVerdict(domain, status, evidence=tuple(samples))

        return _sampled(domain, s, f, levels, sample)

    @staticmethod
    def dom_s_membership(
        s: StructuredSequence, f: CoefficientSequence, levels: Optional[Sequence[int]] = None
    ) -> MembershipVerdict:
        """
        Decide f in dom(S), i.e. convergence of sum_k <f, psi_k> psi_k in sequence order

        When the verdict is InDomain or NumericEvidenceConverges, `limit` holds Sf
        (or its best available approximation) in the first coordinates.
        """
        levels = _levels(levels)
        domain = OperatorDomain.S

        if f.is_zero():
            return MembershipVerdict(domain, MembershipStatus.IN_DOMAIN,
                                     limit=np.zeros(1, dtype=np.complex128))

        inclusion = MembershipService.dom_c_membership(s, f, levels)
        if inclusion.status == MembershipStatus.NOT_IN_DOMAIN:
            return MembershipVerdict(domain, MembershipStatus.NOT_IN_DOMAIN, anchor=ANCHOR_DOM_S)

        if _finite(f):
            # every touched fiber is finite: coordinate n converges monotonically to s_n f_n
            limit = _exact_limit(lambda: np.array(
                [complex(s.fiber_sum(n) * f.value(n)) if f.value(n) != 0 else 0j
                 for n in range(1, f.support + 1)],
                dtype=np.complex128,
            ))
            return MembershipVerdict(domain, MembershipStatus.IN_DOMAIN, anchor=ANCHOR_DOM_S, limit=limit)

        if s.is_bessel and f.square_summable:
            snapshots = series.frame_partial_sums(s, f, levels)
            return MembershipVerdict(
                domain, MembershipStatus.IN_DOMAIN, anchor=ANCHOR_BESSEL,
                evidence=tuple((n, float(np.linalg.norm(v))) for n, v in snapshots),
                limit=snapshots[-1][1],
            )

        return _sampled(
            domain, s, f, levels,
            lambda: _numeric_vectors(domain, series.frame_partial_sums(s, f, levels)),
        )

    @staticmethod
    def dom_d_membership(
        s: StructuredSequence, c: CoefficientSequence, levels: Optional[Sequence[int]] = None
    ) -> MembershipVerdict:
        """
        Decide c in dom(D), i.e. convergence of sum_k c_k psi_k in sequence order
        """
        levels = _levels(levels)
        domain = OperatorDomain.D

        if _finite(c):
            limit = _exact_limit(lambda: series.synthesis_partial_sums(s, c, [c.support])[0][1])
            return MembershipVerdict(domain, MembershipStatus.IN_DOMAIN, anchor=ANCHOR_DOM_D, limit=limit)

        if s.is_bessel and c.square_summable:
            snapshots = series.synthesis_partial_sums(s, c, levels)
            return MembershipVerdict(
                domain, MembershipStatus.IN_DOMAIN, anchor=ANCHOR_BESSEL,
                evidence=tuple((n, float(np.linalg.norm(v))) for n, v in snapshots),
                limit=snapshots[-1][1],
            )

        return _sampled(
            domain, s, c, levels,
            lambda: _numeric_vectors(domain, series.synthesis_partial_sums(s, c, levels)),
        )

    @staticmethod
    def dom_g_membership(
        s: StructuredSequence, c: CoefficientSequence, levels: Optional[Sequence[int]] = None
    ) -> MembershipVerdict:
        """
        Decide c in dom(G): every row sum sum_l c_l <psi_l, psi_k> converges and
        the row sums form an l2 sequence.

        For finitely supported c the row sums are w_k F_{sigma(k)} with
        F_m = sum_l w_l c_l over the fiber of m, so their l2 norm squared is
        sum_m s_m |F_m|^2.
        """
        levels = _levels(levels)
        domain = OperatorDomain.G

        if _finite(c):
            fibers = series.fiber_coefficient_sums(s, c, c.support)
            infinite = [m for m, total in fibers.items() if total != 0 and is_infinite(s.fiber_sum(m))]
            if infinite:
                logger.debug("Row sums of %s are not square summable on fiber(s) %s", s.label, infinite)
                return MembershipVerdict(domain, MembershipStatus.NOT_IN_DOMAIN, anchor=ANCHOR_DOM_G)
            return MembershipVerdict(domain, MembershipStatus.IN_DOMAIN, anchor=ANCHOR_DOM_G)

        if s.is_bessel and c.square_summable:
            return MembershipVerdict(domain, MembershipStatus.IN_DOMAIN, anchor=ANCHOR_BESSEL)

        return _sampled(
            domain, s, c, levels,
            lambda: _numeric_vectors(domain, series.gram_row_sums(s, c, levels)),
        )

    @staticmethod
    def probe(
        s: StructuredSequence,
        c: CoefficientSequence,
        domain: OperatorDomain,
        levels: Optional[Sequence[int]] = None,
    ) -> MembershipVerdict:
        """Dispatch to the membership test of the given operator"""
        handlers = {
            OperatorDomain.C: MembershipService.dom_c_membership,
            OperatorDomain.S: MembershipService.dom_s_membership,
            OperatorDomain.D: MembershipService.dom_d_membership,
            OperatorDomain.G: MembershipService.dom_g_membership,
        }
        return handlers[OperatorDomain(domain)](s, c, levels)
