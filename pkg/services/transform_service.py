"""
Transform service: operators applied to sequences, predicted bounds and the
factorization of a sequence through the canonical orthonormal basis
"""

import logging
from typing import Dict, List, Optional

from config.constants import SANDWICH_SLACK
from config.settings import settings
from domain.enums import ClassLabel, Subspace, TransformRule
from domain.exceptions import HypothesisError, InvalidInputError, ValidationError
from domain.models import (
    FactorizationReport, FiniteSequence, FrameBounds, Matrix, Tolerance,
    TransformPrediction, TransformReport,
)
from modules import linalg
from services.classification_service import ClassificationService

logger = logging.getLogger(__name__)

RULE_LABELS: Dict[TransformRule, ClassLabel] = {
    TransformRule.BESSEL: ClassLabel.BESSEL,
    TransformRule.FRAME: ClassLabel.FRAME,
    TransformRule.RIESZ_BASIS: ClassLabel.RIESZ_BASIS,
    TransformRule.LOWER_FRAME: ClassLabel.LOWER_FRAME_SEQUENCE,
    TransformRule.RIESZ_FISCHER: ClassLabel.RIESZ_FISCHER,
    TransformRule.COMPLETE: ClassLabel.COMPLETE,
}

RULE_ANCHORS: Dict[TransformRule, str] = {
    TransformRule.BESSEL: "with bound B‖F‖²",
    TransformRule.FRAME: "with frame bounds A‖F†‖^{-2} and B‖F‖^{2}",
    TransformRule.RIESZ_BASIS: "bounds A‖F^{-1}‖^{-2}, B‖F‖²",
    TransformRule.LOWER_FRAME: "bound A‖(F*)^{-1}‖^{-2}",
    TransformRule.RIESZ_FISCHER: "bound AK^{-2}",
    TransformRule.COMPLETE: "F has dense range",
}

# Rules whose operator only needs to act on span(Psi)
SPAN_RULES = (TransformRule.BESSEL, TransformRule.RIESZ_FISCHER)


def _require(condition: bool, name: str, message: str) -> None:
    if not condition:
        raise HypothesisError(name, message)


class TransformService:
    """Service for operator transforms of finite sequences"""

    @staticmethod
    def apply_operator(f: Matrix, seq: FiniteSequence) -> FiniteSequence:
        """
        Apply F to every vector of the sequence

        Raises:
            InvalidInputError: If F.cols differs from the sequence dimension
        """
        if f.cols != seq.dimension:
            raise InvalidInputError(
                f"Operator with {f.cols} columns cannot act on vectors of C^{seq.dimension}"
            )
        image = f @ seq.synthesis_matrix()
        label = f"F({seq.label})" if seq.label else None
        return FiniteSequence.from_matrix(image, label=label)

    @staticmethod
    def predict_bounds(
        bounds: FrameBounds,
        f: Matrix,
        rule: TransformRule,
        tol: Optional[Tolerance] = None,
        span: Optional[Matrix] = None,
    ) -> TransformPrediction:
        """
        Bounds of (F psi_k) predicted from the bounds of (psi_k) and the norms of F

        Args:
            bounds: Bounds of the input sequence
            f: Operator F
            rule: Which preservation rule to apply
            tol: Tolerance for the rank decisions on F
            span: Optional orthonormal basis of span(Psi); F is then replaced by
                its restriction to the span, extended by zero

        Returns:
            TransformPrediction

        Raises:
            HypothesisError: If F does not satisfy the rule's hypothesis
            ValidationError: If the input bounds the rule needs are missing
        """
        rule = TransformRule(rule)
        tol = tol or settings.default_tolerance(f.rows, f.cols)
        effective = f
        domain_dim = f.cols
        if span is not None:
            if span.rows != f.cols:
                raise InvalidInputError(f"Span basis lives in C^{span.rows}, operator acts on C^{f.cols}")
            effective = f @ span @ span.H
            domain_dim = span.cols

        sigma = linalg.svd(effective).singular_values
        keep = linalg.retained(sigma, tol)
        rank = int(keep.sum())
        norm = float(sigma[0])
        smallest = float(sigma[keep][-1]) if rank else 0.0
        logger.debug("Rule %s: rank(F)=%d, ||F||=%.6e, sigma_r=%.6e", rule.value, rank, norm, smallest)

        surjective = rank == f.rows
        injective = rank == domain_dim
        pinv_norm: Optional[float] = None
        needs_lower = rule in (TransformRule.FRAME, TransformRule.RIESZ_BASIS,
                               TransformRule.LOWER_FRAME, TransformRule.RIESZ_FISCHER)
        needs_upper = rule in (TransformRule.BESSEL, TransformRule.FRAME, TransformRule.RIESZ_BASIS)

        if rule in (TransformRule.FRAME, TransformRule.LOWER_FRAME, TransformRule.COMPLETE):
            _require(surjective, "surjective",
                     f"rule '{rule.value}' needs a surjective F, got rank {rank} < {f.rows} rows")
        elif rule == TransformRule.RIESZ_BASIS:
            _require(f.rows == f.cols and rank == f.rows, "bijective",
                     f"rule '{rule.value}' needs a bijective F, got {f.rows}x{f.cols} of rank {rank}")
        elif rule == TransformRule.RIESZ_FISCHER:
            _require(injective, "injective",
                     f"rule '{rule.value}' needs an injective F, got rank {rank} < {domain_dim}")

        if needs_lower:
            pinv_norm = 1.0 / smallest
            if bounds.lower is None:
                raise ValidationError(f"Rule '{rule.value}' needs a lower input bound")
        if needs_upper and bounds.upper is None:
            raise ValidationError(f"Rule '{rule.value}' needs an upper input bound")

        predicted = FrameBounds(
            lower=bounds.lower / pinv_norm ** 2 if needs_lower else None,
            upper=bounds.upper * norm ** 2 if needs_upper else None,
        )
        return TransformPrediction(
            input_bounds=bounds,
            operator_norm=norm,
            pinv_norm=pinv_norm,
            predicted=predicted,
            rule=rule,
            anchor=RULE_ANCHORS[rule],
        )

    @staticmethod
    def verify_transform(
        seq: FiniteSequence, f: Matrix, rule: TransformRule, tol: Optional[Tolerance] = None
    ) -> TransformReport:
        """
        Check that F Psi holds the rule's label and that its optimal bounds
        lie inside the predicted ones

        Sandwich violations are reported as failures, never raised.

        Raises:
            HypothesisError: If the input does not hold the rule's label or F
                violates the rule's hypothesis
        """
        rule = TransformRule(rule)
        label = RULE_LABELS[rule]
        tol = tol or settings.default_tolerance(max(seq.dimension, f.rows, f.cols), seq.count)

        source = ClassificationService.classify_finite(seq, tol)
        if not source.holds(label):
            raise HypothesisError(label.value, f"input sequence is not {label.value}")
        input_bounds = source.bounds(label) or FrameBounds()

        span = None
        if rule in SPAN_RULES:
            span = linalg.subspace_basis(seq.synthesis_matrix(), Subspace.RANGE, tol)
        prediction = TransformService.predict_bounds(input_bounds, f, rule, tol, span)

        image = TransformService.apply_operator(f, seq)
        classification = ClassificationService.classify_finite(image, tol)
        label_holds = classification.holds(label) is True
        actual = classification.bounds(label)

        failures: List[str] = []
        if not label_holds:
            failures.append(f"transformed sequence is not {label.value}")
        predicted = prediction.predicted
        scale = max(1.0, predicted.upper if predicted.upper is not None else (predicted.lower or 0.0))
        slack = SANDWICH_SLACK * scale
        if actual is not None:
            if predicted.lower is not None and actual.lower is not None and predicted.lower > actual.lower + slack:
                failures.append(f"optimal lower bound {actual.lower} below predicted {predicted.lower}")
            if predicted.upper is not None and actual.upper is not None and actual.upper > predicted.upper + slack:
                failures.append(f"optimal upper bound {actual.upper} above predicted {predicted.upper}")
        for failure in failures:
            logger.warning("Transform rule %s: %s", rule.value, failure)

        return TransformReport(
            prediction=prediction,
            actual=actual,
            label_holds=label_holds,
            sandwich=not failures,
            classification=classification,
            failures=tuple(failures),
        )

    @staticmethod
    def factorize_via_onb(seq: FiniteSequence, tol: Optional[Tolerance] = None) -> FactorizationReport:
        """
        The operator V with V delta_k = psi_k and the class properties read off V

        Bessel <-> V bounded, frame sequence <-> closed range, frame <-> V
        surjective, Riesz basis <-> V bijective, Riesz-Fischer <-> V injective
        with bounded inverse, complete <-> dense range.
        """
        d, n = seq.dimension, seq.count
        tol = tol or settings.default_tolerance(d, n)
        # V = D_Psi C_(delta_k), and C_(delta_k) is the identity of C^n
        v = seq.synthesis_matrix() @ FiniteSequence.canonical_basis(n).synthesis_matrix().H

        sigma = linalg.svd(v).singular_values
        keep = linalg.retained(sigma, tol)
        rank = int(keep.sum())
        injective = rank == n
        surjective = rank == d
        inverse_norm = 1.0 / float(sigma[keep][-1]) if injective else None

        operator_properties = {
            "bounded": True,
            "closed_range": True,
            "injective": injective,
            "surjective": surjective,
            "bijective": injective and surjective,
            "dense_range": surjective,
        }
        properties = {
            ClassLabel.BESSEL: True,
            ClassLabel.FRAME_SEQUENCE: rank > 0,
            ClassLabel.FRAME: surjective,
            ClassLabel.RIESZ_BASIS: injective and surjective,
            ClassLabel.LOWER_FRAME_SEQUENCE: surjective,
            ClassLabel.RIESZ_FISCHER: injective,
            ClassLabel.COMPLETE: surjective,
        }

        report = ClassificationService.classify_finite(seq, tol)
        mismatches = tuple(label for label, holds in properties.items() if report.holds(label) != holds)
        if mismatches:
            logger.warning("Factorization disagrees with classification on %s",
                           [label.value for label in mismatches])

        return FactorizationReport(
            v=v,
            norm=float(sigma[0]),
            inverse_norm=inverse_norm,
            operator_properties=operator_properties,
            properties=properties,
            matches_classification=not mismatches,
            mismatches=mismatches,
        )
