"""
Classification service
Places finite and structured sequences in the frame taxonomy through four
independent operator characterizations and reports optimal bounds.
"""

import logging
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from config.constants import BORDERLINE_BAND
from config.settings import settings
from domain.enums import Characterization, ClassLabel
from domain.exceptions import FrameToolkitError, InvalidInputError
from domain.models import (
    ClassificationReport, Disagreement, FiniteSequence, FrameBounds, LabelVerdict, Matrix,
    SectionsResult, StructuredSequence, Tolerance, is_infinite,
)
from modules import linalg
from services.operator_service import OperatorService

logger = logging.getLogger(__name__)

ANCHORS: Dict[Characterization, Dict[ClassLabel, str]] = {
    Characterization.C: {
        ClassLabel.BESSEL: "if and only if dom(C) = H",
        ClassLabel.FRAME_SEQUENCE: "ran(C) is closed",
        ClassLabel.FRAME: "ran(C) is closed and C is injective",
        ClassLabel.RIESZ_BASIS: "C is bijective",
        ClassLabel.LOWER_FRAME_SEQUENCE: "ran(C) is closed and C is injective",
        ClassLabel.RIESZ_FISCHER: "C is surjective",
        ClassLabel.COMPLETE: "C is injective",
    },
    Characterization.D: {
        ClassLabel.BESSEL: "D is bounded",
        ClassLabel.FRAME_SEQUENCE: "ran(D) is closed",
        ClassLabel.FRAME: "D is surjective",
        ClassLabel.RIESZ_BASIS: "D is bijective",
        ClassLabel.LOWER_FRAME_SEQUENCE: "D is surjective",
        ClassLabel.RIESZ_FISCHER: "D is injective and D^{-1} is bounded",
        ClassLabel.COMPLETE: "ran(D) is dense",
    },
    Characterization.S: {
        ClassLabel.BESSEL: "dom(S) = H",
        ClassLabel.FRAME_SEQUENCE: "ran(S) is closed",
        ClassLabel.FRAME: "dom(S) = H and S is surjective",
        ClassLabel.RIESZ_BASIS: "S is bijective and (S^{-1}ψ_k) is biorthogonal to Ψ",
        ClassLabel.LOWER_FRAME_SEQUENCE: "S is surjective",
        ClassLabel.RIESZ_FISCHER: "(S^{-1}ψ_k) is biorthogonal to Ψ",
        ClassLabel.COMPLETE: "S is injective",
    },
    Characterization.G: {
        ClassLabel.BESSEL: "G is bounded",
        ClassLabel.FRAME_SEQUENCE: "ran(G) is closed",
        ClassLabel.FRAME: "rank(G) = dim H",
        ClassLabel.RIESZ_BASIS: "G is a bounded invertible operator",
        ClassLabel.LOWER_FRAME_SEQUENCE: "is still open",
        ClassLabel.RIESZ_FISCHER: "A‖c‖ ≤ ‖G_n c‖",
        ClassLabel.COMPLETE: "rank(G) = dim H (uses the ambient dimension, not G alone)",
    },
}


class _Spectrum(NamedTuple):
    """Squared singular values (or eigenvalues) in nonincreasing order with the rank decision"""
    squared: np.ndarray
    rank: int
    borderline: bool
    # squared values at or below this cannot be told apart from zero
    resolution: float = 0.0

    def at(self, index: int) -> float:
        return float(self.squared[index]) if 0 <= index < self.squared.size else 0.0


def _near_cutoff(values: np.ndarray, cutoff: float) -> bool:
    if cutoff <= 0:
        return False
    return bool(np.any(np.abs(values - cutoff) <= BORDERLINE_BAND * cutoff))


def _svd_spectrum(m: Matrix, tol: Tolerance) -> _Spectrum:
    result = linalg.svd(m)
    sigma = result.singular_values
    keep = linalg.retained(sigma, tol)
    cutoff = tol.rank_rel * float(sigma[0]) if sigma.size else 0.0
    logger.debug("%dx%d SVD: rank %d after %d sweep(s)", m.rows, m.cols, int(keep.sum()), result.sweeps)
    return _Spectrum(sigma ** 2, int(keep.sum()), _near_cutoff(sigma, cutoff))


def _eig_spectrum(m: Matrix, tol: Tolerance, size: int) -> _Spectrum:
    values, _ = linalg.eigh(m)
    values = np.clip(values[::-1], 0.0, None)
    cutoff = linalg.psd_cutoff(values, tol, size)
    rank = int(np.sum(values > cutoff)) if cutoff > 0 else 0
    top = float(values[0]) if values.size else 0.0
    resolution = cutoff if cutoff > tol.rank_rel ** 2 * top else 0.0
    return _Spectrum(values, rank, _near_cutoff(values, cutoff), resolution)


def _rank_verdicts(via: Characterization, spectrum: _Spectrum, d: int, n: int) -> Dict[ClassLabel, LabelVerdict]:
    """Verdicts read off the rank of one operator; bounds from its extreme squared values"""
    r = spectrum.rank
    top = spectrum.at(0) if r else 0.0
    anchors = ANCHORS[via]

    def verdict(label: ClassLabel, holds: bool, bounds: Optional[FrameBounds] = None) -> LabelVerdict:
        return LabelVerdict(
            label=label, holds=holds, via=via, anchor=anchors[label],
            bounds=bounds if holds else None,
            borderline=spectrum.borderline and label != ClassLabel.BESSEL,
        )

    return {
        ClassLabel.BESSEL: verdict(ClassLabel.BESSEL, True, FrameBounds(upper=top, optimal=True)),
        ClassLabel.FRAME_SEQUENCE: verdict(
            ClassLabel.FRAME_SEQUENCE, r > 0, FrameBounds(spectrum.at(r - 1), top, optimal=True)),
        ClassLabel.FRAME: verdict(
            ClassLabel.FRAME, r == d, FrameBounds(spectrum.at(d - 1), top, optimal=True)),
        ClassLabel.RIESZ_BASIS: verdict(
            ClassLabel.RIESZ_BASIS, r == d == n, FrameBounds(spectrum.at(d - 1), top, optimal=True)),
        ClassLabel.LOWER_FRAME_SEQUENCE: verdict(
            ClassLabel.LOWER_FRAME_SEQUENCE, r == d, FrameBounds(lower=spectrum.at(d - 1), optimal=True)),
        ClassLabel.RIESZ_FISCHER: verdict(
            ClassLabel.RIESZ_FISCHER, r == n, FrameBounds(lower=spectrum.at(n - 1), optimal=True)),
        ClassLabel.COMPLETE: verdict(ClassLabel.COMPLETE, r == d),
    }


def _critical_value(label: ClassLabel, spectrum: _Spectrum, d: int, n: int) -> float:
    if label == ClassLabel.FRAME_SEQUENCE:
        return spectrum.at(0)
    if label == ClassLabel.RIESZ_FISCHER:
        return spectrum.at(n - 1)
    if label == ClassLabel.RIESZ_BASIS:
        return spectrum.at(min(d, n) - 1)
    return spectrum.at(d - 1)


SVD_VIEWS = (Characterization.C, Characterization.D)


def _precision_limited(
    deciding: List[Tuple[Characterization, Optional[bool]]],
    label: ClassLabel,
    spectra: Dict[Characterization, _Spectrum],
    critical: Dict[Tuple[Characterization, ClassLabel], float],
) -> Optional[bool]:
    """
    The C/D verdict when every dissenting S or G verdict comes from a squared
    value that the eigensolver cannot resolve; None otherwise.
    """
    svd_votes = {holds for via, holds in deciding if via in SVD_VIEWS}
    if len(svd_votes) != 1:
        return None
    vote = svd_votes.pop()
    smallest = min(critical[(via, label)] for via in SVD_VIEWS)
    for via, holds in deciding:
        if via in SVD_VIEWS or holds == vote:
            continue
        if smallest > spectra[via].resolution:
            return None
    return vote


def _consensus(
    verdicts: Dict[Characterization, Tuple[LabelVerdict, ...]],
    spectra: Dict[Characterization, _Spectrum],
    critical: Dict[Tuple[Characterization, ClassLabel], float],
) -> Tuple[Dict[ClassLabel, Optional[bool]], Tuple[Disagreement, ...], bool]:
    """
    Consensus per label: every deciding characterization holds. A disagreement
    caused only by the eigensolver's resolution on S or G follows C and D and
    marks the report borderline.
    """
    consensus: Dict[ClassLabel, Optional[bool]] = {}
    disagreements: List[Disagreement] = []
    limited = False
    for label in ClassLabel:
        deciding = [
            (via, v.holds) for via, per_via in verdicts.items()
            for v in per_via if v.label == label and v.holds is not None
        ]
        if not deciding:
            consensus[label] = None
            continue
        consensus[label] = all(holds for _, holds in deciding)
        if len({holds for _, holds in deciding}) > 1:
            residuals = tuple(critical.get((via, label), float('nan')) for via, _ in deciding)
            disagreements.append(Disagreement(label=label, verdicts=tuple(deciding), residuals=residuals))
            vote = _precision_limited(deciding, label, spectra, critical)
            if vote is not None:
                consensus[label] = vote
                limited = True
                logger.warning("S/G cannot resolve the rank decision on %s; following C and D", label.value)
            else:
                logger.warning("Characterizations disagree on %s: %s", label.value, deciding)
    return consensus, tuple(disagreements), limited


def _real(value) -> float:
    return float(value)


class ClassificationService:
    """Service for classifying sequences in the frame taxonomy"""

    @staticmethod
    def classify_finite(seq: FiniteSequence, tol: Optional[Tolerance] = None) -> ClassificationReport:
        """
        Classify a finite sequence through C, D, S and G independently

        Args:
            seq: Finite sequence in C^d
            tol: Tolerance; defaults to the dimension-scaled setting

        Returns:
            ClassificationReport with per-characterization verdicts, consensus and bounds

        Raises:
            InvalidInputError: If the classification fails numerically
        """
        try:
            d, n = seq.dimension, seq.count
            tol = tol or settings.default_tolerance(d, n)
            suite = OperatorService.build_suite(seq, tol)

            spectra = {
                Characterization.C: _svd_spectrum(suite.analysis, tol),
                Characterization.D: _svd_spectrum(suite.synthesis, tol),
                Characterization.S: _eig_spectrum(suite.frame_op, tol, max(d, n)),
                Characterization.G: _eig_spectrum(suite.gram, tol, max(d, n)),
            }
            per_via = {via: _rank_verdicts(via, spectrum, d, n) for via, spectrum in spectra.items()}

            # Riesz-Fischer through S: the canonical dual is biorthogonal to Psi
            _, residual = OperatorService.canonical_dual(suite, tol)
            rf_s = residual < 0.5
            spec_s = spectra[Characterization.S]
            per_via[Characterization.S][ClassLabel.RIESZ_FISCHER] = LabelVerdict(
                label=ClassLabel.RIESZ_FISCHER, holds=rf_s, via=Characterization.S,
                anchor=ANCHORS[Characterization.S][ClassLabel.RIESZ_FISCHER],
                bounds=FrameBounds(lower=spec_s.at(n - 1), optimal=True) if rf_s else None,
                borderline=spec_s.borderline,
            )

            # Riesz-Fischer through the sections of G; lower frame sequences via G stay open
            sections = ClassificationService.riesz_fischer_via_sections(seq, tol)
            spec_g = spectra[Characterization.G]
            per_via[Characterization.G][ClassLabel.RIESZ_FISCHER] = LabelVerdict(
                label=ClassLabel.RIESZ_FISCHER, holds=sections.riesz_fischer, via=Characterization.G,
                anchor=ANCHORS[Characterization.G][ClassLabel.RIESZ_FISCHER],
                bounds=FrameBounds(lower=sections.a_est, optimal=True) if sections.riesz_fischer else None,
                borderline=_near_cutoff(np.array([sections.a_est]), sections.threshold),
            )
            per_via[Characterization.G][ClassLabel.LOWER_FRAME_SEQUENCE] = LabelVerdict(
                label=ClassLabel.LOWER_FRAME_SEQUENCE, holds=None, via=Characterization.G,
                anchor=ANCHORS[Characterization.G][ClassLabel.LOWER_FRAME_SEQUENCE],
            )

            verdicts = {via: tuple(v[label] for label in ClassLabel) for via, v in per_via.items()}
            critical = {
                (via, label): _critical_value(label, spectrum, d, n)
                for via, spectrum in spectra.items() for label in ClassLabel
            }
            consensus, disagreements, limited = _consensus(verdicts, spectra, critical)

            borderline = limited or any(v.borderline for per in verdicts.values() for v in per)
            if borderline:
                logger.warning("Rank decision for %s lies within %.0f%% of the cutoff",
                               seq.label or "sequence", BORDERLINE_BAND * 100)

            tight = parseval = False
            if consensus[ClassLabel.FRAME]:
                bounds = per_via[Characterization.D][ClassLabel.FRAME].bounds
                tight = abs(bounds.upper - bounds.lower) <= tol.residual_abs * max(1.0, bounds.upper)
                parseval = tight and abs(bounds.upper - 1.0) <= tol.residual_abs

            logger.info("Classified %dx%d sequence, agreement=%s", d, n, not disagreements)
            return ClassificationReport(
                verdicts=verdicts,
                consensus=consensus,
                agreement=not disagreements,
                borderline=borderline,
                tol=tol,
                disagreements=disagreements,
                tight=tight,
                parseval=parseval,
                source=seq.label,
            )
        except FrameToolkitError:
            raise
        except Exception as e:
            raise InvalidInputError(f"Classification failed: {str(e)}") from e

    @staticmethod
    def riesz_fischer_via_sections(seq: FiniteSequence, tol: Optional[Tolerance] = None) -> SectionsResult:
        """
        Smallest singular value of every leading section G_n of the Gram matrix

        Args:
            seq: Finite sequence
            tol: Tolerance; the threshold is the PSD cutoff of G (rank_rel squared, noise floor)

        Returns:
            SectionsResult with A_est = min_n sigma_min(G_n)
        """
        tol = tol or settings.default_tolerance(seq.dimension, seq.count)
        gram = OperatorService.build_suite(seq, tol).gram.data
        hermitian = (gram + gram.conj().T) / 2.0
        per_section = tuple(
            max(0.0, float(np.linalg.eigvalsh(hermitian[:k, :k])[0]))
            for k in range(1, seq.count + 1)
        )
        values = np.clip(np.linalg.eigvalsh(hermitian), 0.0, None)
        top = float(values[-1])
        threshold = linalg.psd_cutoff(values, tol, max(seq.dimension, seq.count))
        a_est = min(per_section)
        logger.debug("Sections: A_est=%.6e threshold=%.3e", a_est, threshold)
        return SectionsResult(
            a_est=a_est,
            per_section=per_section,
            riesz_fischer=top > 0 and a_est > threshold,
            threshold=threshold,
        )

    @staticmethod
    def classify_structured(s: StructuredSequence) -> ClassificationReport:
        """
        Classify a structured sequence from its annotations

        Each label is decided by the annotation that characterizes it; a
        missing annotation leaves the label undecided (None).
        """
        optimal = s.extrema_attained
        bessel = None if s.sup_fiber_sum is None else not is_infinite(s.sup_fiber_sum)
        lower = None if s.inf_fiber_sum_all is None else s.inf_fiber_sum_all > 0
        frame = None if bessel is None or lower is None else bessel and lower
        basis = None
        if frame is not None and s.sigma_injective is not None and s.sigma_surjective is not None:
            basis = frame and s.sigma_injective and s.sigma_surjective
        riesz_fischer = None
        if s.sigma_injective is not None and s.inf_weight_sq is not None:
            riesz_fischer = s.sigma_injective and s.inf_weight_sq > 0
        frame_sequence = None
        if bessel is not None and s.inf_fiber_sum_range is not None:
            frame_sequence = bessel and s.inf_fiber_sum_range > 0

        def bounds(holds, lower_value=None, upper_value=None) -> Optional[FrameBounds]:
            if not holds:
                return None
            return FrameBounds(
                lower=None if lower_value is None else _real(lower_value),
                upper=None if upper_value is None else _real(upper_value),
                optimal=optimal,
            )

        rows = [
            (ClassLabel.BESSEL, bessel, Characterization.S, "sup_n s_n < ∞",
             bounds(bessel, upper_value=s.sup_fiber_sum)),
            (ClassLabel.FRAME_SEQUENCE, frame_sequence, Characterization.C, "inf of s_n over ran(σ) > 0",
             bounds(frame_sequence, s.inf_fiber_sum_range, s.sup_fiber_sum)),
            (ClassLabel.FRAME, frame, Characterization.S, "0 < inf_n s_n ≤ sup_n s_n < ∞",
             bounds(frame, s.inf_fiber_sum_all, s.sup_fiber_sum)),
            (ClassLabel.RIESZ_BASIS, basis, Characterization.S, "frame with σ bijective",
             bounds(basis, s.inf_fiber_sum_all, s.sup_fiber_sum)),
            (ClassLabel.LOWER_FRAME_SEQUENCE, lower, Characterization.S, "inf_n s_n > 0",
             bounds(lower, lower_value=s.inf_fiber_sum_all)),
            (ClassLabel.RIESZ_FISCHER, riesz_fischer, Characterization.G, "σ injective and inf_k w_k² > 0",
             bounds(riesz_fischer, lower_value=s.inf_weight_sq)),
            (ClassLabel.COMPLETE, s.sigma_surjective, Characterization.D, "σ surjective",
             None),
        ]

        verdicts: Dict[Characterization, List[LabelVerdict]] = {}
        for label, holds, via, anchor, label_bounds in rows:
            verdicts.setdefault(via, []).append(
                LabelVerdict(label=label, holds=holds, via=via, anchor=anchor, bounds=label_bounds)
            )

        consensus = {label: holds for label, holds, *_ in rows}
        tight = parseval = False
        if frame:
            a, b = _real(s.inf_fiber_sum_all), _real(s.sup_fiber_sum)
            tight = a == b
            parseval = tight and b == 1.0

        return ClassificationReport(
            verdicts={via: tuple(v) for via, v in verdicts.items()},
            consensus=consensus,
            agreement=True,
            tight=tight,
            parseval=parseval,
            source=s.label,
        )

    @staticmethod
    def cross_check(
        seq: FiniteSequence, tol: Optional[Tolerance] = None
    ) -> Tuple[bool, Tuple[Disagreement, ...]]:
        """
        Compare the four characterizations label by label

        Returns:
            (agreement, disagreements); a disagreement signals a tolerance pathology
        """
        report = ClassificationService.classify_finite(seq, tol)
        return report.agreement, report.disagreements
