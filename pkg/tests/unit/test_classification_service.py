import dataclasses

import numpy as np
import pytest

from domain.enums import Characterization, ClassLabel
from domain.exceptions import InvalidInputError
from domain.models import FiniteSequence, Matrix, Tolerance
from modules.gallery import canonical_onb
from services.classification_service import ClassificationService
from services.operator_service import OperatorService
from services.sequence_service import SequenceService
from tests.fixtures.families import KINDS, columns, random_family, random_unit_vectors

L = ClassLabel


def test_onb_is_riesz_basis_with_unit_bounds(onb2):
    report = ClassificationService.classify_finite(onb2)
    assert report.holds(L.RIESZ_BASIS)
    bounds = report.bounds(L.RIESZ_BASIS)
    assert bounds.lower == pytest.approx(1.0) and bounds.upper == pytest.approx(1.0)
    assert bounds.optimal
    assert report.agreement and not report.disagreements
    assert report.tight and report.parseval


def test_repeated_vector_is_frame_but_not_riesz_fischer(e1_e1_e2):
    report = ClassificationService.classify_finite(e1_e1_e2)
    assert report.holds(L.FRAME)
    bounds = report.bounds(L.FRAME)
    assert bounds.lower == pytest.approx(1.0) and bounds.upper == pytest.approx(2.0)
    assert report.holds(L.COMPLETE)
    assert report.holds(L.RIESZ_FISCHER) is False
    assert report.holds(L.RIESZ_BASIS) is False
    assert report.agreement
    assert not report.tight


def test_single_vector_in_plane():
    report = ClassificationService.classify_finite(columns([1, 0]))
    assert report.holds(L.FRAME_SEQUENCE)
    fs = report.bounds(L.FRAME_SEQUENCE)
    assert fs.lower == pytest.approx(1.0) and fs.upper == pytest.approx(1.0)
    assert report.holds(L.RIESZ_FISCHER)
    assert report.bounds(L.RIESZ_FISCHER).lower == pytest.approx(1.0)
    assert report.holds(L.LOWER_FRAME_SEQUENCE) is False
    assert report.holds(L.COMPLETE) is False
    assert report.agreement


def test_every_characterization_reports_every_label(onb2):
    report = ClassificationService.classify_finite(onb2)
    for via in Characterization:
        assert [v.label for v in report.verdicts[via]] == list(ClassLabel)
        assert all(v.anchor for v in report.verdicts[via])


def test_lower_frame_sequence_via_gram_stays_open(onb2):
    verdict = ClassificationService.classify_finite(onb2).verdict(L.LOWER_FRAME_SEQUENCE, Characterization.G)
    assert verdict.holds is None
    assert "open" in verdict.anchor


def test_zero_sequence_is_only_bessel():
    report = ClassificationService.classify_finite(FiniteSequence.from_matrix(Matrix.zeros(2, 3)))
    assert report.holds(L.BESSEL)
    for label in (L.FRAME_SEQUENCE, L.FRAME, L.RIESZ_BASIS, L.RIESZ_FISCHER, L.COMPLETE):
        assert report.holds(label) is False
    assert report.bounds(L.BESSEL).upper == 0.0
    assert report.agreement


def test_implications_between_labels(rng):
    for kind in KINDS:
        for _ in range(10):
            report = ClassificationService.classify_finite(random_family(rng, kind))
            if report.holds(L.RIESZ_BASIS):
                assert report.holds(L.FRAME) and report.holds(L.RIESZ_FISCHER)
            if report.holds(L.FRAME):
                assert report.holds(L.COMPLETE) and report.holds(L.FRAME_SEQUENCE)
            assert report.holds(L.BESSEL)


def test_bounds_are_optimal_for_random_frames(rng):
    for _ in range(20):
        seq = random_family(rng, "full", d=4, n=int(rng.integers(4, 9)))
        report = ClassificationService.classify_finite(seq)
        bounds = report.bounds(L.FRAME)
        suite = OperatorService.build_suite(seq)
        vectors = random_unit_vectors(rng, 4, 200)
        quotients = np.sum(np.abs(suite.analysis.data @ vectors) ** 2, axis=0)
        slack = 1e-9 * bounds.upper
        assert bounds.lower - slack <= quotients.min()
        assert quotients.max() <= bounds.upper + slack
        # attained at the extreme left singular vectors
        u = np.linalg.svd(suite.synthesis.data)[0]
        assert np.sum(np.abs(suite.analysis.data @ u[:, 0]) ** 2) == pytest.approx(bounds.upper, rel=1e-9)
        assert np.sum(np.abs(suite.analysis.data @ u[:, -1]) ** 2) == pytest.approx(bounds.lower, rel=1e-9)


def test_tolerance_override_changes_rank_decision():
    seq = columns([1, 0], [0, 1e-3])
    assert ClassificationService.classify_finite(seq).holds(L.FRAME)
    loose = Tolerance(rank_rel=1e-2, residual_abs=1e-9)
    report = ClassificationService.classify_finite(seq, loose)
    assert report.holds(L.FRAME) is False
    assert report.tol == loose


def test_near_cutoff_is_flagged_borderline():
    seq = columns([1, 0], [0, 1.05e-3])
    report = ClassificationService.classify_finite(seq, Tolerance(rank_rel=1e-3, residual_abs=1e-9))
    assert report.borderline


def test_sections_of_onb():
    result = ClassificationService.riesz_fischer_via_sections(FiniteSequence.canonical_basis(3))
    assert result.a_est == pytest.approx(1.0)
    assert result.per_section == pytest.approx((1.0, 1.0, 1.0))
    assert result.riesz_fischer


def test_sections_of_repeated_vector(e1_e1_e2):
    result = ClassificationService.riesz_fischer_via_sections(e1_e1_e2)
    assert result.a_est == pytest.approx(0.0, abs=1e-15)
    assert not result.riesz_fischer


def test_sections_of_weighted_basis():
    seq = columns([2, 0], [0, 1])
    result = ClassificationService.riesz_fischer_via_sections(seq)
    assert result.per_section == pytest.approx((4.0, 1.0))
    assert result.a_est == pytest.approx(1.0)
    rf = ClassificationService.classify_finite(seq).verdict(L.RIESZ_FISCHER, Characterization.D)
    assert rf.bounds.lower == pytest.approx(result.a_est)


def test_sections_are_nonincreasing(rng):
    for kind in KINDS:
        for _ in range(5):
            result = ClassificationService.riesz_fischer_via_sections(random_family(rng, kind))
            slack = 1e-12 * max(1.0, result.per_section[0], result.threshold)
            assert all(b <= a + slack for a, b in zip(result.per_section, result.per_section[1:]))


def test_structured_r5(gallery):
    report = ClassificationService.classify_structured(gallery["R5"].sequence)
    assert report.holds(L.BESSEL) is False
    assert report.holds(L.LOWER_FRAME_SEQUENCE)
    assert report.bounds(L.LOWER_FRAME_SEQUENCE).lower == 1.0
    assert report.holds(L.COMPLETE)
    assert report.holds(L.RIESZ_FISCHER)
    assert report.bounds(L.RIESZ_FISCHER).lower == 1.0


def test_structured_r6(gallery):
    report = ClassificationService.classify_structured(gallery["R6"].sequence)
    assert report.holds(L.BESSEL)
    bounds = report.bounds(L.BESSEL)
    assert bounds.upper == 1.0 and bounds.optimal
    assert report.holds(L.LOWER_FRAME_SEQUENCE) is False
    assert report.holds(L.COMPLETE)


def test_structured_r4(gallery):
    report = ClassificationService.classify_structured(gallery["R4"].sequence)
    for label in (L.BESSEL, L.COMPLETE, L.RIESZ_FISCHER):
        assert report.holds(label) is False


def test_structured_r1_bounds_are_not_optimal(gallery):
    report = ClassificationService.classify_structured(gallery["R1"].sequence)
    assert report.holds(L.LOWER_FRAME_SEQUENCE)
    assert report.bounds(L.LOWER_FRAME_SEQUENCE).optimal is False


def test_structured_onb_is_parseval():
    report = ClassificationService.classify_structured(canonical_onb())
    assert report.holds(L.RIESZ_BASIS)
    assert report.parseval


def test_missing_annotation_leaves_label_open(gallery):
    bare = dataclasses.replace(gallery["R6"].sequence, sup_fiber_sum=None, sigma_surjective=None)
    report = ClassificationService.classify_structured(bare)
    assert report.holds(L.BESSEL) is None
    assert report.holds(L.FRAME) is None
    assert report.holds(L.COMPLETE) is None
    assert report.holds(L.RIESZ_FISCHER) is False


def test_r7_shares_gram_with_onb_but_is_incomplete(gallery):
    n = 32
    r7 = gallery["R7"].sequence
    ours = OperatorService.build_suite(SequenceService.truncate(r7, n)).gram.data
    onb = OperatorService.build_suite(SequenceService.truncate(canonical_onb(), n)).gram.data
    np.testing.assert_array_equal(ours, onb)
    assert ClassificationService.classify_structured(r7).holds(L.COMPLETE) is False
    assert ClassificationService.classify_structured(canonical_onb()).holds(L.COMPLETE)


def test_cross_check_on_onb(onb2):
    agreement, disagreements = ClassificationService.cross_check(onb2)
    assert agreement and disagreements == ()


def test_cross_check_reports_disagreement_instead_of_failing():
    # sigma_min / sigma_max = 1e-8: kept by the SVD cutoff, below the round-off floor once squared
    seq = columns([1, 0], [0, 1e-8])
    agreement, disagreements = ClassificationService.cross_check(seq)
    assert not agreement
    labels = {d.label for d in disagreements}
    assert L.FRAME in labels
    frame = next(d for d in disagreements if d.label == L.FRAME)
    assert len(frame.residuals) == len(frame.verdicts)
    assert dict(frame.verdicts)[Characterization.C] is True
    assert dict(frame.verdicts)[Characterization.S] is False


def test_unresolvable_squared_values_follow_the_svd_and_mark_borderline():
    report = ClassificationService.classify_finite(columns([1, 0], [0, 1e-8]))
    assert report.agreement is False
    assert report.borderline
    assert report.consensus[L.FRAME] is True
    assert report.consensus[L.RIESZ_BASIS] is True
    assert report.consensus[L.RIESZ_FISCHER] is True


def test_squared_values_use_the_same_decision_as_singular_values():
    # sigma_2 = 1e-6 is far above rank_rel; its square 1e-12 must not be dropped
    seq = FiniteSequence.from_matrix(Matrix.diag([1, 1e-6]))
    report = ClassificationService.classify_finite(seq)
    assert report.agreement
    assert not report.borderline
    for label in L:
        assert report.consensus[label] is True, label
    for via in Characterization:
        frame = next(v for v in report.verdicts[via] if v.label == L.FRAME)
        assert frame.holds is True, via
    bounds = next(v for v in report.verdicts[Characterization.S] if v.label == L.FRAME).bounds
    assert bounds.lower == pytest.approx(1e-12, rel=1e-6)


def test_exact_rank_deficiency_is_seen_by_every_characterization(rng):
    for kind in ("deficient", "duplicated"):
        for _ in range(20):
            seq = random_family(rng, kind)
            report = ClassificationService.classify_finite(seq)
            assert report.agreement, seq.label


def test_classification_wraps_numeric_failures(monkeypatch, onb2):
    def broken(*args, **kwargs):
        raise FloatingPointError("boom")

    monkeypatch.setattr(OperatorService, "build_suite", broken)
    with pytest.raises(InvalidInputError, match="boom"):
        ClassificationService.classify_finite(onb2)
