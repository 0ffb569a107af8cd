import json
import math

import numpy as np
import pytest

from domain.enums import MembershipStatus, OperatorDomain, OutputFormat
from domain.models import MembershipVerdict
from services.classification_service import ClassificationService
from services.operator_service import OperatorService
from services.report_service import ReportService, _sanitize


def test_sanitize_handles_non_finite_values_and_numpy_scalars():
    payload = {"a": math.inf, "b": float("nan"), "c": np.float64(0.5), "d": (1, np.int64(2)), 3: -math.inf}
    assert _sanitize(payload) == {"a": "inf", "b": None, "c": 0.5, "d": [1, 2], "3": "-inf"}


def test_json_is_sorted_and_deterministic(onb2):
    payload = ReportService.classification_to_dict(ClassificationService.classify_finite(onb2))
    first = ReportService.render(payload, OutputFormat.JSON)
    second = ReportService.render(
        ReportService.classification_to_dict(ClassificationService.classify_finite(onb2)), OutputFormat.JSON
    )
    assert first == second
    keys = list(json.loads(first))
    assert keys == sorted(keys)


def test_classification_payload(e1_e1_e2):
    payload = ReportService.classification_to_dict(ClassificationService.classify_finite(e1_e1_e2))
    frame_d = next(row for row in payload["labels"] if row["label"] == "Frame" and row["via"] == "D")
    assert frame_d["holds"] is True
    assert frame_d["A"] == pytest.approx(1.0) and frame_d["B"] == pytest.approx(2.0)
    assert payload["consensus"]["RieszFischer"] is False
    assert payload["agreement"] is True
    assert payload["tolerance"]["rank_rel"] > 0


def test_floats_are_written_with_17_significant_digits():
    text = ReportService.render({"x": 0.1, "y": [1.0, 1e-300, 2.5e20], "z": 3})
    assert '"x": 0.10000000000000001' in text
    assert "2.5e+20" in text
    assert '"z": 3' in text
    parsed = json.loads(text)
    assert parsed["x"] == 0.1
    assert parsed["y"] == [1.0, 1e-300, 2.5e20]
    assert isinstance(parsed["y"][0], float)


def test_structured_classification_renders_infinite_bound(gallery):
    payload = ReportService.classification_to_dict(ClassificationService.classify_structured(gallery["R1"].sequence))
    rendered = json.loads(ReportService.render(payload))
    lower = next(row for row in rendered["labels"] if row["label"] == "LowerFrameSequence")
    assert lower["A"] == "inf"
    assert lower["optimal"] is False


def test_operators_payload(e1_e1_e2):
    suite = OperatorService.build_suite(e1_e1_e2)
    payload = ReportService.operators_to_dict(suite, OperatorService.check_identities(suite))
    assert payload["S"] == [[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
    assert payload["passed"] is True
    assert {row["name"] for row in payload["identities"]} >= {"S=DC", "ranS=ranD"}


def test_membership_payload():
    verdict = MembershipVerdict(
        OperatorDomain.D, MembershipStatus.CONVERGES, evidence=((64, 0.7),), limit=np.array([0.69 + 0j]),
    )
    payload = ReportService.membership_to_dict(verdict, "R4", "harmonic-alt")
    assert payload["status"] == "NumericEvidenceConverges"
    assert payload["evidence"] == [[64, 0.7]]
    assert payload["limit"] == [[0.69, 0.0]]


def test_text_rendering_contains_tables(e1_e1_e2):
    payload = ReportService.classification_to_dict(ClassificationService.classify_finite(e1_e1_e2))
    text = ReportService.render(payload, OutputFormat.TEXT)
    assert "agreement: yes" in text
    assert "labels" in text
    assert "RieszFischer" in text
