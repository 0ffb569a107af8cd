"""
Report service: JSON and text renderings of every report
JSON is the contract (sorted keys, floats with 17 significant digits, "inf" for infinity);
text is a human summary built from pandas tables.
"""

import json
import logging
import math
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from domain.enums import OutputFormat
from domain.models import (
    ClassificationReport, FactOutcome, FactorizationReport, FrameBounds, IdentityReport,
    MembershipVerdict, OperatorSuite, TransformPrediction, TransformReport,
)
from utils.formatters import format_complex_pair, format_extended_real, format_flag, format_number

logger = logging.getLogger(__name__)


def _bounds(bounds: FrameBounds) -> Dict[str, Any]:
    if bounds is None:
        return {"A": None, "B": None, "optimal": False}
    return {
        "A": format_extended_real(bounds.lower),
        "B": format_extended_real(bounds.upper),
        "optimal": bounds.optimal,
    }


def _sanitize(value: Any) -> Any:
    """JSON-safe copy: numpy scalars unwrapped, infinities as "inf", NaN as null"""
    if isinstance(value, dict):
        return {str(k): _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
    return value


def _float17(value: float) -> str:
    text = format(value, ".17g")
    # keep integral values recognisable as floats
    return text if any(ch in text for ch in ".e") else text + ".0"


class Float17Encoder(json.JSONEncoder):
    """JSON encoder writing every finite float with 17 significant digits"""

    def iterencode(self, o, _one_shot=False):
        encode = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        iterencode = json.encoder._make_iterencode(
            {} if self.check_circular else None, self.default, encode, self.indent, _float17,
            self.key_separator, self.item_separator, self.sort_keys, self.skipkeys, _one_shot,
        )
        return iterencode(o, 0)


def _matrix(data) -> List[List[List[float]]]:
    return [[format_complex_pair(z) for z in row] for row in data]


class ReportService:
    """Service for rendering reports"""

    @staticmethod
    def classification_to_dict(report: ClassificationReport) -> Dict[str, Any]:
        labels = []
        for via, verdicts in report.verdicts.items():
            for verdict in verdicts:
                bounds = _bounds(verdict.bounds)
                labels.append({
                    "label": verdict.label.value,
                    "holds": verdict.holds,
                    "A": bounds["A"],
                    "B": bounds["B"],
                    "optimal": bounds["optimal"],
                    "via": via.value,
                    "anchor": verdict.anchor,
                    "borderline": verdict.borderline,
                })
        payload = {
            "source": report.source,
            "labels": labels,
            "consensus": {label.value: holds for label, holds in report.consensus.items()},
            "agreement": report.agreement,
            "borderline": report.borderline,
            "tight": report.tight,
            "parseval": report.parseval,
            "disagreements": [
                {
                    "label": d.label.value,
                    "verdicts": [[via.value, holds] for via, holds in d.verdicts],
                    "residuals": list(d.residuals),
                }
                for d in report.disagreements
            ],
        }
        if report.tol is not None:
            payload["tolerance"] = {"rank_rel": report.tol.rank_rel, "residual_abs": report.tol.residual_abs}
        return payload

    @staticmethod
    def operators_to_dict(suite: OperatorSuite, identities: IdentityReport) -> Dict[str, Any]:
        return {
            "source": suite.source.label,
            "dimension": suite.source.dimension,
            "count": suite.source.count,
            "D": _matrix(suite.synthesis.data),
            "C": _matrix(suite.analysis.data),
            "S": _matrix(suite.frame_op.data),
            "G": _matrix(suite.gram.data),
            "identities": ReportService.identities_to_list(identities),
            "passed": identities.passed,
        }

    @staticmethod
    def identities_to_list(identities: IdentityReport) -> List[Dict[str, Any]]:
        return [
            {"name": check.name, "residual": check.residual, "passed": check.passed}
            for check in identities.checks
        ]

    @staticmethod
    def membership_to_dict(verdict: MembershipVerdict, fixture_id: str, coeff: str) -> Dict[str, Any]:
        return {
            "fixture": fixture_id,
            "coeff": coeff,
            "domain": verdict.domain.value,
            "status": verdict.status.value,
            "anchor": verdict.anchor,
            "evidence": [[level, value] for level, value in verdict.evidence],
            "limit": None if verdict.limit is None else [format_complex_pair(z) for z in verdict.limit],
        }

    @staticmethod
    def outcomes_to_dict(outcomes: Sequence[FactOutcome]) -> Dict[str, Any]:
        return {
            "facts": [
                {
                    "fixture": o.fixture_id,
                    "fact": o.fact_id,
                    "expected": o.expected,
                    "observed": o.observed,
                    "anchor": o.anchor,
                    "passed": o.passed,
                }
                for o in outcomes
            ],
            "passed": all(o.passed for o in outcomes),
        }

    @staticmethod
    def trace_to_list(trace: Sequence[Tuple[int, float, float]]) -> List[Dict[str, Any]]:
        return [{"level": n, "error": error, "bound": bound} for n, error, bound in trace]

    @staticmethod
    def prediction_to_dict(prediction: TransformPrediction) -> Dict[str, Any]:
        return {
            "rule": prediction.rule.value,
            "anchor": prediction.anchor,
            "input": _bounds(prediction.input_bounds),
            "operator_norm": prediction.operator_norm,
            "pinv_norm": prediction.pinv_norm,
            "predicted": _bounds(prediction.predicted),
        }

    @staticmethod
    def transform_to_dict(report: TransformReport) -> Dict[str, Any]:
        payload = ReportService.classification_to_dict(report.classification)
        payload.update({
            "prediction": ReportService.prediction_to_dict(report.prediction),
            "predicted": _bounds(report.prediction.predicted),
            "actual": _bounds(report.actual),
            "label_holds": report.label_holds,
            "sandwich": report.sandwich,
            "failures": list(report.failures),
        })
        return payload

    @staticmethod
    def factorization_to_dict(report: FactorizationReport) -> Dict[str, Any]:
        return {
            "v": _matrix(report.v.data),
            "norm": report.norm,
            "inverse_norm": report.inverse_norm,
            "operator_properties": dict(report.operator_properties),
            "properties": {label.value: holds for label, holds in report.properties.items()},
            "matches_classification": report.matches_classification,
            "mismatches": [label.value for label in report.mismatches],
        }

    @staticmethod
    def render(payload: Dict[str, Any], output_format: OutputFormat = OutputFormat.JSON) -> str:
        """
        Render a report payload

        Args:
            payload: Report dictionary
            output_format: json or text

        Returns:
            Rendered report
        """
        if OutputFormat(output_format) == OutputFormat.JSON:
            text = json.dumps(_sanitize(payload), cls=Float17Encoder, sort_keys=True, indent=2,
                              ensure_ascii=False, allow_nan=False)
        else:
            text = ReportService.to_text(payload)
        logger.info("Rendered %s report of %d characters", OutputFormat(output_format).value, len(text))
        return text

    @staticmethod
    def to_text(payload: Dict[str, Any]) -> str:
        """Scalars as 'key: value' lines, lists of records as tables"""
        lines: List[str] = []
        tables: List[Tuple[str, pd.DataFrame]] = []
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, list) and value and all(isinstance(row, dict) for row in value):
                tables.append((key, pd.DataFrame(value)))
            elif isinstance(value, dict):
                inner = ", ".join(f"{k}={ReportService._cell(v)}" for k, v in sorted(value.items()))
                lines.append(f"{key}: {inner}")
            elif isinstance(value, list) and value and isinstance(value[0], list):
                lines.append(f"{key}: [{len(value)} rows]")
            else:
                lines.append(f"{key}: {ReportService._cell(value)}")
        for title, frame in tables:
            frame = frame.apply(lambda column: column.map(ReportService._cell))
            lines.append("")
            lines.append(title)
            lines.append(frame.to_string(index=False))
        return "\n".join(lines)

    @staticmethod
    def _cell(value: Any) -> str:
        if isinstance(value, bool) or value is None:
            return format_flag(value)
        if isinstance(value, float):
            return format_number(value)
        if isinstance(value, dict):
            return ", ".join(f"{k}={ReportService._cell(v)}" for k, v in sorted(value.items()))
        return str(value)
