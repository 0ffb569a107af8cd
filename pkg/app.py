"""
Frame Operator Toolkit - command-line application
Main entry point: parses a command, runs the matching service and prints the report
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from config.cli_config import (
    APP_DESCRIPTION, APP_TITLE, COEFF_CHOICES_HELP, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK,
    LEVELS_HELP, VERB_HELP,
)
from config.settings import settings
from domain.enums import OperatorDomain, OutputFormat, TransformRule, Verb
from domain.exceptions import (
    FileError, HypothesisError, InvalidInputError, ParsingError, ValidationError,
)
from domain.models import Command, Tolerance
from repositories.fixture_repository import FixtureRepository
from services.classification_service import ClassificationService
from services.gallery_service import GalleryService
from services.membership_service import MembershipService
from services.operator_service import OperatorService
from services.report_service import ReportService
from services.transform_service import TransformService
from utils.formatters import format_extended_real
from utils.validators import parse_levels, validate_rank_tolerance

logger = logging.getLogger(__name__)

INPUT_ERRORS = (ValidationError, ParsingError, FileError, InvalidInputError, HypothesisError)

LNX2_FIXTURE = "R4"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framekit", description=f"{APP_TITLE}: {APP_DESCRIPTION}")
    verbs = parser.add_subparsers(dest="verb", metavar="VERB", required=True)

    def add_verb(verb: Verb) -> argparse.ArgumentParser:
        sub = verbs.add_parser(verb.value, help=VERB_HELP[verb.value])
        sub.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                         default=OutputFormat.JSON.value)
        sub.add_argument("--tol-rank", dest="tol_rank", type=float, default=None,
                         help="Relative rank tolerance in (0, 1)")
        return sub

    classify = add_verb(Verb.CLASSIFY)
    source = classify.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", dest="input_path")
    source.add_argument("--fixture")

    operators = add_verb(Verb.OPERATORS)
    operators.add_argument("--input", dest="input_path", required=True)

    gallery = add_verb(Verb.GALLERY)
    gallery.add_argument("--fixture")
    gallery.add_argument("--probe-lnx2", dest="probe_lnx2", action="store_true")
    gallery.add_argument("--levels", help=LEVELS_HELP)

    probe = add_verb(Verb.PROBE)
    probe.add_argument("--fixture", required=True)
    probe.add_argument("--coeff", required=True, help=COEFF_CHOICES_HELP)
    probe.add_argument("--domain", required=True, choices=[d.value for d in OperatorDomain])
    probe.add_argument("--levels", help=LEVELS_HELP)

    transform = add_verb(Verb.TRANSFORM)
    transform.add_argument("--input", dest="input_path", required=True)
    transform.add_argument("--operator", dest="operator_path", required=True)
    transform.add_argument("--rule", required=True, choices=[r.value for r in TransformRule])

    factorize = add_verb(Verb.FACTORIZE)
    factorize.add_argument("--input", dest="input_path", required=True)

    return parser


def parse_command(argv: List[str]) -> Command:
    """
    Parse argv into a Command

    Raises:
        SystemExit: On usage errors (exit code 2, usage on standard error)
        ValidationError: If --levels or --tol-rank are invalid
    """
    args = build_parser().parse_args(argv)
    validate_rank_tolerance(args.tol_rank)
    levels = getattr(args, "levels", None)
    domain = getattr(args, "domain", None)
    rule = getattr(args, "rule", None)
    return Command(
        verb=Verb(args.verb),
        input_path=getattr(args, "input_path", None),
        fixture=getattr(args, "fixture", None),
        coeff=getattr(args, "coeff", None),
        domain=OperatorDomain(domain) if domain else None,
        levels=parse_levels(levels) if levels else settings.PROBE_LEVELS,
        tol_rank=args.tol_rank,
        output_format=OutputFormat(args.output_format),
        operator_path=getattr(args, "operator_path", None),
        rule=TransformRule(rule) if rule else None,
        probe_lnx2=getattr(args, "probe_lnx2", False),
    )


def _tolerance(command: Command) -> Optional[Tolerance]:
    if command.tol_rank is None:
        return None
    return Tolerance(rank_rel=command.tol_rank, residual_abs=settings.RESIDUAL_ABS)


def _fixture_summary(fixture_id: str) -> Dict[str, Any]:
    s = FixtureRepository.get_structured(fixture_id)
    return {
        "id": fixture_id,
        "label": s.label,
        "sup_fiber_sum": format_extended_real(s.sup_fiber_sum),
        "inf_fiber_sum_all": format_extended_real(s.inf_fiber_sum_all),
        "inf_fiber_sum_range": format_extended_real(s.inf_fiber_sum_range),
        "inf_weight_sq": format_extended_real(s.inf_weight_sq),
        "sigma_injective": s.sigma_injective,
        "sigma_surjective": s.sigma_surjective,
    }


def execute(command: Command) -> Dict[str, Any]:
    """Run a parsed command and return its report payload"""
    tol = _tolerance(command)

    if command.verb == Verb.CLASSIFY:
        if command.fixture:
            report = ClassificationService.classify_structured(FixtureRepository.get_structured(command.fixture))
        else:
            report = ClassificationService.classify_finite(FixtureRepository.load_sequence(command.input_path), tol)
        return ReportService.classification_to_dict(report)

    if command.verb == Verb.OPERATORS:
        suite = OperatorService.build_suite(FixtureRepository.load_sequence(command.input_path), tol)
        return ReportService.operators_to_dict(suite, OperatorService.check_identities(suite))

    if command.verb == Verb.GALLERY:
        if command.probe_lnx2:
            fixture_id = command.fixture or LNX2_FIXTURE
            if fixture_id != LNX2_FIXTURE:
                raise ValidationError(f"--probe-lnx2 applies to {LNX2_FIXTURE}, got {fixture_id}")
            trace = GalleryService.lnx2_trace(FixtureRepository.get_structured(fixture_id), command.levels)
            return {"fixture": fixture_id, "trace": ReportService.trace_to_list(trace)}
        fixtures = (
            [FixtureRepository.get_fixture(command.fixture)] if command.fixture
            else FixtureRepository.list_fixtures()
        )
        payload = ReportService.outcomes_to_dict(GalleryService.verify_gallery(fixtures, command.levels))
        payload["fixtures"] = [_fixture_summary(fx.fixture_id) for fx in fixtures]
        return payload

    if command.verb == Verb.PROBE:
        s = FixtureRepository.get_structured(command.fixture)
        coefficients = FixtureRepository.get_coefficients(command.coeff)
        verdict = MembershipService.probe(s, coefficients, command.domain, command.levels)
        verdict = GalleryService.attach_anchor(
            command.fixture, command.coeff, verdict, FixtureRepository.list_fixtures()
        )
        return ReportService.membership_to_dict(verdict, command.fixture, command.coeff)

    if command.verb == Verb.TRANSFORM:
        seq = FixtureRepository.load_sequence(command.input_path)
        operator = FixtureRepository.load_matrix(command.operator_path)
        return ReportService.transform_to_dict(TransformService.verify_transform(seq, operator, command.rule, tol))

    if command.verb == Verb.FACTORIZE:
        seq = FixtureRepository.load_sequence(command.input_path)
        return ReportService.factorization_to_dict(TransformService.factorize_via_onb(seq, tol))

    raise ValidationError(f"Unknown verb: {command.verb}")


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line

    Returns:
        0 on success, 2 on input errors, 1 on internal failures
    """
    logging.basicConfig(
        level=settings.LOG_LEVEL.upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        command = parse_command(sys.argv[1:] if argv is None else argv)
        payload = execute(command)
        print(ReportService.render(payload, command.output_format))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    except INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        logger.exception("Internal failure")
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL

    if command.verb == Verb.GALLERY and payload.get("passed") is False:
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
