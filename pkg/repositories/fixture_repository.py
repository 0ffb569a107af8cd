"""
Fixture repository
Lookup of gallery fixtures, named probe coefficients and input files in a centralized way
"""

from typing import Dict, List

from domain.exceptions import ValidationError
from domain.models import CoefficientSequence, FiniteSequence, Fixture, Matrix, StructuredSequence
from modules import codec
from modules.gallery import build_fixtures, canonical_onb, probe_coefficients
from services.file_service import FileService


class FixtureRepository:
    """Repository for fixtures and input documents"""

    # Prefix of coefficient names that refer to a file
    CUSTOM_PREFIX = 'custom:'
    ONB_ID = 'ONB'

    _fixtures: Dict[str, Fixture] = {}

    @staticmethod
    def list_fixtures() -> List[Fixture]:
        """All gallery fixtures ordered by id"""
        if not FixtureRepository._fixtures:
            FixtureRepository._fixtures = {fx.fixture_id: fx for fx in build_fixtures()}
        return [FixtureRepository._fixtures[key] for key in sorted(FixtureRepository._fixtures)]

    @staticmethod
    def get_fixture(fixture_id: str) -> Fixture:
        """Get a gallery fixture by id (R1..R7)"""
        for fixture in FixtureRepository.list_fixtures():
            if fixture.fixture_id == fixture_id:
                return fixture
        known = ', '.join(fx.fixture_id for fx in FixtureRepository.list_fixtures())
        raise ValidationError(f"Unknown fixture '{fixture_id}'. Known fixtures: {known}")

    @staticmethod
    def get_structured(fixture_id: str) -> StructuredSequence:
        """Structured sequence of a fixture; 'ONB' names the canonical basis"""
        if fixture_id == FixtureRepository.ONB_ID:
            return canonical_onb()
        return FixtureRepository.get_fixture(fixture_id).sequence

    @staticmethod
    def coefficient_names() -> List[str]:
        return sorted(probe_coefficients())

    @staticmethod
    def get_coefficients(name: str) -> CoefficientSequence:
        """Named probe coefficients, or custom:PATH for a coefficient file"""
        if name.startswith(FixtureRepository.CUSTOM_PREFIX):
            path = name[len(FixtureRepository.CUSTOM_PREFIX):]
            return codec.parse_coefficients(FileService.read_file_content(path), label=name)
        named = probe_coefficients()
        if name not in named:
            raise ValidationError(
                f"Unknown coefficients '{name}'. Use one of {', '.join(sorted(named))} or custom:PATH"
            )
        return named[name]

    @staticmethod
    def load_sequence(path: str) -> FiniteSequence:
        return codec.parse_finite(FileService.read_file_content(path))

    @staticmethod
    def load_matrix(path: str) -> Matrix:
        return codec.parse_matrix(FileService.read_file_content(path))
