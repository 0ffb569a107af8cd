import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings

from domain.models import FiniteSequence, Matrix, Tolerance
from modules.gallery import build_fixtures
from tests.fixtures.families import columns

hypothesis_settings.register_profile("default", max_examples=50, deadline=None)
hypothesis_settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def tol():
    return Tolerance(rank_rel=1e-10, residual_abs=1e-9)


@pytest.fixture(scope="session")
def gallery():
    return {fx.fixture_id: fx for fx in build_fixtures()}


@pytest.fixture
def onb2():
    return FiniteSequence.canonical_basis(2)


@pytest.fixture
def e1_e1_e2():
    return columns([1, 0], [1, 0], [0, 1], label="(e1, e1, e2)")


@pytest.fixture
def diag12():
    return Matrix.diag([1, 2])
