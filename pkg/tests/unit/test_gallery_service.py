import math

import pytest

from domain.enums import MembershipStatus, OperatorDomain
from domain.models import MembershipVerdict
from modules.gallery import build_fixtures
from services.gallery_service import GalleryService
from services.membership_service import ANCHOR_DOM_G


@pytest.mark.parametrize("fixture_id", [f"R{i}" for i in range(1, 8)])
def test_every_pinned_fact_holds(gallery, fixture_id):
    outcomes = GalleryService.verify_fixture(gallery[fixture_id])
    assert outcomes
    failed = [(o.fact_id, o.expected, o.observed) for o in outcomes if not o.passed]
    assert not failed


def test_gallery_outcomes_are_ordered_by_fixture():
    fixtures = list(reversed(build_fixtures()))
    outcomes = GalleryService.verify_gallery(fixtures)
    ids = [o.fixture_id for o in outcomes]
    assert ids == sorted(ids)
    assert all(o.anchor for o in outcomes)


def test_lnx2_trace_stays_below_alternating_bound(gallery):
    trace = GalleryService.lnx2_trace(gallery["R4"].sequence, (10, 100, 1000))
    assert [n for n, _, _ in trace] == [10, 100, 1000]
    for n, error, bound in trace:
        assert bound == pytest.approx(1.0 / (n + 1))
        assert error <= bound


def test_lnx2_trace_converges(gallery):
    errors = [error for _, error, _ in GalleryService.lnx2_trace(gallery["R4"].sequence, (10, 1000))]
    assert errors[1] < errors[0] < math.log(2)


def test_attach_anchor_uses_pinned_fact():
    verdict = MembershipVerdict(OperatorDomain.G, MembershipStatus.NOT_IN_DOMAIN, anchor=ANCHOR_DOM_G)
    anchored = GalleryService.attach_anchor("R3", "delta1", verdict, build_fixtures())
    assert anchored.anchor == "δ_1∉dom(G)"


def test_attach_anchor_resolves_e1_alias():
    verdict = MembershipVerdict(OperatorDomain.C, MembershipStatus.NOT_IN_DOMAIN)
    anchored = GalleryService.attach_anchor("R1", "delta1", verdict, build_fixtures())
    assert anchored.anchor == "Then dom(C)={0}"


def test_attach_anchor_keeps_unpinned_verdict():
    verdict = MembershipVerdict(OperatorDomain.S, MembershipStatus.IN_DOMAIN, anchor="x")
    assert GalleryService.attach_anchor("R6", "delta1", verdict, build_fixtures()) is verdict
