import math

import numpy as np
import pytest

from domain.enums import MembershipStatus, OperatorDomain
from domain.exceptions import ValidationError
from domain.models import CoefficientSequence
from modules import convergence, series
from modules.gallery import probe_coefficients
from services.membership_service import (
    ANCHOR_DOM_C, ANCHOR_DOM_G, ANCHOR_DOM_S, MembershipService,
)

LEVELS = (64, 256, 1024, 4096)


@pytest.fixture(scope="module")
def coeffs():
    return probe_coefficients()


def test_r1_has_trivial_dom_c(gallery, coeffs):
    verdict = MembershipService.dom_c_membership(gallery["R1"].sequence, coeffs["e1"], LEVELS)
    assert verdict.status == MembershipStatus.NOT_IN_DOMAIN
    assert verdict.anchor == ANCHOR_DOM_C


def test_r1_rejects_random_nonzero_vectors(gallery, rng):
    s = gallery["R1"].sequence
    for _ in range(10):
        values = list(rng.integers(-3, 4, size=int(rng.integers(1, 8))))
        values[int(rng.integers(0, len(values)))] = 1
        f = CoefficientSequence.from_values([int(v) for v in values], label="random")
        assert MembershipService.dom_c_membership(s, f).status == MembershipStatus.NOT_IN_DOMAIN


def test_zero_vector_is_always_in_dom_c(gallery, coeffs):
    for fixture in gallery.values():
        verdict = MembershipService.dom_c_membership(fixture.sequence, coeffs["zeros"])
        assert verdict.status == MembershipStatus.IN_DOMAIN
        assert verdict.anchor is None


def test_r2_geometric_vector_is_in_dom_c(gallery, coeffs):
    verdict = MembershipService.dom_c_membership(gallery["R2"].sequence, coeffs["quarter-geometric"], LEVELS)
    assert verdict.status == MembershipStatus.IN_DOMAIN


def test_r2_geometric_vector_has_summable_analysis_coefficients(gallery, coeffs):
    samples = series.analysis_square_sums(gallery["R2"].sequence, coeffs["quarter-geometric"], LEVELS)
    values = [v for _, v in samples]
    assert convergence.judge(values, convergence.scalar_increments(values)) == MembershipStatus.CONVERGES
    assert values[-1] == pytest.approx(2.0 / 3.0)


def test_r2_geometric_vector_is_not_in_dom_s(gallery, coeffs):
    verdict = MembershipService.dom_s_membership(gallery["R2"].sequence, coeffs["quarter-geometric"], LEVELS)
    assert verdict.status == MembershipStatus.DIVERGES
    norms = [norm for _, norm in verdict.evidence]
    assert norms == sorted(norms)
    assert norms[-1] ** 2 == pytest.approx(LEVELS[-1] / 2, rel=1e-3)


def test_r6_frame_operator_on_e1(gallery, coeffs):
    verdict = MembershipService.dom_s_membership(gallery["R6"].sequence, coeffs["e1"])
    assert verdict.status == MembershipStatus.IN_DOMAIN
    assert verdict.anchor == ANCHOR_DOM_S
    np.testing.assert_allclose(verdict.limit, [1.0])


def test_zero_vector_is_in_dom_s(gallery, coeffs):
    verdict = MembershipService.dom_s_membership(gallery["R1"].sequence, coeffs["zeros"])
    assert verdict.status == MembershipStatus.IN_DOMAIN


def test_dom_s_inherits_dom_c_exclusion(gallery, coeffs):
    verdict = MembershipService.dom_s_membership(gallery["R1"].sequence, coeffs["e1"])
    assert verdict.status == MembershipStatus.NOT_IN_DOMAIN
    assert verdict.anchor == ANCHOR_DOM_S


def test_r3_delta1_is_in_dom_d(gallery, coeffs):
    verdict = MembershipService.dom_d_membership(gallery["R3"].sequence, coeffs["delta1"])
    assert verdict.status == MembershipStatus.IN_DOMAIN
    np.testing.assert_allclose(verdict.limit, [1.0])


def test_r4_alternating_harmonic_converges_to_ln2(gallery, coeffs):
    verdict = MembershipService.dom_d_membership(gallery["R4"].sequence, coeffs["harmonic-alt"], LEVELS)
    assert verdict.status == MembershipStatus.CONVERGES
    assert abs(verdict.limit[0] - math.log(2)) <= 1.0 / (LEVELS[-1] + 1)


def test_r4_sign_flipped_series_diverges(gallery, coeffs):
    verdict = MembershipService.dom_d_membership(gallery["R4"].sequence, coeffs["harmonic"], LEVELS)
    assert verdict.status == MembershipStatus.DIVERGES
    assert verdict.limit is None
    assert dict(verdict.evidence)[1024] > 5.0


def test_r3_delta1_is_not_in_dom_g(gallery, coeffs):
    verdict = MembershipService.dom_g_membership(gallery["R3"].sequence, coeffs["delta1"])
    assert verdict.status == MembershipStatus.NOT_IN_DOMAIN
    assert verdict.anchor == ANCHOR_DOM_G


def test_r6_finitely_supported_is_in_dom_g(gallery, rng):
    s = gallery["R6"].sequence
    for _ in range(5):
        values = list(rng.standard_normal(int(rng.integers(1, 10))))
        c = CoefficientSequence.from_values(values, label="random")
        assert MembershipService.dom_g_membership(s, c).status == MembershipStatus.IN_DOMAIN


def test_r5_delta1_is_in_dom_g(gallery, coeffs):
    assert MembershipService.dom_g_membership(gallery["R5"].sequence, coeffs["delta1"]).status == \
        MembershipStatus.IN_DOMAIN


def test_r3_cancelling_coefficients_stay_in_dom_g(gallery):
    # c_1 = 1, c_3 = -1 cancel on the infinite fiber of e_1
    c = CoefficientSequence.from_values([1, 0, -1], label="cancelling")
    assert MembershipService.dom_g_membership(gallery["R3"].sequence, c).status == MembershipStatus.IN_DOMAIN


def test_bessel_sequence_decides_closed_forms(gallery, coeffs):
    verdict = MembershipService.dom_d_membership(gallery["R6"].sequence, coeffs["quarter-geometric"], LEVELS)
    assert verdict.status == MembershipStatus.IN_DOMAIN
    assert len(verdict.evidence) == len(LEVELS)


def test_too_few_levels_is_inconclusive(gallery, coeffs):
    verdict = MembershipService.dom_d_membership(gallery["R4"].sequence, coeffs["harmonic-alt"], (64, 256))
    assert verdict.status == MembershipStatus.INCONCLUSIVE


@pytest.mark.parametrize("domain", list(OperatorDomain))
def test_probe_dispatches(gallery, coeffs, domain):
    verdict = MembershipService.probe(gallery["R6"].sequence, coeffs["delta1"], domain)
    assert verdict.domain == domain
    assert verdict.status == MembershipStatus.IN_DOMAIN


@pytest.mark.parametrize("levels", [(), (0, 4), (16, 8), (4, 4)])
def test_probe_rejects_bad_levels(gallery, coeffs, levels):
    with pytest.raises(ValidationError):
        MembershipService.probe(gallery["R6"].sequence, coeffs["delta1"], OperatorDomain.C, levels)


@pytest.mark.parametrize("name", ["harmonic", "harmonic-alt"])
def test_r2_harmonic_vectors_are_not_in_dom_c(gallery, coeffs, name):
    # s_n grows like 4^n while |f_n|^2 only decays like n^-2
    verdict = MembershipService.dom_c_membership(gallery["R2"].sequence, coeffs[name], LEVELS)
    assert verdict.status == MembershipStatus.NOT_IN_DOMAIN
    assert verdict.anchor == ANCHOR_DOM_C


def test_r2_harmonic_vector_is_not_in_dom_s(gallery, coeffs):
    verdict = MembershipService.dom_s_membership(gallery["R2"].sequence, coeffs["harmonic"], LEVELS)
    assert verdict.status == MembershipStatus.NOT_IN_DOMAIN


@pytest.mark.parametrize("domain", [OperatorDomain.D, OperatorDomain.G])
@pytest.mark.parametrize("name", ["harmonic", "harmonic-alt"])
def test_r2_harmonic_coefficients_beyond_double_precision_diverge(gallery, coeffs, domain, name):
    # weights 2^j overflow a double well before k = 4096
    verdict = MembershipService.probe(gallery["R2"].sequence, coeffs[name], domain, LEVELS)
    assert verdict.status == MembershipStatus.DIVERGES
    assert verdict.limit is None
    logs = [value for _, value in verdict.evidence]
    assert [n for n, _ in verdict.evidence] == list(LEVELS)
    assert logs[-1] > math.log(2.0) * 1000


def test_r2_harmonic_on_short_levels_stays_in_double_precision(gallery, coeffs):
    verdict = MembershipService.dom_d_membership(gallery["R2"].sequence, coeffs["harmonic"], (8, 16, 32, 64))
    assert verdict.status == MembershipStatus.DIVERGES
    assert dict(verdict.evidence)[64] > 2.0 ** 31 / 64


def test_finite_coefficients_with_huge_weights_keep_the_analytic_verdict(gallery):
    c = CoefficientSequence.from_values([0] * 4199 + [1], label="far delta")
    verdict = MembershipService.dom_d_membership(gallery["R2"].sequence, c)
    assert verdict.status == MembershipStatus.IN_DOMAIN
    assert verdict.limit is None


def test_log_term_maxima_are_exact_beyond_double_precision(gallery, coeffs):
    maxima = series.log_term_maxima(gallery["R2"].sequence, coeffs["quarter-geometric"], (2048, 4096),
                                    OperatorDomain.S)
    # w_k^2 f_{sigma(k)} = 4^j 4^-j = 1 on the even terms
    assert [n for n, _ in maxima] == [2048, 4096]
    assert all(value == pytest.approx(0.0, abs=1e-12) for _, value in maxima)


def test_log_term_maxima_for_synthesis(gallery, coeffs):
    maxima = dict(series.log_term_maxima(gallery["R2"].sequence, coeffs["harmonic"], (4096,), OperatorDomain.D))
    assert maxima[4096] == pytest.approx(2048 * math.log(2) - math.log(4096))


def test_log_term_maxima_for_gram_rows_sum_the_fiber(gallery):
    # R3 puts psi_1 and psi_3 on e1; c_1 = 1, c_3 = -1 cancel there
    c = CoefficientSequence.from_values([1, 0, -1], label="cancelling")
    maxima = dict(series.log_term_maxima(gallery["R3"].sequence, c, (1, 3), OperatorDomain.G))
    assert maxima[1] == pytest.approx(0.0)
    assert maxima[3] == pytest.approx(0.0)
    zero = CoefficientSequence.from_values([0], label="zero")
    assert series.log_term_maxima(gallery["R3"].sequence, zero, (4,), OperatorDomain.G) == [(4, -math.inf)]
