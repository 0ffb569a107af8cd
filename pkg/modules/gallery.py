"""
Counterexample gallery
Weighted indexed ONB sequences psi_k = w_k e_{sigma(k)} with their annotations,
pinned facts, and the named probe coefficient sequences
"""

import math
from fractions import Fraction
from typing import Dict, List, Tuple

from domain.enums import CoefficientKind
from domain.models import CoefficientSequence, ExpectedFact, Fixture, StructuredSequence

INF = math.inf


def _block_index(k: int) -> Tuple[int, int]:
    """Block m and position i of k in 1 | 1 2 | 1 2 3 | ... (block m has m entries)"""
    m = (math.isqrt(8 * k + 1) - 1) // 2
    if m * (m + 1) // 2 < k:
        m += 1
    return m, k - (m - 1) * m // 2


def _r1(k: int):
    _, i = _block_index(k)
    return i, 1


def _r2(k: int):
    # weights 2^-j land on e_1, weights 2^j on e_{j+1}
    j = (k + 1) // 2
    if k % 2:
        return 1, Fraction(1, 2 ** j)
    return j + 1, 2 ** j


def _r2_fiber(n: int):
    return Fraction(1, 3) if n == 1 else 4 ** (n - 1)


def _r3(k: int):
    if k % 2:
        return 1, 1
    return k // 2 + 1, 1


def build_fixtures() -> List[Fixture]:
    """The seven gallery fixtures R1..R7 in order"""
    r1 = StructuredSequence(
        generator=_r1,
        fiber_sum=lambda n: INF,
        label="R1 (e1, e1, e2, e1, e2, e3, ...)",
        sup_fiber_sum=INF, inf_fiber_sum_all=INF, inf_fiber_sum_range=INF,
        sigma_injective=False, sigma_surjective=True, inf_weight_sq=1,
    )
    r2 = StructuredSequence(
        generator=_r2,
        fiber_sum=_r2_fiber,
        label="R2 (e1/2, 2e2, e1/4, 4e3, e1/8, 8e4, ...)",
        sup_fiber_sum=INF, inf_fiber_sum_all=Fraction(1, 3), inf_fiber_sum_range=Fraction(1, 3),
        sigma_injective=False, sigma_surjective=True, inf_weight_sq=0,
        fiber_ratio=4.0, extrema_attained=True,
    )
    r3 = StructuredSequence(
        generator=_r3,
        fiber_sum=lambda n: INF if n == 1 else 1,
        label="R3 (e1, e2, e1, e3, e1, e4, ...)",
        sup_fiber_sum=INF, inf_fiber_sum_all=1, inf_fiber_sum_range=1,
        sigma_injective=False, sigma_surjective=True, inf_weight_sq=1,
        extrema_attained=True,
    )
    r4 = StructuredSequence(
        generator=lambda k: (1, 1),
        fiber_sum=lambda n: INF if n == 1 else 0,
        label="R4 (e1, e1, e1, ...)",
        sup_fiber_sum=INF, inf_fiber_sum_all=0, inf_fiber_sum_range=INF,
        sigma_injective=False, sigma_surjective=False, inf_weight_sq=1,
    )
    r5 = StructuredSequence(
        generator=lambda k: (k, k),
        fiber_sum=lambda n: n * n,
        label="R5 (e1, 2e2, 3e3, ...)",
        sup_fiber_sum=INF, inf_fiber_sum_all=1, inf_fiber_sum_range=1,
        sigma_injective=True, sigma_surjective=True, inf_weight_sq=1,
        extrema_attained=True,
    )
    r6 = StructuredSequence(
        generator=lambda k: (k, Fraction(1, k)),
        fiber_sum=lambda n: Fraction(1, n * n),
        label="R6 (e1, e2/2, e3/3, ...)",
        sup_fiber_sum=1, inf_fiber_sum_all=0, inf_fiber_sum_range=0,
        sigma_injective=True, sigma_surjective=True, inf_weight_sq=0,
        extrema_attained=True,
    )
    r7 = StructuredSequence(
        generator=lambda k: (k + 1, 1),
        fiber_sum=lambda n: 0 if n == 1 else 1,
        label="R7 (e2, e3, e4, ...)",
        sup_fiber_sum=1, inf_fiber_sum_all=0, inf_fiber_sum_range=1,
        sigma_injective=True, sigma_surjective=False, inf_weight_sq=1,
        extrema_attained=True,
    )

    return [
        Fixture("R1", r1, (
            ExpectedFact("dom_c_trivial", "NotInDomain", "Then dom(C)={0}"),
            ExpectedFact("bessel", False, "the non-Bessel sequence"),
            ExpectedFact("fiber_sums_infinite", True, "Then dom(C)={0}"),
        )),
        Fixture("R2", r2, (
            ExpectedFact("h_in_dom_c", "InDomain", "belongs to dom(C)"),
            ExpectedFact("h_not_in_dom_s", "NumericEvidenceDiverges", "does not belong to dom(S)"),
            ExpectedFact("bessel", False, "the non-Bessel sequence"),
        )),
        Fixture("R3", r3, (
            ExpectedFact("delta1_in_dom_d", "InDomain", "δ_1∈dom(D)"),
            ExpectedFact("delta1_not_in_dom_g", "NotInDomain", "δ_1∉dom(G)"),
        )),
        Fixture("R4", r4, (
            ExpectedFact("alternating_limit", math.log(2), "= (\\ln2) e_1"),
            ExpectedFact("sign_flipped_diverges", "NumericEvidenceDiverges", "does not converge"),
        )),
        Fixture("R5", r5, (
            ExpectedFact("gram_columns_finite", True, "does not require Ψ to be a Bessel sequence"),
            ExpectedFact("bessel", False, "does not require Ψ to be a Bessel sequence"),
            ExpectedFact("inf_fiber_sum_all", 1, "does not require Ψ to be a Bessel sequence"),
        )),
        Fixture("R6", r6, (
            ExpectedFact("gram_hilbert_schmidt", True, "it satisfies (vi)"),
            ExpectedFact("bessel", True, "it satisfies (vi)"),
            ExpectedFact("sup_fiber_sum", 1, "it satisfies (vi)"),
        )),
        Fixture("R7", r7, (
            ExpectedFact("same_gram_as_onb", True, "have the same Gram matrix"),
            ExpectedFact("complete", False, "have the same Gram matrix"),
        )),
    ]


def canonical_onb() -> StructuredSequence:
    """The canonical orthonormal basis (e1, e2, e3, ...)"""
    return StructuredSequence(
        generator=lambda k: (k, 1),
        fiber_sum=lambda n: 1,
        label="ONB (e1, e2, e3, ...)",
        sup_fiber_sum=1, inf_fiber_sum_all=1, inf_fiber_sum_range=1,
        sigma_injective=True, sigma_surjective=True, inf_weight_sq=1,
        extrema_attained=True,
    )


def probe_coefficients() -> Dict[str, CoefficientSequence]:
    """Named coefficient sequences used by probes and the CLI"""
    return {
        "delta1": CoefficientSequence.from_values([1], label="delta1"),
        "e1": CoefficientSequence.from_values([1], label="e1"),
        "zeros": CoefficientSequence.from_values([0], label="zeros"),
        "harmonic-alt": CoefficientSequence(
            kind=CoefficientKind.CLOSED_FORM,
            values=lambda k: (1.0 if k % 2 else -1.0) / k,
            label="harmonic-alt (1, -1/2, 1/3, -1/4, ...)",
            ratio=1.0,
        ),
        "harmonic": CoefficientSequence(
            kind=CoefficientKind.CLOSED_FORM,
            values=lambda k: 1.0 / k,
            label="harmonic (1, 1/2, 1/3, 1/4, ...)",
            ratio=1.0,
        ),
        "quarter-geometric": CoefficientSequence(
            kind=CoefficientKind.CLOSED_FORM,
            values=lambda n: Fraction(1, 4 ** (n - 1)),
            label="quarter-geometric <h, e_n> = 4^-(n-1)",
            ratio=0.25,
        ),
    }
