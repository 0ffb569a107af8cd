"""
Operator service: analysis, synthesis, frame and Gram operators of finite sequences
and the identities relating them
"""

import logging
from numbers import Number
from typing import Optional, Tuple

import numpy as np

from config.settings import settings
from domain.enums import Subspace
from domain.models import (
    FiniteSequence, IdentityCheck, IdentityReport, Matrix, OperatorSuite,
    StructuredSequence, Tolerance,
)
from modules import linalg

logger = logging.getLogger(__name__)


def _frobenius(residual: np.ndarray) -> float:
    return float(np.linalg.norm(residual))


class OperatorService:
    """Service for building operator suites and checking their identities"""

    @staticmethod
    def build_suite(seq: FiniteSequence, tol: Optional[Tolerance] = None) -> OperatorSuite:
        """
        Build D, C = D^H, S = sum_k psi_k psi_k^H and G_{k,l} = <psi_l, psi_k>

        Args:
            seq: Finite sequence
            tol: Tolerance; defaults to the dimension-scaled setting

        Returns:
            OperatorSuite
        """
        tol = tol or settings.default_tolerance(seq.dimension, seq.count)
        d = seq.synthesis_matrix().data
        frame_op = np.einsum('ik,jk->ij', d, d.conj())
        gram = np.einsum('ik,il->kl', d.conj(), d)
        return OperatorSuite(
            synthesis=Matrix(d),
            analysis=Matrix(d.conj().T),
            frame_op=Matrix(frame_op),
            gram=Matrix(gram),
            source=seq,
            tol=tol,
        )

    @staticmethod
    def check_identities(suite: OperatorSuite) -> IdentityReport:
        """
        Residuals of C = D^H, S = DC, G = CD, the kernel chain
        ker S = ker C = (ran D)^perp, ran S within ran D, ran S = ran D,
        and Hermitian positivity of S.

        Matrix residuals are absolute Frobenius norms and S >= 0 reports the
        negative part of the smallest eigenvalue, so they scale with ||S||.
        Subspace residuals are largest principal angles.
        """
        tol = suite.tol
        d, c, s, g = suite.synthesis.data, suite.analysis.data, suite.frame_op.data, suite.gram.data
        dim = suite.source.dimension
        limit = tol.residual_abs

        size = max(dim, suite.source.count)
        ker_s = linalg.psd_subspace_basis(suite.frame_op, Subspace.NULLSPACE, tol, size).data
        ker_c = linalg.subspace_basis(suite.analysis, Subspace.NULLSPACE, tol).data
        ran_d = linalg.subspace_basis(suite.synthesis, Subspace.RANGE, tol).data
        ran_s = linalg.psd_subspace_basis(suite.frame_op, Subspace.RANGE, tol, size).data
        ran_d_perp = linalg.orthogonal_complement(ran_d, dim)

        eigenvalues, _ = linalg.eigh(suite.frame_op)

        residuals = [
            ("C=D^H", float(np.max(np.abs(c - d.conj().T))) if c.size else 0.0),
            ("S=DC", _frobenius(s - d @ c)),
            ("G=CD", _frobenius(g - c @ d)),
            ("kerS=kerC", linalg.principal_angle(ker_s, ker_c)),
            ("kerC=ranD_perp", linalg.principal_angle(ker_c, ran_d_perp)),
            ("kerS=ranD_perp", linalg.principal_angle(ker_s, ran_d_perp)),
            ("ranS<=ranD", linalg.containment_residual(ran_s, ran_d)),
            ("ranS=ranD", linalg.principal_angle(ran_s, ran_d)),
            ("S=S^H", _frobenius(s - s.conj().T)),
            ("S>=0", max(0.0, -float(eigenvalues[0]))),
        ]
        checks = []
        for name, residual in residuals:
            # C = D^H is constructed, not computed
            passed = residual == 0.0 if name == "C=D^H" else residual <= limit
            checks.append(IdentityCheck(name=name, residual=residual, passed=passed))
            if not passed:
                logger.warning("Identity %s failed with residual %.3e", name, residual)
        return IdentityReport(checks=tuple(checks))

    @staticmethod
    def gram_column_square_sums(s: StructuredSequence, k: int) -> Number:
        """sum_l |<psi_l, psi_k>|^2 = w_k^2 s_{sigma(k)}; finite iff delta_k lies in dom(G)"""
        sigma, w = s.generator(k)
        if w == 0:
            return 0
        return w * w * s.fiber_sum(sigma)

    @staticmethod
    def rayleigh_check(suite: OperatorSuite, f: np.ndarray) -> float:
        """Relative gap between <Sf, f> and sum_k |<f, psi_k>|^2"""
        f = np.asarray(f, dtype=np.complex128)
        quadratic = np.vdot(f, suite.frame_op.data @ f).real
        energy = float(np.sum(np.abs(suite.analysis.data @ f) ** 2))
        return abs(quadratic - energy) / max(1.0, energy)

    @staticmethod
    def canonical_dual(
        suite: OperatorSuite, tol: Optional[Tolerance] = None
    ) -> Tuple[FiniteSequence, float]:
        """
        Canonical dual (S^+ psi_k) and the biorthogonality residual ||C S^+ D - I_n||_2

        The residual vanishes exactly when Psi is biorthogonal to its dual,
        i.e. when the vectors are linearly independent.
        """
        tol = tol or suite.tol
        size = max(suite.source.dimension, suite.source.count)
        s_pinv = linalg.psd_pseudo_inverse(suite.frame_op, tol, size)
        dual = s_pinv @ suite.synthesis
        mixed = suite.analysis @ dual
        residual = float(np.linalg.norm(mixed.data - np.eye(mixed.rows), 2))
        label = f"dual of {suite.source.label}" if suite.source.label else "canonical dual"
        return FiniteSequence.from_matrix(dual, label=label), residual
