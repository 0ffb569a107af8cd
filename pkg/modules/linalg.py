"""
Dense complex linear algebra kernel
One-sided Jacobi SVD plus the rank, pseudo-inverse and subspace routines built on it
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import subspace_angles

from config.constants import PSD_NOISE_FACTOR
from config.settings import settings
from domain.enums import Subspace
from domain.exceptions import InvalidInputError
from domain.models import Matrix, SvdResult, Tolerance

logger = logging.getLogger(__name__)


def _round_robin(n: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """
    Fixed sweep order: n - 1 (or n) rounds of disjoint column pairs, each pair
    appearing exactly once per sweep (circle method).
    """
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= 0 and b >= 0:
                p.append(min(a, b))
                q.append(max(a, b))
        if p:
            rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Orthogonalize the columns of `a` by plane rotations.

    Returns (A V, V, sweeps) where V is unitary. A sweep that applies no
    rotation (every pair has |a_p^H a_q| <= tol * |a_p| |a_q|) ends the
    iteration.
    """
    work = np.array(a, dtype=np.complex128, copy=True)
    n = work.shape[1]
    v = np.eye(n, dtype=np.complex128)
    rounds = _round_robin(n)
    # columns with squared norm below this are numerically zero and never rotated
    floor = (np.finfo(np.float64).eps * np.linalg.norm(work)) ** 2

    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p, q in rounds:
            ap, aq = work[:, p], work[:, q]
            alpha = np.sum(np.abs(ap) ** 2, axis=0)
            beta = np.sum(np.abs(aq) ** 2, axis=0)
            gamma = np.sum(ap.conj() * aq, axis=0)
            mag = np.abs(gamma)
            active = (alpha > floor) & (beta > floor) & (mag > tol * np.sqrt(alpha * beta))
            if not np.any(active):
                continue
            rotated = True

            p, q = p[active], q[active]
            ap, aq = ap[:, active], aq[:, active]
            alpha, beta, mag = alpha[active], beta[active], mag[active]
            phase = np.exp(1j * np.angle(gamma[active]))

            # tan of the rotation angle, smaller root of t^2 + 2 zeta t - 1 = 0
            with np.errstate(over='ignore'):
                zeta = (beta - alpha) / (2.0 * mag)
                t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta ** 2))
            c = 1.0 / np.sqrt(1.0 + t ** 2)
            s = c * t

            bq = aq * phase.conj()
            work[:, p] = c * ap - s * bq
            work[:, q] = s * ap + c * bq

            vp, vq = v[:, p], v[:, q] * phase.conj()
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq

        if not rotated:
            logger.debug("Jacobi converged after %d sweep(s) on %dx%d", sweep, *a.shape)
            return work, v, sweep

    logger.warning("Jacobi SVD stopped at the sweep cap (%d) on %dx%d", max_sweeps, *a.shape)
    return work, v, max_sweeps


def _left_vectors(work: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Normalize the rotated columns; columns with negligible norm are completed by QR"""
    m, r = work.shape
    cutoff = np.finfo(np.float64).eps * max(m, r) * (s[0] if r else 0.0)
    good = s > cutoff
    u = np.zeros_like(work)
    u[:, good] = work[:, good] / s[good]
    missing = np.flatnonzero(~good)
    if missing.size:
        k = int(good.sum())
        q, _ = np.linalg.qr(np.hstack([u[:, good], np.eye(m, dtype=np.complex128)]))
        u[:, missing] = q[:, k:k + missing.size]
    return u


def svd(m: Matrix, method: Optional[str] = None) -> SvdResult:
    """
    Thin singular value decomposition.

    Args:
        m: Matrix to decompose
        method: "jacobi" (default, one-sided Jacobi) or "lapack"

    Returns:
        SvdResult with r = min(rows, cols) nonincreasing singular values

    Raises:
        InvalidInputError: If the matrix has a zero dimension
    """
    if m.rows == 0 or m.cols == 0:
        raise InvalidInputError(f"Cannot decompose a {m.rows}x{m.cols} matrix")

    method = method or settings.SVD_METHOD
    wide = m.cols > m.rows
    a = m.data.conj().T if wide else m.data
    sweeps = 0

    if method == 'jacobi':
        work, v, sweeps = _jacobi(a, settings.JACOBI_TOL, settings.JACOBI_MAX_SWEEPS)
        s = np.linalg.norm(work, axis=0)
        order = np.argsort(-s, kind='stable')
        s, work, v = s[order], work[:, order], v[:, order]
        u = _left_vectors(work, s)
    elif method == 'lapack':
        u, s, vh = np.linalg.svd(a, full_matrices=False)
        v = vh.conj().T
    else:
        raise ValueError(f"Unknown SVD method: {method}. Use 'jacobi' or 'lapack'.")

    if wide:
        u, v = v, u
    return SvdResult(Matrix(u), s, Matrix(v), sweeps)


def retained(singular_values: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Mask of singular values above rank_rel * sigma_max"""
    if singular_values.size == 0 or singular_values[0] <= 0:
        return np.zeros(singular_values.shape, dtype=bool)
    return singular_values > tol.rank_rel * singular_values[0]


def psd_cutoff(eigenvalues: np.ndarray, tol: Tolerance, size: int) -> float:
    """
    Cutoff for the eigenvalues of a positive semidefinite product such as
    D D^H or D^H D, whose eigenvalues are squared singular values.

    An eigenvalue is kept when it exceeds (rank_rel * sigma_max)^2, the same
    decision `retained` makes on sigma, and the noise floor
    PSD_NOISE_FACTOR * eps * size * lambda_max left by forming the product.
    """
    top = float(np.max(eigenvalues)) if eigenvalues.size else 0.0
    if top <= 0:
        return 0.0
    noise = PSD_NOISE_FACTOR * np.finfo(np.float64).eps * max(size, 1) * top
    return max(tol.rank_rel ** 2 * top, noise)


def psd_pseudo_inverse(m: Matrix, tol: Tolerance, size: int) -> Matrix:
    """Pseudo-inverse of a positive semidefinite matrix, eigenvalues cut by `psd_cutoff`"""
    values, vectors = eigh(m)
    cutoff = psd_cutoff(values, tol, size)
    keep = values > cutoff
    if cutoff <= 0 or not np.any(keep):
        return Matrix.zeros(m.cols, m.rows)
    v = vectors.data[:, keep]
    return Matrix((v / values[keep]) @ v.conj().T)


def psd_subspace_basis(m: Matrix, which: Subspace, tol: Tolerance, size: int) -> Matrix:
    """Range or null space of a positive semidefinite matrix, eigenvalues cut by `psd_cutoff`"""
    values, vectors = eigh(m)
    cutoff = psd_cutoff(values, tol, size)
    keep = values > cutoff if cutoff > 0 else np.zeros(values.shape, dtype=bool)
    if which == Subspace.RANGE:
        return Matrix(vectors.data[:, keep])
    return Matrix(vectors.data[:, ~keep])


def numerical_rank(m: Matrix, tol: Tolerance) -> int:
    """Number of singular values above rank_rel * sigma_max"""
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(retained(svd(m).singular_values, tol).sum())


def operator_norm(m: Matrix) -> float:
    """Largest singular value"""
    if m.rows == 0 or m.cols == 0:
        return 0.0
    return float(svd(m).singular_values[0])


def pseudo_inverse(m: Matrix, tol: Tolerance) -> Matrix:
    """
    Moore-Penrose pseudo-inverse with singular values below rank_rel * sigma_max
    treated as zero. The all-zero matrix maps to the zero matrix.
    """
    result = svd(m)
    keep = retained(result.singular_values, tol)
    if not np.any(keep):
        return Matrix.zeros(m.cols, m.rows)
    u = result.left_vectors.data[:, keep]
    v = result.right_vectors.data[:, keep]
    return Matrix((v / result.singular_values[keep]) @ u.conj().T)


def orthogonal_complement(basis: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the complement of span(basis) in C^dim"""
    k = basis.shape[1]
    if k == 0:
        return np.eye(dim, dtype=np.complex128)
    if k >= dim:
        return np.zeros((dim, 0), dtype=np.complex128)
    q, _ = np.linalg.qr(np.hstack([basis, np.eye(dim, dtype=np.complex128)]))
    return q[:, k:dim]


def subspace_basis(m: Matrix, which: Subspace, tol: Tolerance) -> Matrix:
    """
    Orthonormal basis of the range (left singular vectors with retained sigma)
    or the null space (right singular vectors with discarded sigma, completed
    by the directions a wide matrix never reaches).
    """
    if m.rows == 0 or m.cols == 0:
        if which == Subspace.RANGE:
            return Matrix.zeros(m.rows, 0)
        return Matrix.identity(m.cols) if m.cols else Matrix.zeros(0, 0)

    result = svd(m)
    keep = retained(result.singular_values, tol)
    if which == Subspace.RANGE:
        return Matrix(result.left_vectors.data[:, keep])

    v = result.right_vectors.data
    null = v[:, ~keep]
    if m.cols > v.shape[1]:
        null = np.hstack([null, orthogonal_complement(v, m.cols)])
    return Matrix(null)


def eigh(m: Matrix) -> Tuple[np.ndarray, Matrix]:
    """
    Hermitian eigendecomposition of the Hermitian part of m.

    Returns:
        (ascending eigenvalues, unitary matrix of eigenvectors)
    """
    if m.rows != m.cols or m.rows == 0:
        raise InvalidInputError(f"Hermitian eigendecomposition needs a square matrix, got {m.rows}x{m.cols}")
    hermitian = (m.data + m.data.conj().T) / 2.0
    values, vectors = np.linalg.eigh(hermitian)
    return values, Matrix(vectors)


def principal_angle(a: np.ndarray, b: np.ndarray) -> float:
    """
    Largest principal angle between two column spaces given by orthonormal bases.
    Two empty subspaces coincide; subspaces of different dimension are pi/2 apart.
    """
    if a.shape[1] == 0 and b.shape[1] == 0:
        return 0.0
    if a.shape[1] != b.shape[1]:
        return float(np.pi / 2)
    return float(np.max(subspace_angles(a, b)))


def containment_residual(inner: np.ndarray, outer: np.ndarray) -> float:
    """sin of the largest angle between span(inner) and span(outer); 0 when contained"""
    if inner.shape[1] == 0:
        return 0.0
    if outer.shape[1] == 0:
        return 1.0
    residual = inner - outer @ (outer.conj().T @ inner)
    return float(np.linalg.norm(residual, 2))
