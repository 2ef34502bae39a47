"""Matrix spectral factorization and matrix inner functions.

The outer factor of a positive definite density is computed with Bauer's
method: the block Toeplitz matrix of the density's Fourier coefficients is
Cholesky factored, and its last block row, read backwards, converges to
the taps of the outer factor as the Toeplitz size grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .delay import check_equal_gain
from .errors import (
    BoundaryDegenerateError,
    ConvergenceError,
    DimensionMismatchError,
    NotAProjectionError,
)
from .polynomial import (
    GridSamples,
    MatrixPoly,
    Poly,
    default_grid,
    evaluate_on_grid,
    matrix_inverse_on_grid,
    h2_norm_sq,
    multiply,
)

FACTOR_RTOL = 1e-6
DEGENERATE_RTOL = 1e-10
ANALYTIC_RTOL = 1e-6
UNITARY_TOL = 1e-8
MAX_BLOCKS = 1024
SETTLED_RTOL = 1e-11


def _hermitian(v):
    return v.conj().swapaxes(-1, -2)


@dataclass(frozen=True)
class ParaHermitianSamples(GridSamples):
    """Hermitian positive semidefinite ``d x d`` samples of a spectral density."""

    def __post_init__(self):
        super().__post_init__()
        v = self.values
        if v.ndim != 3:
            raise DimensionMismatchError("density samples must have shape (M, d, d)")
        scale = np.max(np.linalg.norm(v, axis=(1, 2))) or 1.0
        if np.max(np.abs(v - _hermitian(v))) > 1e-12 * scale:
            raise ValueError("density samples are not Hermitian")
        if np.min(np.linalg.eigvalsh(v)) < -1e-10 * scale:
            raise ValueError("density samples are not positive semidefinite")

    @classmethod
    def from_values(cls, values) -> "ParaHermitianSamples":
        v = np.asarray(values, dtype=complex)
        if v.ndim == 1:
            v = v[:, None, None]
        return cls((v + _hermitian(v)) / 2)


def para_hermitian_product(A, M: int | None = None) -> ParaHermitianSamples:
    """Nodewise ``A*(theta_k) A*(theta_k)^H`` on the ``M``-point grid."""
    if isinstance(A, Poly):
        A = MatrixPoly(A.coeffs[:, None, None])
    M = default_grid(A, M=M)
    v = evaluate_on_grid(A, M).values
    return ParaHermitianSamples.from_values(v @ _hermitian(v))


def _bauer_step(R, m, n):
    """Last Cholesky block row of the ``m``-block Toeplitz matrix, reversed."""
    M, d = R.shape[0], R.shape[1]
    i = np.arange(m)
    blocks = R[(i[:, None] - i[None, :]) % M]
    T = blocks.transpose(0, 2, 1, 3).reshape(m * d, m * d)
    L = linalg.cholesky(T, lower=True, check_finite=False)
    row = L[(m - 1) * d :].reshape(d, m, d).transpose(1, 0, 2)
    return row[::-1][: n + 1].copy()


def factorization_residual(F: MatrixPoly, S: GridSamples) -> float:
    """``max_k ||F F^H - S|| / max_k ||S||`` in Frobenius norm."""
    v = evaluate_on_grid(F, S.size).values
    diff = np.linalg.norm(v @ _hermitian(v) - S.values, axis=(1, 2))
    return float(diff.max() / np.max(np.linalg.norm(S.values, axis=(1, 2))))


def outer_certificate(F: MatrixPoly, S: GridSamples) -> tuple:
    """``(|det F(0)|, exp(mean(log det S) / 2))``; equal when ``F`` is outer."""
    logdet = np.linalg.slogdet(S.values)[1]
    return float(abs(np.linalg.det(F.coeffs[0]))), float(np.exp(0.5 * np.mean(logdet)))


def spectral_factor_outer(
    S: GridSamples,
    target_degree: int,
    tol: float = FACTOR_RTOL,
    max_blocks: int = MAX_BLOCKS,
) -> MatrixPoly:
    """Outer polynomial factor ``F`` with ``F F^H = S`` on the circle.

    The result is normalized so that ``F(0)`` is lower triangular with
    positive diagonal.

    Raises
    ------
    BoundaryDegenerateError
        If the smallest eigenvalue of ``S`` over the grid is not positive
        relative to its largest.
    ConvergenceError
        If the residual exceeds ``tol * max ||S||`` once the Toeplitz
        size stops improving the factor or reaches ``max_blocks``.

    Notes
    -----
    The Toeplitz size doubles until the residual falls below ``1e-11``,
    the taps stop changing, or ``max_blocks`` (capped at ``M/2``) is hit.
    """
    v = S.values if S.is_matrix else S.values[:, None, None]
    M = v.shape[0]
    eig = np.linalg.eigvalsh(v)
    if eig.min() <= DEGENERATE_RTOL * eig.max():
        k = int(np.argmin(eig.min(axis=1)))
        raise BoundaryDegenerateError(
            f"density is not uniformly positive definite (min eigenvalue {eig.min():.3g} at node {k})"
        )
    R = np.fft.fft(v, axis=0) / M
    limit = min(max_blocks, M // 2)
    m = min(max(4 * (target_degree + 1), 32), limit)
    prev = None
    while True:
        out = MatrixPoly(_bauer_step(R, m, target_degree))
        residual = factorization_residual(out, GridSamples(v))
        if residual <= SETTLED_RTOL or m >= limit:
            break
        if prev is not None and np.max(np.abs(out.coeffs - prev)) <= 1e-13 * np.max(np.abs(prev)):
            break
        prev, m = out.coeffs, min(2 * m, limit)
    if residual > tol:
        raise ConvergenceError(
            f"spectral factorization residual {residual:.3g} exceeds {tol:.3g} "
            f"at Toeplitz size {m}",
            residual=residual,
        )
    return out


def _check_projection(P):
    P = np.asarray(P, dtype=complex)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise NotAProjectionError("projection must be a square matrix")
    if np.max(np.abs(P @ P - P), initial=0) > 1e-12 or np.max(np.abs(P - P.conj().T), initial=0) > 1e-12:
        raise NotAProjectionError("matrix is not an orthogonal projection")
    return P


def blaschke_potapov_factor(P, z0: complex = 0.0, M: int | None = None):
    """Elementary inner factor ``I - P + b(z) P``.

    ``b`` is the scalar Blaschke factor with zero ``z0`` (``b(z) = z``
    for ``z0 = 0``). The polynomial case ``z0 = 0`` is returned as a
    :class:`MatrixPoly`; otherwise samples on the ``M``-point grid.
    """
    P = _check_projection(P)
    eye = np.eye(P.shape[0])
    if z0 == 0:
        return MatrixPoly(np.stack([eye - P, P]))
    if not abs(z0) < 1:
        raise ValueError(f"Blaschke-Potapov zero must lie in the open disk, got {z0}")
    M = default_grid(M=M)
    z = np.exp(2j * np.pi * np.arange(M) / M)
    b = (abs(z0) / z0) * (z0 - z) / (1 - np.conj(z0) * z)
    return GridSamples((eye - P)[None] + b[:, None, None] * P[None])


def unitarity_defect_matrix(U: GridSamples) -> float:
    """``max_k ||U U^H - I||`` (Frobenius)."""
    v = U.values
    eye = np.eye(v.shape[1])
    return float(np.max(np.linalg.norm(v @ _hermitian(v) - eye, axis=(1, 2))))


def analytic_defect(U: GridSamples) -> float:
    """Fraction of the grid energy of ``U`` carried by negative frequencies."""
    c = np.fft.fft(U.values, axis=0) / U.size
    e = np.abs(c.reshape(U.size, -1)) ** 2
    return float(e[U.size // 2 :].sum() / e.sum())


@dataclass(frozen=True)
class InnerMatrixCertificate:
    """Unitarity and analyticity defects of ``U = F^{-1} G`` on the grid."""

    max_unitarity_defect: float
    analytic_defect: float
    samples: GridSamples

    def passes(self, unitary_tol: float = UNITARY_TOL, analytic_tol: float = ANALYTIC_RTOL) -> bool:
        return self.max_unitarity_defect <= unitary_tol and self.analytic_defect <= analytic_tol


def _as_matrix(p):
    return MatrixPoly(p.coeffs[:, None, None]) if isinstance(p, Poly) else p


def inner_quotient_matrix(F, G, M: int | None = None) -> InnerMatrixCertificate:
    """Form ``U = F^{-1} G`` on the grid and certify that it is inner.

    Raises
    ------
    NotComparableError
        If ``F F^H`` and ``G G^H`` differ on the grid.
    SingularOnCircleError
        If ``F`` is singular at a grid node.
    """
    F, G = _as_matrix(F), _as_matrix(G)
    M = default_grid(F, G, M=M)
    check_equal_gain(F, G, M)
    Finv = matrix_inverse_on_grid(evaluate_on_grid(F, M))
    U = GridSamples(Finv.values @ evaluate_on_grid(G, M).values)
    return InnerMatrixCertificate(unitarity_defect_matrix(U), analytic_defect(U), U)


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_projection(d: int, rng, rank: int | None = None) -> np.ndarray:
    """Orthogonal projection onto a random subspace of the given rank."""
    rank = int(rng.integers(1, d + 1)) if rank is None else rank
    q = random_unitary(d, rng)[:, :rank]
    return q @ q.conj().T


def random_density_factor(rng, d: int, degree: int, margin: float = 0.1, max_cond: float = 1e6) -> MatrixPoly:
    """Random matrix polynomial whose density is uniformly positive definite.

    ``A = C prod_j (I - z Q_j diag(1/w_j) Q_j^H)`` with random unitaries
    ``Q_j`` and ``det A`` zeros ``w_j`` drawn at least ``margin`` away
    from the circle. Redrawn while the density's condition number
    exceeds ``max_cond``.
    """
    while True:
        c = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        A = MatrixPoly(c / np.sqrt(2 * d))
        for _ in range(degree):
            inside = rng.random(d) < 0.5
            r = np.where(inside, rng.uniform(0.3, 1 - margin, d), rng.uniform(1 + margin, 3.0, d))
            w = r * np.exp(2j * np.pi * rng.random(d))
            q = random_unitary(d, rng)
            A = multiply(A, MatrixPoly(np.stack([np.eye(d), -(q / w) @ q.conj().T])))
        A = A * (1 / np.sqrt(h2_norm_sq(A)))
        eig = np.linalg.eigvalsh(para_hermitian_product(A, 256).values)
        if eig.max() < max_cond * eig.min():
            return A


def generate_matrix_pair(
    seed: int, d: int, degree: int, n_factors: int, M: int | None = None, return_source: bool = False
):
    """Outer ``F`` and ``G = F U`` with ``U`` a polynomial inner function.

    ``F`` is the spectral factor of ``A A^H`` for a random ``A``. ``U`` is
    a product of ``n_factors`` random Blaschke-Potapov factors with zero
    at the origin followed by a random constant unitary, so ``G`` stays
    polynomial. With ``return_source`` the triple ``(F, G, A)`` is
    returned.
    """
    if not 1 <= d <= 4:
        raise ValueError("d must be in 1..4")
    if not 0 <= degree <= 8:
        raise ValueError("degree must be in 0..8")
    if not 0 <= n_factors <= 4:
        raise ValueError("n_factors must be in 0..4")
    rng = np.random.default_rng(seed)
    A = random_density_factor(rng, d, degree)
    F = spectral_factor_outer(para_hermitian_product(A, M), degree)
    U = MatrixPoly(np.eye(d))
    for _ in range(n_factors):
        U = multiply(U, blaschke_potapov_factor(random_projection(d, rng)))
    U = U * random_unitary(d, rng)
    G = multiply(F, U)
    return (F, G, A) if return_source else (F, G)
