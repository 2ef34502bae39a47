"""Scalar and matrix polynomials, unit-circle grids, norms and roots.

Coefficients are stored in ascending order, ``a_0, a_1, ..., a_n``, so a
polynomial ``p`` is the causal FIR transfer function ``sum_n a_n z**n``.
Boundary values are sampled on the uniform grid ``theta_k = 2*pi*k/M``
with the convention ``p*(theta_k) = sum_n a_n exp(i*n*theta_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    DimensionMismatchError,
    InvalidGridError,
    SingularOnCircleError,
    ZeroPolynomialError,
)

DEFAULT_GRID_SIZE = 4096
ROOT_CLUSTER_TOL = 1e-7
SINGULAR_COND = 1e12


class Poly:
    """Scalar polynomial with complex coefficients in trimmed form.

    Trailing zero coefficients are dropped, so ``degree`` is exact. The
    zero polynomial is stored as the single coefficient ``0``.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).reshape(-1)
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=complex)
        c.flags.writeable = False
        self._coeffs = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self._coeffs.any()

    def __call__(self, z):
        return npoly.polyval(z, self._coeffs)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return multiply(self, other)
        if np.isscalar(other):
            return Poly(self._coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        n = max(len(self._coeffs), len(other.coeffs))
        return Poly(_pad(self._coeffs, n) + _pad(other.coeffs, n))

    def __neg__(self):
        return Poly(-self._coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else -other)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return np.array_equal(self._coeffs, other.coeffs)

    def __hash__(self):
        return hash(self._coeffs.tobytes())

    def __repr__(self):
        return f"Poly({np.array2string(self._coeffs, precision=6, separator=', ')})"

    @classmethod
    def from_roots(cls, zeros, lead=1.0) -> "Poly":
        """Build ``lead * prod(z - r)`` for the given roots."""
        c = np.array([lead], dtype=complex)
        for r in np.asarray(zeros, dtype=complex).reshape(-1):
            c = np.convolve(c, [-r, 1.0])
        return cls(c)

    @classmethod
    def monomial(cls, k: int, scale=1.0) -> "Poly":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = scale
        return cls(c)


class MatrixPoly:
    """Square ``d x d`` matrix polynomial ``sum_n A_n z**n``.

    ``coeffs`` has shape ``(n + 1, d, d)``; trailing zero matrices are
    trimmed as for :class:`Poly`.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[np.newaxis]
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[1] < 1:
            raise DimensionMismatchError(
                f"matrix coefficients must have shape (n+1, d, d), got {c.shape}"
            )
        nz = np.flatnonzero(np.any(c != 0, axis=(1, 2)))
        c = c[: nz[-1] + 1] if nz.size else np.zeros((1,) + c.shape[1:], dtype=complex)
        c.flags.writeable = False
        self._coeffs = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def dim(self) -> int:
        return self._coeffs.shape[1]

    @property
    def degree(self) -> int:
        return self._coeffs.shape[0] - 1

    @property
    def is_zero(self) -> bool:
        return not self._coeffs.any()

    def __call__(self, z):
        z = complex(z)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for a in self._coeffs[::-1]:
            out = out * z + a
        return out

    def __mul__(self, other):
        if isinstance(other, MatrixPoly):
            return multiply(self, other)
        if np.isscalar(other):
            return MatrixPoly(self._coeffs * other)
        if isinstance(other, np.ndarray) and other.ndim == 2:
            return MatrixPoly(self._coeffs @ other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return MatrixPoly(self._coeffs * other)
        if isinstance(other, np.ndarray) and other.ndim == 2:
            return MatrixPoly(other @ self._coeffs)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, MatrixPoly):
            return NotImplemented
        return np.array_equal(self._coeffs, other.coeffs)

    def __hash__(self):
        return hash(self._coeffs.tobytes())

    def __repr__(self):
        return f"MatrixPoly(dim={self.dim}, degree={self.degree})"

    @classmethod
    def identity(cls, d: int) -> "MatrixPoly":
        return cls(np.eye(d, dtype=complex))

    @classmethod
    def diag(cls, entries) -> "MatrixPoly":
        """Diagonal matrix polynomial from a list of scalar :class:`Poly`."""
        entries = [e if isinstance(e, Poly) else Poly([e]) for e in entries]
        n = max(e.degree for e in entries) + 1
        c = np.zeros((n, len(entries), len(entries)), dtype=complex)
        for j, e in enumerate(entries):
            c[: e.degree + 1, j, j] = e.coeffs
        return cls(c)

    def entry(self, i: int, j: int) -> Poly:
        return Poly(self._coeffs[:, i, j])

    def det_poly(self) -> Poly:
        """Determinant as a scalar polynomial, recovered from grid samples."""
        n = self.dim * self.degree
        M = grid_size_for(n)
        dets = np.linalg.det(evaluate_on_grid(self, M).values)
        return Poly(np.fft.fft(dets)[: n + 1] / M)


AnyPoly = Union[Poly, MatrixPoly]


@dataclass(frozen=True)
class GridSamples:
    """Function values on ``theta_k = 2*pi*k/M``, shape ``(M,)`` or ``(M, d, d)``."""

    values: np.ndarray

    def __post_init__(self):
        _check_power_of_two(self.values.shape[0])

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.size) / self.size

    @property
    def is_matrix(self) -> bool:
        return self.values.ndim == 3

    @property
    def dim(self) -> int:
        return self.values.shape[1] if self.is_matrix else 1

    def __mul__(self, other):
        if not isinstance(other, GridSamples):
            return NotImplemented
        if other.size != self.size:
            raise InvalidGridError("grid sizes differ")
        if self.is_matrix or other.is_matrix:
            return GridSamples(_as_matrix_values(self.values) @ _as_matrix_values(other.values))
        return GridSamples(self.values * other.values)


def _as_matrix_values(v):
    return v if v.ndim == 3 else v[:, np.newaxis, np.newaxis]


def _pad(c, n):
    out = np.zeros((n,) + c.shape[1:], dtype=complex)
    out[: len(c)] = c
    return out


def _check_power_of_two(M):
    if not isinstance(M, (int, np.integer)) or M < 1 or (M & (M - 1)):
        raise InvalidGridError(f"grid size must be a power of two, got {M}")


def grid_size_for(degree: int, minimum: int = 2) -> int:
    """Smallest power of two ``>= minimum`` that exceeds ``2*degree + 2``."""
    M = 1
    while M < minimum or M <= 2 * degree + 2:
        M *= 2
    return M


def default_grid(*polys, M: int | None = None) -> int:
    """Default grid size auto-raised to be alias-free for all ``polys``."""
    deg = max((p.degree for p in polys), default=0)
    return grid_size_for(deg, DEFAULT_GRID_SIZE if M is None else M)


def evaluate_on_grid(p: AnyPoly, M: int) -> GridSamples:
    """Sample ``p`` on the ``M``-point unit-circle grid by FFT.

    Raises
    ------
    InvalidGridError
        If ``M`` is not a power of two or ``M <= deg(p)``.
    """
    _check_power_of_two(M)
    if M <= p.degree:
        raise InvalidGridError(f"grid size {M} must exceed degree {p.degree}")
    return GridSamples(np.fft.ifft(_pad(p.coeffs, M), axis=0) * M)


def coefficients_from_grid(samples: GridSamples, degree: int | None = None) -> AnyPoly:
    """Inverse of :func:`evaluate_on_grid`; keeps ``degree + 1`` coefficients."""
    c = np.fft.fft(samples.values, axis=0) / samples.size
    if degree is not None:
        c = c[: degree + 1]
    return MatrixPoly(c) if samples.is_matrix else Poly(c)


def h2_norm_sq(p: AnyPoly) -> float:
    """Squared Hardy-space norm: sum of squared moduli (Frobenius) of the taps."""
    return float(np.sum(np.abs(p.coeffs) ** 2))


def project(p: AnyPoly, N: int) -> AnyPoly:
    """Keep the coefficients of degree ``0..N`` and drop the rest."""
    if N < 0:
        raise ValueError("projection index must be nonnegative")
    return type(p)(p.coeffs[: N + 1])


def multiply(p: AnyPoly, q: AnyPoly) -> AnyPoly:
    """Exact coefficient convolution; the matrix product keeps operand order."""
    if isinstance(p, Poly) and isinstance(q, Poly):
        return Poly(np.convolve(p.coeffs, q.coeffs))
    if isinstance(p, Poly):
        p = MatrixPoly(p.coeffs[:, None, None] * np.eye(q.dim))
    if isinstance(q, Poly):
        q = MatrixPoly(q.coeffs[:, None, None] * np.eye(p.dim))
    if p.dim != q.dim:
        raise DimensionMismatchError(f"cannot multiply {p.dim}x{p.dim} by {q.dim}x{q.dim}")
    a, b = p.coeffs, q.coeffs
    out = np.zeros((len(a) + len(b) - 1, p.dim, p.dim), dtype=complex)
    for i, ai in enumerate(a):
        out[i : i + len(b)] += ai @ b
    return MatrixPoly(out)


def _cluster(values, tol):
    """Group values whose pairwise distance is within ``tol * max(1, |v|)``."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(1.0, abs(values[i]), abs(values[j]))
            if abs(values[i] - values[j]) <= tol * scale:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _polish(c, dc, z, m, steps=8):
    """Multiplicity-aware Newton iteration, keeping the best iterate."""
    best, best_res = z, abs(npoly.polyval(z, c))
    for _ in range(steps):
        if best_res == 0.0:
            break
        d = npoly.polyval(z, dc)
        if d == 0:
            break
        step = m * npoly.polyval(z, c) / d
        z = z - step
        res = abs(npoly.polyval(z, c))
        if res < best_res:
            best, best_res = z, res
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return best


def roots(p: Poly, cluster_tol: float = ROOT_CLUSTER_TOL) -> np.ndarray:
    """Roots of ``p`` repeated according to multiplicity.

    Companion-matrix eigenvalues are clustered (relative radius
    ``cluster_tol``) to detect repeated roots, then each cluster centre
    is polished by Newton's method with the cluster size as multiplicity.
    Zeros at the origin are split off exactly beforehand.
    """
    if p.is_zero:
        raise ZeroPolynomialError("roots of the zero polynomial are undefined")
    c = p.coeffs
    k0 = int(np.flatnonzero(c)[0])
    c = c[k0:]
    out = [np.zeros(k0, dtype=complex)]
    if len(c) > 1:
        eig = npoly.polyroots(c)
        dc = npoly.polyder(c)
        for group in _cluster(eig, cluster_tol):
            m = len(group)
            z = _polish(c, dc, complex(np.mean(eig[group])), m)
            out.append(np.full(m, z, dtype=complex))
    return np.concatenate(out)


def matrix_inverse_on_grid(F: GridSamples) -> GridSamples:
    """Pointwise inverse of matrix samples.

    Raises
    ------
    SingularOnCircleError
        If a node has condition number above ``1e12``; the first such
        node is reported.
    """
    vals = _as_matrix_values(F.values)
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(vals)
    bad = np.flatnonzero(~np.isfinite(cond) | (cond > SINGULAR_COND))
    if bad.size:
        k = int(bad[0])
        raise SingularOnCircleError(
            f"matrix is singular on the circle at node {k} "
            f"(theta={2 * np.pi * k / F.size:.6g}, cond={cond[k]:.3g})",
            node=k,
            cond=float(cond[k]),
        )
    inv = np.linalg.inv(vals)
    return GridSamples(inv if F.is_matrix else inv[:, 0, 0])


def grid_condition(F: GridSamples) -> np.ndarray:
    """Nodewise 2-norm condition numbers of matrix samples."""
    return np.linalg.cond(_as_matrix_values(F.values))
