"""Scalar inner-outer machinery.

Blaschke products, minimum-phase equivalents by root reflection, the
cepstral (Schwarz integral) outer factor of a magnitude, inner quotients
of equal-gain pairs and the modulus-at-origin optimality diagnostic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    InvalidBlaschkeError,
    LogIntegralDivergenceError,
    NotEqualGainError,
    NotMinimumPhaseError,
    PaleyWienerError,
    SingularOnCircleError,
    ZeroPolynomialError,
)
from .polynomial import (
    GridSamples,
    Poly,
    default_grid,
    evaluate_on_grid,
    roots,
)

CIRCLE_SNAP = 1e-9
GAIN_RTOL = 1e-6
OUTER_RTOL = 1e-6
TINY = 1e-300


class DegenerateGridWarning(UserWarning):
    """Some grid samples vanish; a half-step shifted grid was used instead."""


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product with zeros in the open disk.

    The unimodular constant is stored as its angle, so ``|c| = 1`` holds
    exactly.
    """

    zeros: tuple = ()
    angle: float = 0.0

    def __post_init__(self):
        z = tuple(complex(v) for v in np.asarray(self.zeros, dtype=complex).reshape(-1))
        bad = [v for v in z if not abs(v) < 1.0]
        if bad:
            raise InvalidBlaschkeError(f"Blaschke zeros must satisfy |z| < 1, got {bad}")
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "angle", float(self.angle))

    @property
    def constant(self) -> complex:
        return complex(np.exp(1j * self.angle))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.constant, dtype=complex)
        for zk in self.zeros:
            out = out * _blaschke_factor(zk, z)
        return out


def _blaschke_factor(zk, z):
    if zk == 0:
        return z
    return (abs(zk) / zk) * (zk - z) / (1 - np.conj(zk) * z)


def blaschke_eval(b: BlaschkeProduct, M: int) -> GridSamples:
    """Values of ``b`` on the ``M``-point grid; unimodular at every node."""
    return GridSamples(b(np.exp(2j * np.pi * np.arange(M) / M)))


@dataclass(frozen=True)
class ScalarFactorization:
    """``h = blaschke * outer``; no singular inner factor for polynomials."""

    blaschke: BlaschkeProduct
    outer: Poly

    def reconstruct(self, M: int) -> GridSamples:
        return GridSamples(blaschke_eval(self.blaschke, M).values * evaluate_on_grid(self.outer, M).values)


def _snap(zs):
    zs = np.array(zs, dtype=complex)
    r = np.abs(zs)
    near = np.abs(r - 1) < CIRCLE_SNAP
    zs[near] = zs[near] / r[near]
    return zs


def outer_from_zeros(zeros, gain: float = 1.0) -> Poly:
    """Minimum-phase polynomial whose gain is ``gain * prod|e^{it} - z_k|``.

    Interior factors ``z - z0`` become ``1 - conj(z0) z``; origin zeros
    become the constant 1; boundary and exterior zeros are kept.
    Normalized so the value at 0 is real and positive.
    """
    zs = _snap(zeros)
    c = np.array([abs(gain)], dtype=complex)
    for z0 in zs:
        if abs(z0) < 1:
            c = np.convolve(c, [1.0, -np.conj(z0)])
        else:
            c = np.convolve(c, [-z0, 1.0])
    c *= np.conj(c[0]) / abs(c[0])
    c[0] = abs(c[0])
    return Poly(c)


def minimum_phase_equivalent(p: Poly) -> Poly:
    """Equal-gain polynomial with no zeros in the open unit disk.

    Zeros within ``1e-9`` of the circle are snapped onto it and kept.
    The result has a positive real value at ``z = 0``.
    """
    if p.is_zero:
        raise ZeroPolynomialError("minimum-phase equivalent of the zero polynomial")
    lead = p.coeffs[-1]
    zs = roots(p) if p.degree >= 1 else []
    return outer_from_zeros(zs, abs(lead))


def factorize(p: Poly) -> ScalarFactorization:
    """Blaschke times outer factorization of a polynomial."""
    if p.is_zero:
        raise ZeroPolynomialError("cannot factorize the zero polynomial")
    zs = _snap(roots(p)) if p.degree >= 1 else np.zeros(0, dtype=complex)
    outer = outer_from_zeros(zs, abs(p.coeffs[-1]))
    inner_zeros = tuple(z for z in zs if abs(z) < 1)
    M = default_grid(p, M=64)
    partial = BlaschkeProduct(inner_zeros)
    ratio = evaluate_on_grid(p, M).values / (
        blaschke_eval(partial, M).values * evaluate_on_grid(outer, M).values
    )
    angle = float(np.angle(np.mean(ratio / np.abs(ratio))))
    return ScalarFactorization(BlaschkeProduct(inner_zeros, angle), outer)


def _log_magnitude_samples(w):
    w = np.asarray(w.values if isinstance(w, GridSamples) else w)
    if np.iscomplexobj(w):
        if np.any(np.abs(w.imag) > 1e-12 * np.max(np.abs(w))):
            raise PaleyWienerError("magnitude samples must be real")
        w = w.real
    if np.any(~(w > 0)):
        k = int(np.flatnonzero(~(w > 0))[0])
        raise PaleyWienerError(f"nonpositive magnitude sample at node {k}: {w[k]!r}")
    return np.log(w)


def _inferred_degree(w, rtol=1e-11):
    c = np.abs(np.fft.fft(w)) / len(w)
    half = c[: len(w) // 2]
    big = np.flatnonzero(half > rtol * c[0])
    return int(big[-1]) if big.size else 0


def outer_from_magnitude(w, M: int | None = None, K: int | None = None) -> Poly:
    """Outer polynomial approximation whose squared gain matches ``w``.

    Parameters
    ----------
    w : GridSamples or array_like
        Positive samples of ``|f*|**2`` on the uniform grid.
    M : int, optional
        Grid size; checked against ``len(w)`` when given.
    K : int, optional
        Output degree. Defaults to four times the degree inferred from
        the Fourier coefficients of ``w``, and at least 64.

    Notes
    -----
    The Fourier coefficients of ``log(w)/2`` are completed to an analytic
    function by doubling the positive-index terms (Schwarz kernel); its
    exponential is then expanded on the grid and truncated at degree K.
    """
    logw = _log_magnitude_samples(w)
    n = logw.shape[0]
    if M is not None and M != n:
        raise ValueError(f"grid size {M} does not match {n} samples")
    GridSamples(logw)  # validates power of two
    if K is None:
        K = max(64, 4 * _inferred_degree(np.exp(logw)))
    K = min(K, n // 2 - 1)
    cep = np.fft.fft(0.5 * logw) / n
    analytic = np.zeros(n, dtype=complex)
    analytic[0] = cep[0].real
    analytic[1 : n // 2] = 2 * cep[1 : n // 2]
    analytic[n // 2] = cep[n // 2]
    values = np.exp(np.fft.ifft(analytic) * n)
    coeffs = np.fft.fft(values) / n
    coeffs = coeffs[: K + 1]
    coeffs[0] = coeffs[0].real
    return Poly(coeffs)


def inner_quotient(g: Poly, f: Poly, M: int | None = None) -> GridSamples:
    """Samples of the inner function ``u = g / f`` for an equal-gain pair.

    Raises
    ------
    NotEqualGainError
        If ``|g*|`` and ``|f*|`` differ by more than ``1e-6`` relative.
    NotMinimumPhaseError
        If ``f`` has a zero strictly inside the disk.
    """
    M = default_grid(f, g, M=M)
    fv = evaluate_on_grid(f, M).values
    gv = evaluate_on_grid(g, M).values
    scale = np.max(np.abs(fv))
    gap = np.max(np.abs(np.abs(gv) - np.abs(fv)))
    if gap > GAIN_RTOL * scale:
        raise NotEqualGainError(f"gains differ by {gap:.3g} (scale {scale:.3g})")
    if f.degree >= 1:
        inside = [z for z in roots(f) if abs(z) < 1 - CIRCLE_SNAP]
        if inside:
            raise NotMinimumPhaseError(f"denominator has interior zeros {inside}")
    small = np.flatnonzero(np.abs(fv) < TINY)
    if small.size:
        raise SingularOnCircleError(f"denominator vanishes at node {small[0]}", node=int(small[0]))
    return GridSamples(gv / fv)


def unitarity_defect(u: GridSamples) -> float:
    """Largest deviation of ``|u(theta_k)|`` from 1."""
    return float(np.max(np.abs(np.abs(u.values) - 1.0)))


class OptimalityGap(NamedTuple):
    lhs: float
    rhs: float
    is_outer: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs


def optimality_gap(p: Poly, M: int | None = None) -> OptimalityGap:
    """Compare ``|p(0)|`` with ``exp(mean log|p*|)`` on the grid.

    Equality (to ``1e-6`` relative) characterizes outer polynomials.
    For interior zeros ``z_k`` away from the origin, ``lhs / rhs`` equals
    ``prod |z_k|``. A zero at the origin is not normalized away; it gives
    ``lhs = 0``.

    Raises
    ------
    LogIntegralDivergenceError
        If ``p*`` vanishes at a grid node.
    """
    if p.is_zero:
        raise ZeroPolynomialError("optimality gap of the zero polynomial")
    M = default_grid(p, M=M)
    mag = np.abs(evaluate_on_grid(p, M).values)
    zero = np.flatnonzero(mag < TINY)
    if zero.size:
        raise LogIntegralDivergenceError(
            f"log|p*| diverges: sample vanishes at node {zero[0]} of {M}"
        )
    lhs = float(abs(p.coeffs[0]))
    rhs = float(np.exp(np.mean(np.log(mag))))
    return OptimalityGap(lhs, rhs, lhs >= rhs * (1 - OUTER_RTOL))


def paley_wiener_integral(p: Poly, M: int | None = None) -> float:
    """Grid mean of ``log|p*|``, the normalized log-integral of the gain.

    Nodes where ``|p*| < 1e-300`` are reported through a
    :class:`DegenerateGridWarning`; the mean is then taken on the grid
    shifted by half a step, where a nonzero polynomial cannot vanish at
    every node.
    """
    if p.is_zero:
        raise ZeroPolynomialError("log-integral of the zero polynomial diverges")
    M = default_grid(p, M=M)
    mag = np.abs(evaluate_on_grid(p, M).values)
    zero = np.flatnonzero(mag < TINY)
    if zero.size:
        warnings.warn(
            f"|p*| vanishes at grid nodes {zero.tolist()}; using the half-step grid",
            DegenerateGridWarning,
            stacklevel=2,
        )
        shift = np.exp(1j * np.pi * np.arange(p.degree + 1) / M)
        mag = np.abs(evaluate_on_grid(Poly(p.coeffs * shift), M).values)
    return float(np.mean(np.log(mag)))


def is_minimum_phase(p: Poly) -> bool:
    """True when ``p`` has no zeros strictly inside the unit disk."""
    if p.is_zero:
        raise ZeroPolynomialError("zero polynomial")
    if p.degree == 0:
        return True
    return not any(abs(z) < 1 - CIRCLE_SNAP for z in roots(p))


__all__ = [
    "BlaschkeProduct",
    "DegenerateGridWarning",
    "OptimalityGap",
    "ScalarFactorization",
    "blaschke_eval",
    "factorize",
    "inner_quotient",
    "is_minimum_phase",
    "minimum_phase_equivalent",
    "optimality_gap",
    "outer_from_magnitude",
    "outer_from_zeros",
    "paley_wiener_integral",
    "unitarity_defect",
]
