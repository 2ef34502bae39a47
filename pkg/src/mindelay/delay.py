"""Partial-energy curves and the energy delay property of outer filters.

For an outer (minimum-phase) ``f`` and any ``g`` with the same gain on
the unit circle, the cumulative tap energy of ``f`` dominates that of
``g`` at every index. The matrix version compares Frobenius energies of
matrix taps when ``F F^H = G G^H`` on the circle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, NotComparableError
from .polynomial import (
    AnyPoly,
    GridSamples,
    MatrixPoly,
    Poly,
    default_grid,
    evaluate_on_grid,
    project,
)
from .scalar import GAIN_RTOL, OUTER_RTOL, TINY, outer_from_zeros

DEFAULT_RTOL = 1e-8


def energy_curve(p: AnyPoly) -> np.ndarray:
    """Cumulative energies ``E_N = sum_{n<=N} ||coeff_n||**2``, ``N = 0..deg``."""
    c = np.abs(p.coeffs) ** 2
    if c.ndim == 3:
        c = c.sum(axis=(1, 2))
    return np.cumsum(c)


def _padded(curve, n):
    return np.concatenate([curve, np.full(n - len(curve), curve[-1])])


@dataclass(frozen=True)
class DelayReport:
    """Outcome of comparing the energy curves of an equal-gain pair.

    ``passed`` requires ``min_margin >= -tol`` and ``total_gap <= tol``.
    ``f_is_outer`` records whether the first argument satisfies the
    outer hypothesis; a failure with ``f_is_outer`` false is a violated
    hypothesis, not a counterexample.
    """

    curve_f: np.ndarray
    curve_g: np.ndarray
    margins: np.ndarray
    min_margin: float
    total_gap: float
    tol: float
    passed: bool
    f_is_outer: Optional[bool] = None

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def is_counterexample(self) -> bool:
        return not self.passed and bool(self.f_is_outer)


def _samples(p, M):
    v = evaluate_on_grid(p, M).values
    return v


def _gains(f, g, M):
    fv, gv = _samples(f, M), _samples(g, M)
    if isinstance(f, MatrixPoly):
        sf = fv @ fv.conj().transpose(0, 2, 1)
        sg = gv @ gv.conj().transpose(0, 2, 1)
        scale = np.max(np.linalg.norm(sf, axis=(1, 2)))
        gap = np.max(np.linalg.norm(sf - sg, axis=(1, 2)))
    else:
        scale = np.max(np.abs(fv))
        gap = np.max(np.abs(np.abs(fv) - np.abs(gv)))
    return fv, gap, scale


def check_equal_gain(f: AnyPoly, g: AnyPoly, M: int | None = None, rtol: float = GAIN_RTOL):
    """Raise :class:`NotComparableError` unless ``f`` and ``g`` share their gain.

    Scalar pairs compare ``|f*|`` with ``|g*|``; matrix pairs compare
    ``F* F*^H`` with ``G* G*^H`` nodewise in Frobenius norm. Returns the
    grid samples of ``f``.
    """
    if type(f) is not type(g):
        raise NotComparableError("cannot compare a scalar with a matrix filter")
    if isinstance(f, MatrixPoly) and f.dim != g.dim:
        raise DimensionMismatchError(f"dimensions differ: {f.dim} vs {g.dim}")
    M = default_grid(f, g, M=M)
    fv, gap, scale = _gains(f, g, M)
    if gap > rtol * scale:
        raise NotComparableError(
            f"filters do not have equal gain: max deviation {gap:.3g} vs scale {scale:.3g}"
        )
    return fv


def _outer_hypothesis(f, fv):
    """Modulus-at-origin equality for ``f`` (or ``det F``) on the grid."""
    if isinstance(f, MatrixPoly):
        at0 = abs(np.linalg.det(f.coeffs[0]))
        mag = np.abs(np.linalg.det(fv))
    else:
        at0 = abs(f.coeffs[0])
        mag = np.abs(fv)
    if np.any(mag < TINY):
        return None
    return bool(at0 >= np.exp(np.mean(np.log(mag))) * (1 - OUTER_RTOL))


def verify_energy_delay(
    f: AnyPoly, g: AnyPoly, tol: float | None = None, M: int | None = None
) -> DelayReport:
    """Check ``E_N(f) >= E_N(g) - tol`` for every ``N`` and equal totals.

    Parameters
    ----------
    f, g : Poly or MatrixPoly
        Candidate outer filter and an equal-gain competitor.
    tol : float, optional
        Absolute tolerance; defaults to ``1e-8`` times the larger total
        energy.
    M : int, optional
        Grid size for the equal-gain precondition.

    Raises
    ------
    NotComparableError
        If the gains differ, which is a failed precondition rather than a
        violation of the energy delay property.
    """
    fv = check_equal_gain(f, g, M)
    cf, cg = energy_curve(f), energy_curve(g)
    n = max(len(cf), len(cg))
    cf, cg = _padded(cf, n), _padded(cg, n)
    if tol is None:
        tol = DEFAULT_RTOL * max(cf[-1], cg[-1])
    margins = cf - cg
    min_margin = float(margins.min())
    total_gap = float(abs(cf[-1] - cg[-1]))
    passed = min_margin >= -tol and total_gap <= tol
    return DelayReport(cf, cg, margins, min_margin, total_gap, float(tol), passed,
                       _outer_hypothesis(f, fv))


def generate_equal_gain_pair(seed: int, degree: int, rng=None):
    """Random outer ``f`` and an equal-gain, non-outer ``g`` of the same degree.

    Zeros are drawn away from the annulus ``0.98 <= |z| <= 1.02``; ``f``
    is their minimum-phase equivalent and ``g`` reflects a random
    nonempty subset of the zeros of ``f`` into the disk and applies a
    random unimodular constant. Both are scaled to unit total energy.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    rng = np.random.default_rng(seed) if rng is None else rng
    inside = rng.random(degree) < 0.5
    radius = np.where(inside, rng.uniform(0.35, 0.98, degree), rng.uniform(1.02, 3.0, degree))
    zeros = radius * np.exp(2j * np.pi * rng.random(degree))
    f = outer_from_zeros(zeros)
    f_zeros = np.where(np.abs(zeros) < 1, 1 / np.conj(zeros), zeros)
    flip = rng.random(degree) < 0.5
    flip[rng.integers(degree)] = True
    g_zeros = np.where(flip, 1 / np.conj(f_zeros), f_zeros)
    # |e^{it} - w| = |w| |e^{it} - 1/conj(w)|, so reflected factors keep the gain
    g = Poly.from_roots(g_zeros, np.prod(np.abs(f_zeros[flip])))
    phase = np.exp(2j * np.pi * rng.random())
    g = Poly(g.coeffs * phase * abs(f.coeffs[-1]))
    scale = 1 / np.sqrt(np.sum(np.abs(f.coeffs) ** 2))
    return Poly(f.coeffs * scale), Poly(g.coeffs * scale)


def delay_ordering(candidates, M: int | None = None) -> list:
    """Permutation sorting equal-gain candidates by energy build-up, fastest first.

    Curves are compared lexicographically in descending order after
    padding to a common length; an outer candidate comes first.
    """
    candidates = list(candidates)
    if not candidates:
        return []
    for other in candidates[1:]:
        check_equal_gain(candidates[0], other, M)
    curves = [energy_curve(p) for p in candidates]
    n = max(len(c) for c in curves)
    total = max(c[-1] for c in curves) or 1.0
    keys = [tuple(-np.round(_padded(c, n) / total, 12)) for c in curves]
    return sorted(range(len(candidates)), key=lambda i: keys[i])


def _grid_norm_sq(values):
    return float(np.mean(np.sum(np.abs(values.reshape(values.shape[0], -1)) ** 2, axis=1)))


def proof_chain(f: AnyPoly, g: AnyPoly, u: GridSamples, N: int) -> tuple:
    """Squared norms along the projection argument for ``g = f u``.

    Returns ``(|P_N f|, |P_N(f) u|, |P_N(P_N(f) u)|, |P_N g|)`` squared,
    where ``u`` is given by grid samples of the inner quotient. The chain
    must read ``a == b >= c == d``.
    """
    M = u.size
    pf = project(f, N)
    pf_vals = evaluate_on_grid(pf, M).values
    prod = pf_vals @ u.values if u.is_matrix else pf_vals * u.values
    head = (np.fft.fft(prod, axis=0) / M)[: N + 1]
    return (
        float(np.sum(np.abs(pf.coeffs) ** 2)),
        _grid_norm_sq(prod),
        float(np.sum(np.abs(head) ** 2)),
        float(np.sum(np.abs(project(g, N).coeffs) ** 2)),
    )
